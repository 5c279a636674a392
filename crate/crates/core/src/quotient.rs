//! ℤ-module structure of ℤ[x₁..xₙ]/𝔞 and the coordinate map φ.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::groebner::{self, GroebnerBasis, GroebnerError, Ideal, DEFAULT_PAIR_BUDGET};
use crate::poly::{var_name, Monomial, MonomialOrder, PolyError, Polynomial};
use crate::{ErrorKind, HasKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuotientError {
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("quotient is not a finitely generated module: no monic pure power of `{0}` among the leading terms")]
    Infinite(String),
    #[error("quotient is not a free module (torsion at {monomial} of order {order}); coordinates are unavailable")]
    NotFree { monomial: String, order: BigInt },
    #[error("coordinate vector has length {got}, expected {expected}")]
    Length { got: usize, expected: usize },
    #[error("lattice vector {0} is zero and gives no binomial")]
    ZeroVector(usize),
    #[error("lattice vector entry {0} is too large for an exponent")]
    ExponentOverflow(BigInt),
}

impl From<PolyError> for QuotientError {
    fn from(e: PolyError) -> Self {
        QuotientError::Groebner(e.into())
    }
}

impl HasKind for QuotientError {
    fn kind(&self) -> ErrorKind {
        match self {
            QuotientError::Groebner(e) => e.kind(),
            _ => ErrorKind::Domain,
        }
    }
}

/// Leading-coefficient data at a monomial `x^α`: the basis elements whose
/// leading monomial divides `x^α` and the nonnegative generator of the ideal
/// their leading coefficients span (0 when there are none).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LctEntry {
    pub indices: Vec<usize>,
    pub gen: BigInt,
}

#[derive(Clone, Debug)]
pub struct QuotientRing {
    ideal: Ideal,
    gb: GroebnerBasis,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    lct: Vec<LctEntry>,
    free: bool,
}

/// Leading-coefficient entry of `m` for the basis `gb`.
pub fn lct_entry(gb: &GroebnerBasis, m: &Monomial) -> LctEntry {
    let mut indices = Vec::new();
    let mut gen = BigInt::zero();
    for (i, (lc, lm)) in gb.leading_terms().into_iter().enumerate() {
        if lm.divides(m) {
            indices.push(i);
            gen = gen.gcd(&lc);
        }
    }
    if gb.modulus().is_some() && !gen.is_zero() {
        gen = BigInt::one();
    }
    LctEntry { indices, gen }
}

/// All exponent vectors `e` with `0 <= e[i] < bound[i]`, last index fastest.
pub(crate) fn box_exponents(bound: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &b in bound {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                (0..b).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Builds the quotient with the default Buchberger budget.
pub fn build_quotient(ideal: &Ideal, ord: &MonomialOrder) -> Result<QuotientRing, QuotientError> {
    build_quotient_with_budget(ideal, ord, DEFAULT_PAIR_BUDGET)
}

pub fn build_quotient_with_budget(
    ideal: &Ideal,
    ord: &MonomialOrder,
    budget: u64,
) -> Result<QuotientRing, QuotientError> {
    let gb = groebner::groebner_with_budget(ideal, ord, budget)?;
    QuotientRing::from_groebner(ideal.clone(), gb)
}

impl QuotientRing {
    /// Quotient data for an already short-reduced basis of `ideal`.
    pub fn from_groebner(ideal: Ideal, gb: GroebnerBasis) -> Result<Self, QuotientError> {
        let n = gb.nvars();
        let leads = gb.leading_terms();
        // a monic pure power bounds every exponent of that variable
        let mut bound = vec![None::<u32>; n];
        for (lc, lm) in &leads {
            if lc.is_one() {
                if let Some((i, e)) = lm.pure_power_var() {
                    bound[i] = Some(bound[i].map_or(e, |b: u32| b.min(e)));
                }
                if lm.is_one() {
                    bound.iter_mut().for_each(|b| *b = Some(0));
                }
            }
        }
        if let Some(i) = bound.iter().position(|b| b.is_none()) {
            return Err(QuotientError::Infinite(var_name(n, i)));
        }
        let bound: Vec<u32> = bound.into_iter().map(|b| b.unwrap()).collect();

        let mut basis = Vec::new();
        let mut lct = Vec::new();
        for e in box_exponents(&bound) {
            let m = Monomial::new(e);
            let entry = lct_entry(&gb, &m);
            if !entry.gen.is_one() {
                basis.push(m);
                lct.push(entry);
            }
        }
        let ord = gb.order().clone();
        let mut perm: Vec<usize> = (0..basis.len()).collect();
        perm.sort_by(|&a, &b| ord.cmp(&basis[a], &basis[b]));
        let basis: Vec<Monomial> = perm.iter().map(|&i| basis[i].clone()).collect();
        let lct: Vec<LctEntry> = perm.iter().map(|&i| lct[i].clone()).collect();
        let index = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let free = gb.is_monic();
        Ok(QuotientRing {
            ideal,
            gb,
            basis,
            index,
            lct,
            free,
        })
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn gb(&self) -> &GroebnerBasis {
        &self.gb
    }

    pub fn order(&self) -> &MonomialOrder {
        self.gb.order()
    }

    pub fn nvars(&self) -> usize {
        self.gb.nvars()
    }

    pub fn modulus(&self) -> Option<&BigInt> {
        self.gb.modulus()
    }

    /// Standard monomials, ascending under the order.
    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    /// `N`, the number of standard monomials.
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn is_free(&self) -> bool {
        self.free
    }

    pub fn is_monic(&self) -> bool {
        self.gb.is_monic()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Leading-coefficient entries, parallel to [`QuotientRing::basis`].
    pub fn lct(&self) -> &[LctEntry] {
        &self.lct
    }

    pub fn lct_table(&self) -> BTreeMap<Monomial, LctEntry> {
        self.basis.iter().cloned().zip(self.lct.iter().cloned()).collect()
    }

    /// First standard monomial whose coset is torsion, with its order.
    pub fn torsion_witness(&self) -> Option<(Monomial, BigInt)> {
        self.basis
            .iter()
            .zip(&self.lct)
            .find(|(_, e)| !e.gen.is_zero() && !e.gen.is_one())
            .map(|(m, e)| (m.clone(), e.gen.clone()))
    }

    fn require_free(&self) -> Result<(), QuotientError> {
        if self.free {
            return Ok(());
        }
        let (m, k) = self.torsion_witness().expect("non-monic basis has torsion");
        Err(QuotientError::NotFree {
            monomial: m.to_string(),
            order: k,
        })
    }

    fn lift_input(&self, f: &Polynomial) -> Result<Polynomial, QuotientError> {
        if f.nvars() != self.nvars() {
            return Err(PolyError::Arity(format!(
                "polynomial in {} variables, quotient in {}",
                f.nvars(),
                self.nvars()
            ))
            .into());
        }
        if f.modulus() == self.modulus() {
            Ok(f.clone())
        } else {
            Ok(f.lift().with_modulus(self.modulus().cloned()))
        }
    }

    /// Canonical coset representative. Integer inputs are reduced mod `p`
    /// first when the quotient has a modulus.
    pub fn reduce(&self, f: &Polynomial) -> Result<Polynomial, QuotientError> {
        Ok(groebner::normal_form(&self.lift_input(f)?, &self.gb))
    }

    /// `normal_form(f·g)`
    pub fn mul(&self, f: &Polynomial, g: &Polynomial) -> Result<Polynomial, QuotientError> {
        let f = self.lift_input(f)?;
        let g = self.lift_input(g)?;
        Ok(groebner::normal_form(&f.try_mul(&g)?, &self.gb))
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool, QuotientError> {
        Ok(self.reduce(f)?.is_zero())
    }

    /// Coordinates of the coset of `f` over the standard monomials.
    pub fn phi(&self, f: &Polynomial) -> Result<Vec<BigInt>, QuotientError> {
        self.require_free()?;
        let r = self.reduce(f)?;
        Ok(self.coords_of_reduced(&r))
    }

    /// Coordinates of an already reduced element (no freeness check).
    pub(crate) fn coords_of_reduced(&self, r: &Polynomial) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.basis.len()];
        for (m, c) in r.terms() {
            let i = self.index_of(m).expect("normal form supported on the standard monomials");
            v[i] = c.clone();
        }
        v
    }

    pub fn phi_inv(&self, v: &[BigInt]) -> Result<Polynomial, QuotientError> {
        self.require_free()?;
        if v.len() != self.basis.len() {
            return Err(QuotientError::Length {
                got: v.len(),
                expected: self.basis.len(),
            });
        }
        let mut p = Polynomial::zero(self.nvars()).with_modulus(self.modulus().cloned());
        for (m, c) in self.basis.iter().zip(v) {
            p.add_term(m.clone(), c.clone());
        }
        Ok(p)
    }
}

/// Binomial generators `x^{v⁺} − x^{v⁻}`, one per basis vector.
pub fn lattice_ideal(basis: &[Vec<BigInt>]) -> Result<Ideal, QuotientError> {
    let mut gens = Vec::with_capacity(basis.len());
    for (k, v) in basis.iter().enumerate() {
        if v.iter().all(|c| c.is_zero()) {
            return Err(QuotientError::ZeroVector(k));
        }
        let to_exp = |c: &BigInt| -> Result<u32, QuotientError> {
            u32::try_from(c.abs()).map_err(|_| QuotientError::ExponentOverflow(c.clone()))
        };
        let mut pos = vec![0u32; v.len()];
        let mut neg = vec![0u32; v.len()];
        for (i, c) in v.iter().enumerate() {
            if c.is_positive() {
                pos[i] = to_exp(c)?;
            } else if c.is_negative() {
                neg[i] = to_exp(c)?;
            }
        }
        let mut g = Polynomial::term(Monomial::new(pos), 1);
        g.add_term(Monomial::new(neg), -BigInt::one());
        gens.push(g);
    }
    if gens.is_empty() {
        return Err(GroebnerError::NoGenerators.into());
    }
    Ok(Ideal::new(gens)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(gens: &[&str], n: usize) -> QuotientRing {
        let i = Ideal::parse(gens, Some(n), None).unwrap();
        build_quotient(&i, &MonomialOrder::lex(n)).unwrap()
    }

    fn p(s: &str, n: usize) -> Polynomial {
        Polynomial::parse(s, Some(n)).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn worked_example() {
        let r = q(&["3*x^2", "5*x^2", "y"], 2);
        assert!(r.is_free());
        assert_eq!(r.dimension(), 2);
        let names: Vec<String> = r.basis().iter().map(|m| m.to_string()).collect();
        assert_eq!(names, ["1", "x"]);
        assert_eq!(r.phi(&p("6*x", 2)).unwrap(), ints(&[0, 6]));
        assert_eq!(r.phi(&Polynomial::zero(2)).unwrap(), ints(&[0, 0]));
    }

    #[test]
    fn cube_example() {
        let r = q(&["x1^2 - 1", "x2^2 - 1", "x3^3 - 1"], 3);
        assert!(r.is_free());
        assert_eq!(r.dimension(), 12);
    }

    #[test]
    fn torsion_quotient() {
        let r = q(&["2*x", "x^2"], 1);
        assert!(!r.is_free());
        assert_eq!(r.dimension(), 2);
        let x = Monomial::var(1, 0);
        assert_eq!(r.lct_table()[&x].gen, BigInt::from(2));
        assert_eq!(r.torsion_witness(), Some((x, BigInt::from(2))));
        assert!(matches!(r.phi(&p("x", 1)), Err(QuotientError::NotFree { .. })));
    }

    #[test]
    fn infinite_quotient_names_variable() {
        let i = Ideal::parse(&["x^2"], Some(2), None).unwrap();
        let err = build_quotient(&i, &MonomialOrder::lex(2)).unwrap_err();
        assert_eq!(err, QuotientError::Infinite("y".into()));
        let i = Ideal::parse(&["2*x - 1"], Some(1), None).unwrap();
        assert!(matches!(build_quotient(&i, &MonomialOrder::lex(1)), Err(QuotientError::Infinite(_))));
    }

    #[test]
    fn phi_long_division() {
        let r = q(&["x^2 + x + 1"], 1);
        assert_eq!(r.phi(&p("x^3", 1)).unwrap(), ints(&[1, 0]));
        assert_eq!(r.mul(&p("x", 1), &p("x", 1)).unwrap(), p("-x - 1", 1));
        assert!(r.mul(&p("x", 1), &Polynomial::zero(1)).unwrap().is_zero());
        let v = r.phi(&p("3*x^4 - 2", 1)).unwrap();
        assert_eq!(r.phi_inv(&v).unwrap(), r.reduce(&p("3*x^4 - 2", 1)).unwrap());
        let r = q(&["x^2 - 1"], 1);
        assert_eq!(r.mul(&p("x", 1), &p("x", 1)).unwrap(), p("1", 1));
    }

    #[test]
    fn unit_ideal_is_zero_dimensional() {
        let r = q(&["x", "x - 1"], 1);
        assert_eq!(r.dimension(), 0);
        assert!(r.is_free());
    }

    #[test]
    fn binomials() {
        let i = lattice_ideal(&[ints(&[1, -1])]).unwrap();
        assert_eq!(i.generators()[0], p("x1 - x2", 2));
        let i = lattice_ideal(&[ints(&[2, 0, -3])]).unwrap();
        assert_eq!(i.generators()[0], p("x1^2 - x3^3", 3));
        assert_eq!(lattice_ideal(&[ints(&[0, 0])]).unwrap_err(), QuotientError::ZeroVector(0));

        let i = lattice_ideal(&[ints(&[1, -1]), ints(&[0, 3])]).unwrap();
        let r = build_quotient(&i, &MonomialOrder::lex(2)).unwrap();
        assert!(r.is_monic());
        assert!(r.contains(&p("x1^3 - 1", 2)).unwrap());
        assert_eq!(r.dimension(), 3);
    }

    #[test]
    fn modular_quotient() {
        let i = Ideal::parse(&["x^2 + x + 1"], Some(1), Some(7.into())).unwrap();
        let r = build_quotient(&i, &MonomialOrder::lex(1)).unwrap();
        assert_eq!(r.dimension(), 2);
        assert_eq!(r.reduce(&p("x^2", 1)).unwrap().to_string(), "6*x + 6");
    }
}
