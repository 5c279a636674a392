use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Monomial, MonomialOrder, PolyError};

/// Sparse multivariate polynomial with arbitrary-precision integer
/// coefficients, optionally reduced modulo a prime `p`.
///
/// Zero coefficients are never stored. With a modulus every stored
/// coefficient lies in `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial {
    nvars: usize,
    modulus: Option<BigInt>,
    terms: BTreeMap<Monomial, BigInt>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            modulus: None,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    /// The variable `x_{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(Monomial::var(nvars, i), 1)
    }

    pub fn term(m: Monomial, c: impl Into<BigInt>) -> Self {
        let mut p = Polynomial::zero(m.nvars());
        p.add_term(m, c.into());
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; repeated
    /// monomials are summed.
    pub fn from_terms<I, C>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, C)>,
        C: Into<BigInt>,
    {
        let mut p = Polynomial::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length must equal nvars");
            p.add_term(Monomial::new(e), c.into());
        }
        p
    }

    /// Reinterprets the coefficients modulo `p` (least nonnegative residues).
    pub fn with_modulus(mut self, p: Option<BigInt>) -> Self {
        self.modulus = p;
        if let Some(p) = &self.modulus {
            let p = p.clone();
            self.terms.retain(|_, c| {
                *c = c.mod_floor(&p);
                !c.is_zero()
            });
        }
        self
    }

    /// Drops the modulus, keeping the stored residues as integers.
    pub fn lift(&self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            modulus: None,
            terms: self.terms.clone(),
        }
    }

    /// Integer polynomial with each residue replaced by its centered
    /// representative in `[-(p-1)/2, (p-1)/2]`. Identity without a modulus.
    pub fn centered(&self) -> Polynomial {
        let Some(p) = &self.modulus else {
            return self.clone();
        };
        let half = p / 2u32;
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let c = if c > &half { c - p } else { c.clone() };
                (m.clone(), c)
            })
            .collect();
        Polynomial {
            nvars: self.nvars,
            modulus: None,
            terms,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn modulus(&self) -> Option<&BigInt> {
        self.modulus.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in storage order (plain lexicographic on exponents, ascending).
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, BigInt)> {
        self.terms.into_iter()
    }

    /// Terms sorted by `ord`, largest first.
    pub fn sorted_terms(&self, ord: &MonomialOrder) -> Vec<(&Monomial, &BigInt)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| ord.cmp(b.0, a.0));
        v
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Adds `c * m` in place.
    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                let c = match &self.modulus {
                    Some(p) => c.mod_floor(p),
                    None => c,
                };
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let mut s = o.get() + c;
                if let Some(p) = &self.modulus {
                    s = s.mod_floor(p);
                }
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::Arity(format!(
                "variable count {} vs {}",
                self.nvars, other.nvars
            )));
        }
        if self.modulus != other.modulus {
            return Err(PolyError::Arity(format!(
                "modulus {:?} vs {:?}",
                self.modulus.as_ref().map(|p| p.to_string()),
                other.modulus.as_ref().map(|p| p.to_string())
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_compatible(other)?;
        let mut out = Polynomial {
            nvars: self.nvars,
            modulus: self.modulus.clone(),
            terms: BTreeMap::new(),
        };
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scalar_mul(&self, c: &BigInt) -> Polynomial {
        let mut out = Polynomial {
            nvars: self.nvars,
            modulus: self.modulus.clone(),
            terms: BTreeMap::new(),
        };
        if c.is_zero() {
            return out;
        }
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a * c);
        }
        out
    }

    /// `c * m * self`
    pub fn mul_term(&self, m: &Monomial, c: &BigInt) -> Polynomial {
        let mut out = Polynomial {
            nvars: self.nvars,
            modulus: self.modulus.clone(),
            terms: BTreeMap::new(),
        };
        if c.is_zero() {
            return out;
        }
        for (mm, a) in &self.terms {
            out.add_term(mm.mul(m), a * c);
        }
        out
    }

    /// Leading coefficient and monomial under `ord`.
    pub fn leading(&self, ord: &MonomialOrder) -> Result<(BigInt, Monomial), PolyError> {
        self.leading_term(ord)
            .map(|(m, c)| (c.clone(), m.clone()))
            .ok_or(PolyError::ZeroPolynomial)
    }

    pub fn leading_term(&self, ord: &MonomialOrder) -> Option<(&Monomial, &BigInt)> {
        self.terms
            .iter()
            .reduce(|a, b| if ord.cmp(a.0, b.0).is_lt() { b } else { a })
    }

    /// Largest absolute coefficient; 0 for the zero polynomial. Residues are
    /// taken as stored, use [`Polynomial::centered`] first for a mod-p norm.
    pub fn inf_norm(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// Largest exponent of variable `i` (zero-based); 0 for the zero polynomial.
    pub fn maxdeg(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.exponent(i)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Flips the sign so that the leading coefficient under `ord` is positive.
    pub fn normalize_sign(self, ord: &MonomialOrder) -> Polynomial {
        match self.leading_term(ord) {
            Some((_, c)) if c.is_negative() => -self,
            _ => self,
        }
    }

    /// Substitutes `values[i]` for `x_{i+1}`.
    pub fn evaluate<T>(&self, values: &[T]) -> T
    where
        T: Clone + Zero + One + Mul<Output = T> + Add<Output = T> + From<f64>,
    {
        let mut acc = T::zero();
        for (m, c) in &self.terms {
            let mut t = T::from(bigint_to_f64(c));
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    t = t * values[i].clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Formats the terms largest first under `ord`.
    pub fn to_text(&self, ord: &MonomialOrder) -> String {
        let terms = self.sorted_terms(ord);
        format_terms(terms.into_iter())
    }
}

pub(crate) fn bigint_to_f64(c: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    c.to_f64().unwrap_or(if c.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

fn format_terms<'a>(terms: impl Iterator<Item = (&'a Monomial, &'a BigInt)>) -> String {
    use fmt::Write;
    let mut s = String::new();
    for (i, (m, c)) in terms.enumerate() {
        let neg = c.is_negative();
        match (i, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        let a = c.abs();
        if m.is_one() {
            write!(s, "{a}").unwrap();
        } else {
            if !a.is_one() {
                write!(s, "{a}*").unwrap();
            }
            m.write_named(&mut s).unwrap();
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

/// Canonical text: terms largest first under the default lex order.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_terms(self.terms.iter().rev()))
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;

    fn neg(mut self) -> Polynomial {
        match self.modulus.clone() {
            None => self.terms.values_mut().for_each(|c| *c = -&*c),
            Some(p) => self.terms.values_mut().for_each(|c| *c = &p - &*c),
        }
        self
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        -self.clone()
    }
}

// Operator forms panic on mismatched rings; use the `try_*` methods when the
// operands come from untrusted input.
impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial ring mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial ring mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial ring mismatch")
    }
}

impl Add for Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::OrderKind;

    fn p(s: &str, n: usize) -> Polynomial {
        Polynomial::parse(s, Some(n)).unwrap()
    }

    #[test]
    fn additive_inverse() {
        assert!((&p("x+1", 1) + &p("-x-1", 1)).is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let prod = &p("x1+x2", 2) * &p("x1-x2", 2);
        assert_eq!(prod, p("x1^2 - x2^2", 2));
    }

    #[test]
    fn mod_seven_product() {
        let seven = Some(BigInt::from(7));
        let a = p("3*x", 1).with_modulus(seven.clone());
        let b = p("5*x", 1).with_modulus(seven.clone());
        // integer product 15x^2, then 15 mod 7 = 1
        let direct = (&p("3*x", 1) * &p("5*x", 1)).with_modulus(seven);
        assert_eq!(&a * &b, direct);
        assert_eq!((&a * &b).to_string(), "x^2");
    }

    #[test]
    fn arity_errors() {
        assert!(matches!(p("x", 1).try_add(&p("x", 2)), Err(PolyError::Arity(_))));
        let m = p("x", 1).with_modulus(Some(BigInt::from(5)));
        assert!(matches!(p("x", 1).try_mul(&m), Err(PolyError::Arity(_))));
    }

    #[test]
    fn leading_data_examples() {
        let lex = MonomialOrder::lex(2);
        let (lc, lm) = p("3*x^2 + y", 2).leading(&lex).unwrap();
        assert_eq!((lc, lm), (BigInt::from(3), Monomial::new(vec![2, 0])));
        let (lc, lm) = p("7", 2).leading(&lex).unwrap();
        assert_eq!((lc, lm), (BigInt::from(7), Monomial::one(2)));
        assert!(matches!(Polynomial::zero(2).leading(&lex), Err(PolyError::ZeroPolynomial)));
    }

    #[test]
    fn leading_agrees_with_pairwise_comparison() {
        let f = p("x1*x2^2 + x1^2*x2", 2);
        for kind in [OrderKind::Lex, OrderKind::Grlex, OrderKind::Grevlex] {
            let ord = MonomialOrder::new(kind, 2);
            let (_, lm) = f.leading(&ord).unwrap();
            for (m, _) in f.terms() {
                assert!(!ord.cmp(&lm, m).is_lt());
            }
        }
        let (lc, lm) = f.leading(&MonomialOrder::grevlex(2)).unwrap();
        assert_eq!((lc, lm), (BigInt::one(), Monomial::new(vec![2, 1])));
    }

    #[test]
    fn norms_and_degrees() {
        assert_eq!(p("6*x", 1).inf_norm(), BigInt::from(6));
        assert_eq!(Polynomial::zero(2).inf_norm(), BigInt::zero());
        assert_eq!(Polynomial::zero(2).maxdeg(1), 0);
        let f = p("x^3 - 5*x + 2", 1);
        assert_eq!(f.inf_norm(), BigInt::from(5));
        assert_eq!(f.maxdeg(0), 3);
    }

    #[test]
    fn centered_lift() {
        let f = p("16*x + 3", 1).with_modulus(Some(BigInt::from(17)));
        assert_eq!(f.centered(), p("-x + 3", 1));
        let g = p("-1", 1).with_modulus(Some(BigInt::from(7)));
        assert_eq!(g.to_string(), "6");
        assert_eq!(g.centered(), p("-1", 1));
    }

    #[test]
    fn text_ordering() {
        let f = p("y + x^2 - 3", 2);
        assert_eq!(f.to_string(), "x^2 + y - 3");
        assert_eq!(f.to_text(&MonomialOrder::grlex(2)), "x^2 + y - 3");
        let g = p("x*y^3 + x^2", 2);
        assert_eq!(g.to_text(&MonomialOrder::grlex(2)), "x*y^3 + x^2");
        assert_eq!(g.to_string(), "x^2 + x*y^3");
    }
}
