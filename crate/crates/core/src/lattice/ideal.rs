use num_traits::One;

use super::{IntegerLattice, LatticeError};
use crate::cyclic::aprime_ideal;
use crate::groebner::groebner;
use crate::poly::Polynomial;
use crate::quotient::QuotientRing;

/// Lattice of the ideal generated by `gens` inside a free quotient: the
/// span of `φ(g_i · b_j)` over generators `g_i` and standard monomials `b_j`.
pub fn ideal_to_lattice(q: &QuotientRing, gens: &[Polynomial]) -> Result<IntegerLattice, LatticeError> {
    let mut rows = Vec::with_capacity(gens.len() * q.dimension());
    for g in gens {
        let g = q.reduce(g)?;
        for b in q.basis() {
            let gb = q.mul(&g, &Polynomial::term(b.clone(), 1))?;
            rows.push(q.phi(&gb)?);
        }
    }
    IntegerLattice::new(q.dimension(), rows)
}

/// `rank(L(𝔄)) = N`
pub fn is_full_rank_ideal(q: &QuotientRing, gens: &[Polynomial]) -> Result<bool, LatticeError> {
    Ok(ideal_to_lattice(q, gens)?.rank() == q.dimension())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Primality {
    Prime,
    NotPrime,
    Unknown,
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Primality of the defining ideal, decided only for the family
/// `⟨1 + x_i + … + x_i^{r_i−1}⟩` with every `r_i` prime.
///
/// The quotient is then ℤ[ζ_{r_1}] ⊗ … ⊗ ℤ[ζ_{r_n}], a domain exactly when
/// the odd `r_i` are pairwise distinct (`r_i = 2` contributes a factor ℤ).
/// Anything else is `Unknown`.
pub fn certify_prime(q: &QuotientRing) -> Primality {
    if q.modulus().is_some() {
        return Primality::Unknown;
    }
    let n = q.nvars();
    let mut r = vec![0usize; n];
    for (lc, lm) in q.gb().leading_terms() {
        match lm.pure_power_var() {
            Some((i, e)) if lc.is_one() && r[i] == 0 => r[i] = e as usize + 1,
            _ => return Primality::Unknown,
        }
    }
    if r.contains(&0) || !r.iter().all(|&ri| is_prime(ri)) {
        return Primality::Unknown;
    }
    let Ok(expected) = aprime_ideal(&r).map(|i| groebner(&i, q.order())) else {
        return Primality::Unknown;
    };
    match expected {
        Ok(gb) if gb.elements() == q.gb().elements() => {}
        _ => return Primality::Unknown,
    }
    let mut odd: Vec<usize> = r.into_iter().filter(|&ri| ri != 2).collect();
    odd.sort();
    if odd.windows(2).any(|w| w[0] == w[1]) {
        Primality::NotPrime
    } else {
        Primality::Prime
    }
}
