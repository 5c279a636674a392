use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{require_free, spp_bruteforce_with_budget, HardnessError};
use crate::cyclic::{aprime_ideal, cyclic_ideal, CyclicError};
use crate::groebner::groebner;
use crate::lattice::{
    enumerate_ball, hnf_with_transform, ideal_to_lattice, inf_norm, minima_bruteforce, IntegerLattice,
    DEFAULT_NODE_BUDGET,
};
use crate::poly::Polynomial;
use crate::quotient::{build_quotient, QuotientError, QuotientRing};

/// Solver for the approximate shortest polynomial problem.
pub trait SppOracle {
    fn shortest(&self, q: &QuotientRing, gens: &[Polynomial]) -> Result<Polynomial, HardnessError>;
}

/// Exact enumeration; valid for every `gamma ≥ 1`.
#[derive(Clone, Copy, Debug)]
pub struct BruteForceSpp {
    pub gamma: f64,
    pub node_budget: u64,
}

impl Default for BruteForceSpp {
    fn default() -> Self {
        BruteForceSpp {
            gamma: 1.0,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

impl SppOracle for BruteForceSpp {
    fn shortest(&self, q: &QuotientRing, gens: &[Polynomial]) -> Result<Polynomial, HardnessError> {
        spp_bruteforce_with_budget(q, gens, self.gamma, self.node_budget)
    }
}

/// Recovers `r` from a quotient by `⟨x_i^{r_i} − 1⟩`.
fn cyclic_shape(q: &QuotientRing) -> Result<Vec<usize>, HardnessError> {
    let n = q.nvars();
    let mut r = vec![0usize; n];
    let bad = || CyclicError::Shape("quotient is not by x_i^{r_i} - 1".into());
    for (lc, lm) in q.gb().leading_terms() {
        match lm.pure_power_var() {
            Some((i, e)) if lc.is_one() && r[i] == 0 => r[i] = e as usize,
            _ => return Err(bad().into()),
        }
    }
    if r.contains(&0) || q.modulus().is_some() {
        return Err(bad().into());
    }
    let expected = groebner(&cyclic_ideal(&r)?, q.order()).map_err(QuotientError::from)?;
    if expected.elements() != q.gb().elements() {
        return Err(bad().into());
    }
    Ok(r)
}

fn add_scaled(acc: &mut [BigInt], row: &[BigInt], c: &BigInt) {
    if !c.is_zero() {
        for (a, b) in acc.iter_mut().zip(row) {
            *a += c * b;
        }
    }
}

/// Some `a ∈ A` with `v − a ∈ P`, given `v ∈ A + P`.
fn split(a: &IntegerLattice, p: &IntegerLattice, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let dim = a.dim();
    let rows: Vec<Vec<BigInt>> = a.hnf().iter().chain(p.hnf()).cloned().collect();
    let h = hnf_with_transform(&rows, dim);
    let rank = h.rows.len();
    let sum = IntegerLattice::new(dim, h.rows.clone()).ok()?;
    let c = sum.coordinates(v)?;
    let mut out = vec![BigInt::zero(); dim];
    for (i, row) in a.hnf().iter().enumerate() {
        let coef: BigInt = c.iter().zip(&h.transform[..rank]).map(|(cj, u)| cj * &u[i]).sum();
        add_scaled(&mut out, row, &coef);
    }
    Some(out)
}

/// Shortest `v + t` over `t ∈ lattice`, searched exhaustively after a
/// rounding pass against the Hermite basis.
fn closest_shift(lattice: &IntegerLattice, v: &[BigInt], node_budget: u64) -> Result<Vec<BigInt>, HardnessError> {
    let mut w = v.to_vec();
    for (row, &c) in lattice.hnf().iter().zip(lattice.pivots()) {
        let p = &row[c];
        let num: BigInt = &w[c] * 2 + p;
        let q = num.div_floor(&(p * 2));
        add_scaled(&mut w, row, &-q);
    }
    if lattice.rank() == 0 {
        return Ok(w);
    }
    let radius = inf_norm(&w) * 2;
    let mut best = w.clone();
    for t in enumerate_ball(lattice, &radius, node_budget)? {
        for sign in [1i32, -1] {
            let mut cand = w.clone();
            add_scaled(&mut cand, &t, &BigInt::from(sign));
            if inf_norm(&cand) < inf_norm(&best) {
                best = cand;
            }
        }
    }
    Ok(best)
}

/// Short nonzero element of an ideal of ℤ[x]/⟨x_i^{r_i} − 1⟩ from one call
/// to an oracle over ℤ[x]/⟨1 + x_i + … + x_i^{r_i−1}⟩.
///
/// Candidates are the lift `Π(x_i − 1)·g′` of the oracle answer `g′`, the
/// shortest preimage of `g′` in the ideal, and the shortest element of the
/// ideal lying in `⟨1 + … + x_i^{r_i−1}⟩`; the shortest candidate wins.
pub fn cyclic_to_aprime(
    oracle: &dyn SppOracle,
    q_cyclic: &QuotientRing,
    gens: &[Polynomial],
) -> Result<Polynomial, HardnessError> {
    require_free(q_cyclic)?;
    let r = cyclic_shape(q_cyclic)?;
    let q = q_cyclic;
    let n = q.nvars();
    let aprime = aprime_ideal(&r)?;
    let q_prime = build_quotient(&aprime, q.order())?;
    let la = ideal_to_lattice(q, gens)?;
    if la.rank() == 0 {
        return Err(HardnessError::ZeroIdeal);
    }
    let lp = ideal_to_lattice(q, aprime.generators())?;
    let inter = la.intersect(&lp)?;

    let mut candidates: Vec<Vec<BigInt>> = Vec::new();
    let images: Vec<Polynomial> = gens.iter().map(|g| q_prime.reduce(g)).collect::<Result<_, _>>()?;
    if images.iter().any(|g| !g.is_zero()) {
        let g1 = q_prime.reduce(&oracle.shortest(&q_prime, &images)?)?;
        let mut m = Polynomial::one(n);
        for i in 0..n {
            m = &m * &(&Polynomial::var(n, i) - &Polynomial::one(n));
        }
        candidates.push(q.phi(&q.mul(&m, &g1)?)?);
        if let Some(a) = split(&la, &lp, &q.phi(&g1)?) {
            candidates.push(closest_shift(&inter, &a, DEFAULT_NODE_BUDGET)?);
        }
    }
    if inter.rank() > 0 {
        let m = minima_bruteforce(&inter, 1, None, DEFAULT_NODE_BUDGET)?;
        candidates.push(m.witnesses[0].clone());
    }
    let best = candidates
        .into_iter()
        .filter(|c| c.iter().any(|x| !x.is_zero()) && la.contains(c))
        .min_by_key(|c| inf_norm(c))
        .ok_or_else(|| HardnessError::Degenerate("no nonzero candidate".into()))?;
    Ok(q.phi_inv(&best)?)
}
