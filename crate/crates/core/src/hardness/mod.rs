//! Norms modulo an ideal, the expansion factor, brute-force oracles for the
//! shortest polynomial problems and the reductions between them.

mod algorithm1;
mod expansion;
mod reduction;
mod variety;

pub use algorithm1::{algorithm1, algorithm1_traced, Algorithm1Params, ReductionState};
pub use expansion::{
    expansion_factor, expansion_factor_with, expansion_sample, ExpansionOptions, ExpansionReport, ExpansionSample,
};
pub use reduction::{cyclic_to_aprime, BruteForceSpp, SppOracle};
pub use variety::{maxcoeff, maxsub, power_sum, ssub_bruteforce, variety_cyclotomic, SsubSolution, VarietyContext};

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::cyclic::CyclicError;
use crate::hashfam::HashError;
use crate::lattice::{enumerate_ball, ideal_to_lattice, inf_norm, minima_bruteforce, LatticeError, DEFAULT_NODE_BUDGET};
use crate::poly::Polynomial;
use crate::quotient::{QuotientError, QuotientRing};
use crate::{ErrorKind, HasKind};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HardnessError {
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Hash(#[from] HashError),
    #[error(transparent)]
    Cyclic(#[from] CyclicError),
    #[error("the ideal is zero in the quotient")]
    ZeroIdeal,
    #[error("input element is zero")]
    ZeroInput,
    #[error("input element is not in the ideal")]
    NotInIdeal,
    #[error("no element of norm at most {target} exists (shortest has norm {lambda1})")]
    Infeasible { target: BigInt, lambda1: BigInt },
    #[error("approximation factor must be at least 1, got {0}")]
    BadGamma(f64),
    #[error("invalid parameter: {0}")]
    Invalid(String),
    #[error("oracle returned a zero difference; retry with another seed")]
    ZeroCollision,
    #[error("oracle returned a pair that is not a collision")]
    BadCollision,
    #[error("numeric degeneracy: {0}")]
    Degenerate(String),
}

impl HasKind for HardnessError {
    fn kind(&self) -> ErrorKind {
        match self {
            HardnessError::Quotient(e) => e.kind(),
            HardnessError::Lattice(e) => e.kind(),
            HardnessError::Hash(e) => e.kind(),
            HardnessError::Cyclic(e) => e.kind(),
            _ => ErrorKind::Domain,
        }
    }
}

/// `‖f‖_{𝔞,≺}`: the largest absolute coefficient of the normal form.
pub fn norm_mod(f: &Polynomial, q: &QuotientRing) -> Result<BigInt, QuotientError> {
    Ok(q.reduce(f)?.inf_norm())
}

fn require_free(q: &QuotientRing) -> Result<(), HardnessError> {
    if !q.is_free() {
        let (m, k) = q.torsion_witness().expect("torsion");
        return Err(QuotientError::NotFree {
            monomial: m.to_string(),
            order: k,
        }
        .into());
    }
    Ok(())
}

/// Exact shortest nonzero element of the ideal generated by `gens`, which
/// meets every approximation factor `gamma ≥ 1`. Among shortest elements
/// the sparsest wins, then the one largest on the first standard monomials
/// (so the unit ideal gives `1`).
pub fn spp_bruteforce(q: &QuotientRing, gens: &[Polynomial], gamma: f64) -> Result<Polynomial, HardnessError> {
    spp_bruteforce_with_budget(q, gens, gamma, DEFAULT_NODE_BUDGET)
}

pub fn spp_bruteforce_with_budget(
    q: &QuotientRing,
    gens: &[Polynomial],
    gamma: f64,
    node_budget: u64,
) -> Result<Polynomial, HardnessError> {
    if !(gamma >= 1.0) {
        return Err(HardnessError::BadGamma(gamma));
    }
    require_free(q)?;
    let lattice = ideal_to_lattice(q, gens)?;
    if lattice.rank() == 0 {
        return Err(HardnessError::ZeroIdeal);
    }
    let m = minima_bruteforce(&lattice, 1, None, node_budget)?;
    let lambda = &m.lambdas[0];
    let best = enumerate_ball(&lattice, lambda, node_budget)?
        .into_iter()
        .filter(|v| &inf_norm(v) == lambda)
        .min_by(|a, b| {
            let nnz = |v: &[BigInt]| v.iter().filter(|x| !x.is_zero()).count();
            nnz(a).cmp(&nnz(b)).then_with(|| b.cmp(a))
        })
        .expect("the minimum is attained in the ball");
    Ok(q.phi_inv(&best)?)
}

/// One incremental step: a nonzero `h` in the ideal with `2‖h‖ ≤ ‖g‖`.
pub fn incspp_step(q: &QuotientRing, gens: &[Polynomial], g: &Polynomial) -> Result<Polynomial, HardnessError> {
    require_free(q)?;
    let g = q.reduce(g)?;
    if g.is_zero() {
        return Err(HardnessError::ZeroInput);
    }
    let lattice = ideal_to_lattice(q, gens)?;
    if !lattice.contains(&q.phi(&g)?) {
        return Err(HardnessError::NotInIdeal);
    }
    let h = spp_bruteforce(q, gens, 1.0)?;
    let hn = h.inf_norm();
    let gn = g.inf_norm();
    if &hn * 2 <= gn {
        Ok(h)
    } else {
        Err(HardnessError::Infeasible {
            target: gn / 2,
            lambda1: hn,
        })
    }
}
