//! Integer lattices: Hermite and Smith normal forms, membership, successive
//! minima and the lattices attached to ideals of a quotient ring.

mod ideal;
mod minima;
mod normal_form;

pub use ideal::{certify_prime, ideal_to_lattice, is_full_rank_ideal, Primality};
pub use minima::{enumerate_ball, minima_bruteforce, MinimaReport, DEFAULT_NODE_BUDGET};
pub use normal_form::{hnf_with_transform, smith_factors, HnfResult};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::quotient::QuotientError;
use crate::{ErrorKind, HasKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("rows have inconsistent lengths ({0} vs {1})")]
    Ragged(usize, usize),
    #[error("lattice has rank {rank}, fewer than the {k} minima requested")]
    RankTooSmall { rank: usize, k: usize },
    #[error("only {found} independent vectors within radius {radius}, {k} requested")]
    NotEnough { found: usize, k: usize, radius: BigInt },
    #[error("enumeration needs about {estimate} nodes, budget is {budget}")]
    Budget { estimate: u64, budget: u64 },
    #[error("entries too large for exhaustive enumeration")]
    TooLarge,
    #[error("radius must be at least 1")]
    BadRadius,
    #[error(transparent)]
    Quotient(#[from] QuotientError),
}

impl HasKind for LatticeError {
    fn kind(&self) -> ErrorKind {
        match self {
            LatticeError::Budget { .. } | LatticeError::TooLarge => ErrorKind::Resource,
            LatticeError::Quotient(e) => e.kind(),
            _ => ErrorKind::Domain,
        }
    }
}

/// Subgroup of ℤ^dim generated by the rows of `gens`, with its canonical
/// Hermite basis and Smith invariant factors computed on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerLattice {
    dim: usize,
    gens: Vec<Vec<BigInt>>,
    hnf: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    snf: Vec<BigInt>,
}

impl IntegerLattice {
    pub fn new(dim: usize, gens: Vec<Vec<BigInt>>) -> Result<Self, LatticeError> {
        for r in &gens {
            if r.len() != dim {
                return Err(LatticeError::Ragged(r.len(), dim));
            }
        }
        let h = hnf_with_transform(&gens, dim);
        let snf = smith_factors(&h.rows, dim);
        Ok(IntegerLattice {
            dim,
            gens,
            hnf: h.rows,
            pivots: h.pivots,
            snf,
        })
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(dim: usize, gens: &[&[i64]]) -> Result<Self, LatticeError> {
        Self::new(
            dim,
            gens.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
        )
    }

    /// The full lattice ℤ^dim.
    pub fn identity(dim: usize) -> Self {
        let rows = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        Self::new(dim, rows).expect("square")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gens(&self) -> &[Vec<BigInt>] {
        &self.gens
    }

    /// Hermite basis: upper echelon, positive pivots, entries above each
    /// pivot reduced into `[0, pivot)`, zero rows removed.
    pub fn hnf(&self) -> &[Vec<BigInt>] {
        &self.hnf
    }

    /// Pivot column of each Hermite row.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Nonzero Smith invariant factors `d₁ | d₂ | …`.
    pub fn snf_factors(&self) -> &[BigInt] {
        &self.snf
    }

    pub fn rank(&self) -> usize {
        self.hnf.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.dim
    }

    /// Index of the lattice in its real span (product of the Smith factors);
    /// equals |det| for a full-rank lattice.
    pub fn determinant(&self) -> BigInt {
        self.snf.iter().product()
    }

    /// Membership by back-substitution on the Hermite basis.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Integer coefficients of `v` in the Hermite basis, if `v` is in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        if v.len() != self.dim {
            return None;
        }
        let mut w = v.to_vec();
        let mut coeffs = Vec::with_capacity(self.hnf.len());
        for (row, &c) in self.hnf.iter().zip(&self.pivots) {
            if w[..c].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let (q, r) = w[c].div_rem(&row[c]);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (a, b) in w.iter_mut().zip(row) {
                    *a -= &q * b;
                }
            }
            coeffs.push(q);
        }
        w.iter().all(|x| x.is_zero()).then_some(coeffs)
    }

    /// True iff every Smith invariant factor is 1, i.e. ℤ^dim / L is
    /// torsion-free on the span of L.
    pub fn is_saturated(&self) -> bool {
        self.snf.iter().all(|d| d.is_one())
    }

    /// Largest absolute entry of each Hermite row.
    pub fn hnf_row_norms(&self) -> Vec<BigInt> {
        self.hnf.iter().map(|r| inf_norm(r)).collect()
    }

    /// Intersection with another lattice in the same ambient space.
    pub fn intersect(&self, other: &IntegerLattice) -> Result<IntegerLattice, LatticeError> {
        if other.dim != self.dim {
            return Err(LatticeError::Ragged(other.dim, self.dim));
        }
        // kernel of [A; -B] restricted to the A-coefficients, via the
        // transform of the Hermite form of the stacked coefficient matrix
        let a = &self.hnf;
        let b = &other.hnf;
        let ka = a.len();
        let rows: Vec<Vec<BigInt>> = a
            .iter()
            .cloned()
            .chain(b.iter().map(|r| r.iter().map(|x| -x).collect()))
            .collect();
        let h = hnf_with_transform(&rows, self.dim);
        let rank = h.rows.len();
        let mut out = Vec::new();
        for u in &h.transform[rank..] {
            let mut v = vec![BigInt::zero(); self.dim];
            for (coef, row) in u[..ka].iter().zip(a) {
                if coef.is_zero() {
                    continue;
                }
                for (x, y) in v.iter_mut().zip(row) {
                    *x += coef * y;
                }
            }
            out.push(v);
        }
        IntegerLattice::new(self.dim, out)
    }
}

pub fn inf_norm(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x.abs()).max().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn hnf_examples() {
        let l = IntegerLattice::from_i64(2, &[&[2, 0], &[1, 1]]).unwrap();
        assert_eq!(l.hnf(), &[big(&[1, 1]), big(&[0, 2])]);
        for g in l.gens() {
            assert!(l.contains(g));
        }
        let back = IntegerLattice::new(2, l.hnf().to_vec()).unwrap();
        for g in l.gens() {
            assert!(back.contains(g));
        }
        let id = IntegerLattice::identity(3);
        assert_eq!(id.hnf(), IntegerLattice::identity(3).gens());
        assert!(id.snf_factors().iter().all(|d| d.is_one()));
    }

    #[test]
    fn snf_examples() {
        let l = IntegerLattice::from_i64(2, &[&[2, 0], &[0, 6]]).unwrap();
        assert_eq!(l.snf_factors(), &big(&[2, 6])[..]);
        let l = IntegerLattice::from_i64(2, &[&[4, 0], &[0, 6]]).unwrap();
        assert_eq!(l.snf_factors(), &big(&[2, 12])[..]);
        assert_eq!(l.determinant(), BigInt::from(24));
    }

    #[test]
    fn saturation() {
        assert!(!IntegerLattice::from_i64(2, &[&[0, 6]]).unwrap().is_saturated());
        assert!(IntegerLattice::from_i64(2, &[&[1, 1]]).unwrap().is_saturated());
        assert!(IntegerLattice::identity(4).is_saturated());
    }

    #[test]
    fn membership() {
        let l = IntegerLattice::from_i64(3, &[&[1, 2, 3], &[0, 3, 1]]).unwrap();
        assert!(l.contains(&big(&[2, 7, 7])));
        assert!(!l.contains(&big(&[0, 1, 0])));
        assert!(!l.contains(&big(&[0, 0, 1])));
        assert!(l.contains(&big(&[0, 0, 0])));
    }

    #[test]
    fn intersection() {
        let a = IntegerLattice::from_i64(2, &[&[2, 0], &[0, 1]]).unwrap();
        let b = IntegerLattice::from_i64(2, &[&[3, 0], &[0, 2]]).unwrap();
        let c = a.intersect(&b).unwrap();
        assert_eq!(c.hnf(), &[big(&[6, 0]), big(&[0, 2])]);
        let d = IntegerLattice::from_i64(2, &[&[1, 1]]).unwrap();
        let e = IntegerLattice::from_i64(2, &[&[1, 0]]).unwrap();
        assert_eq!(d.intersect(&e).unwrap().rank(), 0);
    }
}
