use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::{inf_norm, IntegerLattice, LatticeError};

/// Default cap on enumeration nodes for [`minima_bruteforce`].
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Successive minima in the ℓ∞ norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimaReport {
    pub lambdas: Vec<BigInt>,
    pub witnesses: Vec<Vec<BigInt>>,
    /// Every lattice vector with ℓ∞ norm at most this was enumerated.
    pub search_bound: BigInt,
}

const LIMIT: i128 = 1 << 50;

fn small(x: &BigInt) -> Result<i128, LatticeError> {
    x.to_i128().filter(|v| v.abs() < LIMIT).ok_or(LatticeError::TooLarge)
}

/// Incremental rank test over ℚ using fraction-free elimination.
struct Independence {
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl Independence {
    fn try_add(&mut self, v: &[BigInt]) -> bool {
        let mut w = v.to_vec();
        for (p, row) in &self.rows {
            if w[*p].is_zero() {
                continue;
            }
            let (a, b) = (row[*p].clone(), w[*p].clone());
            for (x, y) in w.iter_mut().zip(row) {
                *x = &a * &*x - &b * y;
            }
            let g = w.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if !g.is_zero() {
                w.iter_mut().for_each(|x| *x /= &g);
            }
        }
        match w.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.rows.push((p, w));
                true
            }
            None => false,
        }
    }
}

/// Every nonzero lattice vector with ℓ∞ norm at most `r`, one of each `±v`
/// pair (positive first nonzero entry), sorted by norm then lexicographically.
fn ball(lattice: &IntegerLattice, r: i128, node_budget: u64) -> Result<Vec<Vec<i128>>, LatticeError> {
    if lattice.rank() == 0 {
        return Ok(Vec::new());
    }
    let dim = lattice.dim();
    let rows: Vec<Vec<i128>> = lattice
        .hnf()
        .iter()
        .map(|row| row.iter().map(small).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()?;
    let pivots = lattice.pivots().to_vec();

    let estimate: f64 = rows
        .iter()
        .zip(&pivots)
        .map(|(row, &p)| (2 * r / row[p] + 1) as f64)
        .product();
    if estimate > node_budget as f64 {
        return Err(LatticeError::Budget {
            estimate: estimate.min(u64::MAX as f64) as u64,
            budget: node_budget,
        });
    }

    let range = |acc: &[i128], i: usize| -> (i128, i128) {
        let p = rows[i][pivots[i]];
        let s = acc[pivots[i]];
        (Integer::div_ceil(&(-r - s), &p), Integer::div_floor(&(r - s), &p))
    };

    fn walk(
        rows: &[Vec<i128>],
        r: i128,
        i: usize,
        acc: &mut Vec<i128>,
        range: &dyn Fn(&[i128], usize) -> (i128, i128),
        out: &mut Vec<Vec<i128>>,
    ) {
        if i == rows.len() {
            // one of ±v: the one whose first nonzero entry is positive
            let first = acc.iter().find(|&&x| x != 0);
            if first.is_some_and(|&x| x > 0) && acc.iter().all(|x| x.abs() <= r) {
                out.push(acc.clone());
            }
            return;
        }
        let (lo, hi) = range(acc, i);
        for c in lo..=hi {
            for (a, b) in acc.iter_mut().zip(&rows[i]) {
                *a += c * b;
            }
            walk(rows, r, i + 1, acc, range, out);
            for (a, b) in acc.iter_mut().zip(&rows[i]) {
                *a -= c * b;
            }
        }
    }

    let zero = vec![0i128; dim];
    let (lo, hi) = range(&zero, 0);
    let mut found: Vec<Vec<i128>> = (lo..=hi)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut acc: Vec<i128> = rows[0].iter().map(|b| c * b).collect();
            let mut out = Vec::new();
            walk(&rows, r, 1, &mut acc, &range, &mut out);
            out
        })
        .collect();
    found.sort_by(|a, b| {
        let na = a.iter().map(|x| x.abs()).max();
        let nb = b.iter().map(|x| x.abs()).max();
        na.cmp(&nb).then_with(|| a.cmp(b))
    });
    Ok(found)
}

/// All nonzero lattice vectors of ℓ∞ norm at most `radius`, one of each
/// `±v` pair (the one with positive first nonzero entry), ordered by norm
/// and then lexicographically.
pub fn enumerate_ball(
    lattice: &IntegerLattice,
    radius: &BigInt,
    node_budget: u64,
) -> Result<Vec<Vec<BigInt>>, LatticeError> {
    if radius < &BigInt::zero() {
        return Err(LatticeError::BadRadius);
    }
    let r = small(radius)?;
    Ok(ball(lattice, r, node_budget)?
        .into_iter()
        .map(|v| v.into_iter().map(BigInt::from).collect())
        .collect())
}

/// First `k` successive minima of `lattice` in the ℓ∞ norm, by exhaustive
/// enumeration of all lattice vectors of norm at most `radius`.
///
/// Without a radius, the norm of the `k`-th vector picked greedily (by
/// norm) among independent Hermite rows and generators is used; that bounds
/// `λ_k`, so the result is then exact. With an explicit radius the result
/// is exact whenever `k` independent vectors are found.
/// Of `±v` only the vector with positive first nonzero entry is reported;
/// ties are broken by the lexicographically smallest vector.
pub fn minima_bruteforce(
    lattice: &IntegerLattice,
    k: usize,
    radius: Option<&BigInt>,
    node_budget: u64,
) -> Result<MinimaReport, LatticeError> {
    let rank = lattice.rank();
    if k > rank {
        return Err(LatticeError::RankTooSmall { rank, k });
    }
    if k == 0 {
        return Ok(MinimaReport {
            lambdas: vec![],
            witnesses: vec![],
            search_bound: radius.cloned().unwrap_or_default(),
        });
    }
    let radius = match radius {
        Some(r) if r < &BigInt::from(1) => return Err(LatticeError::BadRadius),
        Some(r) => r.clone(),
        None => {
            // k independent vectors among the Hermite rows and generators
            let mut pool: Vec<&Vec<BigInt>> = lattice.hnf().iter().chain(lattice.gens()).collect();
            pool.sort_by_key(|v| inf_norm(v));
            let mut indep = Independence { rows: Vec::new() };
            let mut picked = 0;
            let mut bound = BigInt::zero();
            for v in pool {
                if indep.try_add(v) {
                    picked += 1;
                    if picked == k {
                        bound = inf_norm(v);
                        break;
                    }
                }
            }
            bound
        }
    };
    let found = ball(lattice, small(&radius)?, node_budget)?;

    let mut indep = Independence { rows: Vec::new() };
    let mut witnesses = Vec::new();
    for v in found {
        let big: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        if indep.try_add(&big) {
            witnesses.push(big);
            if witnesses.len() == k {
                break;
            }
        }
    }
    if witnesses.len() < k {
        return Err(LatticeError::NotEnough {
            found: witnesses.len(),
            k,
            radius,
        });
    }
    Ok(MinimaReport {
        lambdas: witnesses.iter().map(|w| inf_norm(w)).collect(),
        witnesses,
        search_bound: radius,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn single_generator() {
        let l = IntegerLattice::from_i64(2, &[&[0, 6]]).unwrap();
        let m = minima_bruteforce(&l, 1, None, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(m.lambdas, big(&[6]));
        assert_eq!(m.witnesses, vec![big(&[0, 6])]);
    }

    #[test]
    fn standard_lattice() {
        let m = minima_bruteforce(&IntegerLattice::identity(2), 2, None, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(m.lambdas, big(&[1, 1]));
    }

    #[test]
    fn skew_lattice() {
        let l = IntegerLattice::from_i64(2, &[&[1, 1], &[0, 2]]).unwrap();
        let m = minima_bruteforce(&l, 2, None, DEFAULT_NODE_BUDGET).unwrap();
        // (1,-1) = (1,1) - (0,2) is a second independent vector of norm 1
        assert_eq!(m.lambdas, big(&[1, 1]));
        assert_eq!(m.witnesses, vec![big(&[1, -1]), big(&[1, 1])]);
        // cross-check by enumerating coefficient pairs in [-4, 4]
        let mut unit = vec![];
        for a in -4i64..=4 {
            for b in -4i64..=4 {
                let v = [a, a + 2 * b];
                if v[0].abs().max(v[1].abs()) == 1 {
                    unit.push(v);
                }
            }
        }
        assert!(unit.iter().any(|u| unit.iter().any(|v| u[0] * v[1] != u[1] * v[0])));
    }

    #[test]
    fn ball_contents() {
        let l = IntegerLattice::from_i64(2, &[&[1, 1], &[0, 2]]).unwrap();
        let b = enumerate_ball(&l, &BigInt::from(1), DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(b, vec![big(&[1, -1]), big(&[1, 1])]);
        let none = IntegerLattice::new(2, vec![]).unwrap();
        assert!(enumerate_ball(&none, &BigInt::from(3), 10).unwrap().is_empty());
    }

    #[test]
    fn errors() {
        let l = IntegerLattice::from_i64(2, &[&[0, 6]]).unwrap();
        assert!(matches!(
            minima_bruteforce(&l, 2, None, DEFAULT_NODE_BUDGET),
            Err(LatticeError::RankTooSmall { .. })
        ));
        assert!(matches!(
            minima_bruteforce(&l, 1, Some(&BigInt::from(5)), DEFAULT_NODE_BUDGET),
            Err(LatticeError::NotEnough { .. })
        ));
        let l = IntegerLattice::identity(8);
        assert!(matches!(
            minima_bruteforce(&l, 1, Some(&BigInt::from(50)), 1000),
            Err(LatticeError::Budget { .. })
        ));
    }
}
