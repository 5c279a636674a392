use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use super::HardnessError;
use crate::cyclic::aprime_ideal;
use crate::lattice::{enumerate_ball, ideal_to_lattice, minima_bruteforce, DEFAULT_NODE_BUDGET};
use crate::poly::{MonomialOrder, Polynomial};
use crate::quotient::{build_quotient, QuotientRing};

/// The variety of `⟨1 + x_i + … + x_i^{r_i−1}⟩`: every tuple of nontrivial
/// `r_i`-th roots of unity, with the quotient ring it belongs to.
#[derive(Clone, Debug)]
pub struct VarietyContext {
    r: Vec<usize>,
    points: Vec<Vec<Complex64>>,
    t: f64,
    quotient: QuotientRing,
}

impl VarietyContext {
    pub fn r(&self) -> &[usize] {
        &self.r
    }

    /// Points in lexicographic order of `(k_1, …, k_n)`.
    pub fn points(&self) -> &[Vec<Complex64>] {
        &self.points
    }

    /// Number of points, `Π(r_i − 1)`; also the quotient dimension.
    pub fn n(&self) -> usize {
        self.points.len()
    }

    /// Largest modulus of a standard monomial at a point.
    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn quotient(&self) -> &QuotientRing {
        &self.quotient
    }

    /// Values of `alpha` at every point.
    pub fn substitutions(&self, alpha: &Polynomial) -> Result<Vec<Complex64>, HardnessError> {
        let a = self.quotient.reduce(alpha)?;
        Ok(self.points.iter().map(|pt| a.evaluate(pt)).collect())
    }
}

pub fn variety_cyclotomic(r: &[usize]) -> Result<VarietyContext, HardnessError> {
    let ideal = aprime_ideal(r)?;
    let n = r.len();
    let quotient = build_quotient(&ideal, &MonomialOrder::lex(n))?;
    let mut points = vec![Vec::new()];
    for &ri in r {
        let roots: Vec<Complex64> = (1..ri)
            .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / ri as f64))
            .collect();
        points = points
            .into_iter()
            .flat_map(|pt| {
                roots.iter().map(move |z| {
                    let mut q = pt.clone();
                    q.push(*z);
                    q
                })
            })
            .collect();
    }
    let t = quotient
        .basis()
        .iter()
        .flat_map(|b| {
            let m = Polynomial::term(b.clone(), 1);
            points.iter().map(move |pt| m.evaluate(pt).norm())
        })
        .fold(0.0, f64::max);
    Ok(VarietyContext {
        r: r.to_vec(),
        points,
        t,
        quotient,
    })
}

/// Largest modulus of `alpha` over the variety.
pub fn maxsub(alpha: &Polynomial, v: &VarietyContext) -> Result<f64, HardnessError> {
    Ok(v.substitutions(alpha)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Largest absolute coefficient of the reduced representative.
pub fn maxcoeff(alpha: &Polynomial, v: &VarietyContext) -> Result<BigInt, HardnessError> {
    Ok(v.quotient.reduce(alpha)?.inf_norm())
}

/// `Σ_k Π_i (a_i^{(k)})^{j_i}` over the points of the variety.
pub fn power_sum(v: &VarietyContext, j: &[i32]) -> Complex64 {
    v.points
        .iter()
        .map(|pt| {
            pt.iter()
                .zip(j)
                .map(|(z, &e)| z.powi(e))
                .product::<Complex64>()
        })
        .sum()
}

/// Row-sum norm of the inverse of a square complex matrix.
fn inverse_norm(mut a: Vec<Vec<Complex64>>) -> Option<f64> {
    let n = a.len();
    let mut inv: Vec<Vec<Complex64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::zero() }).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))?;
        if a[piv][col].norm() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        inv.swap(col, piv);
        let d = a[col][col];
        for j in 0..n {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for i in 0..n {
            if i != col {
                let f = a[i][col];
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let (x, y) = (a[col][j], inv[col][j]);
                    a[i][j] -= f * x;
                    inv[i][j] -= f * y;
                }
            }
        }
    }
    Some(inv.iter().map(|row| row.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SsubSolution {
    pub element: Polynomial,
    pub maxsub: f64,
    /// Coefficient radius that was searched exhaustively.
    pub radius: BigInt,
}

/// Nonzero element of the ideal generated by `gens` in the quotient of `v`
/// minimizing `maxsub`, found by exhaustive search.
///
/// The radius comes from the shortest element `s`: a minimizer `α` has
/// `maxsub(α) ≤ maxsub(s)`, and its coefficients are recovered from its
/// values through the inverse evaluation matrix, so `‖α‖∞ ≤
/// ‖E⁻¹‖·maxsub(s)`.
pub fn ssub_bruteforce(v: &VarietyContext, gens: &[Polynomial], node_budget: u64) -> Result<SsubSolution, HardnessError> {
    let q = &v.quotient;
    let lattice = ideal_to_lattice(q, gens)?;
    if lattice.rank() == 0 {
        return Err(HardnessError::ZeroIdeal);
    }
    let shortest = minima_bruteforce(&lattice, 1, None, DEFAULT_NODE_BUDGET)?;
    let s = q.phi_inv(&shortest.witnesses[0])?;
    let bound = maxsub(&s, v)?;
    let eval: Vec<Vec<Complex64>> = v
        .points
        .iter()
        .map(|pt| q.basis().iter().map(|b| Polynomial::term(b.clone(), 1).evaluate(pt)).collect())
        .collect();
    let kappa = inverse_norm(eval).ok_or_else(|| HardnessError::Degenerate("evaluation matrix is singular".into()))?;
    let radius = BigInt::from(((kappa * bound) * (1.0 + 1e-9)).floor().to_i64().unwrap_or(i64::MAX).max(1));
    let mut best: Option<(f64, Vec<BigInt>)> = None;
    for w in enumerate_ball(&lattice, &radius, node_budget)? {
        let val = maxsub(&q.phi_inv(&w)?, v)?;
        if best.as_ref().is_none_or(|(b, _)| val < b - 1e-12) {
            best = Some((val, w));
        }
    }
    let (val, w) = best.expect("the shortest element lies in the searched ball");
    Ok(SsubSolution {
        element: q.phi_inv(&w)?,
        maxsub: val,
        radius,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> Polynomial {
        Polynomial::parse(s, Some(n)).unwrap()
    }

    #[test]
    fn small_varieties() {
        let v = variety_cyclotomic(&[2, 2]).unwrap();
        assert_eq!(v.n(), 1);
        assert!((v.points()[0][0] - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        let v = variety_cyclotomic(&[3]).unwrap();
        assert_eq!(v.n(), 2);
        assert!(v.points().iter().all(|pt| (pt[0].norm() - 1.0).abs() < 1e-12));
        assert!((v.t() - 1.0).abs() < 1e-12);
        let v = variety_cyclotomic(&[2, 3]).unwrap();
        assert_eq!(v.n(), 2);
        assert_eq!(v.quotient().dimension(), 2);
        assert!(variety_cyclotomic(&[1, 3]).is_err());
    }

    #[test]
    fn substitution_values() {
        let v = variety_cyclotomic(&[2]).unwrap();
        assert!((maxsub(&p("2 - x", 1), &v).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(maxcoeff(&p("1", 1), &v).unwrap(), 1.into());
        let v = variety_cyclotomic(&[3]).unwrap();
        assert!((maxsub(&p("x", 1), &v).unwrap() - 1.0).abs() < 1e-12);
        assert!((maxsub(&p("1", 1), &v).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn power_sums() {
        let v = variety_cyclotomic(&[3, 5]).unwrap();
        assert!((power_sum(&v, &[3, 5]) - Complex64::new(8.0, 0.0)).norm() < 1e-9);
        assert!((power_sum(&v, &[1, 2]).norm() - 1.0).abs() < 1e-9);
        // with one exponent divisible the sum is r_i - 1 times larger
        assert!((power_sum(&v, &[0, 1]).norm() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn ssub_unit_ideal() {
        let v = variety_cyclotomic(&[3]).unwrap();
        let s = ssub_bruteforce(&v, &[p("1", 1)], DEFAULT_NODE_BUDGET).unwrap();
        assert!((s.maxsub - 1.0).abs() < 1e-12);
        let s = ssub_bruteforce(&v, &[p("x + 2", 1)], DEFAULT_NODE_BUDGET).unwrap();
        // |ω + 2| = √3 is the smallest value for an element of norm 3
        assert!((s.maxsub - 3f64.sqrt()).abs() < 1e-9);
    }
}
