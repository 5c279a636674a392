use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal};

use super::{require_free, HardnessError};
use crate::hashfam::{prepare, verify_collision, CollisionOracle, HashKey, HashParams};
use crate::lattice::{ideal_to_lattice, IntegerLattice};
use crate::poly::{bigint_to_f64, Polynomial};
use crate::quotient::{QuotientError, QuotientRing};

#[derive(Clone, Debug, PartialEq)]
pub struct Algorithm1Params {
    pub p: BigInt,
    pub m: usize,
    pub d: u64,
    pub eta: f64,
}

/// Everything drawn or derived during one run.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionState {
    pub g: Polynomial,
    pub params: Algorithm1Params,
    pub n: usize,
    /// Gaussian width `s = ‖g‖∞ / (8η√N·d·m·ln N)`.
    pub s: f64,
    /// Coset representatives of 𝔄/⟨g⟩.
    pub v: Vec<Polynomial>,
    /// Gaussian offsets, coordinates over the standard monomials.
    pub y: Vec<Vec<f64>>,
    /// Solutions of `g·w ≡ p(v + y)` with coordinates in `[0, p)`.
    pub w: Vec<Vec<f64>>,
    /// Key `a_i = ⌊w_i⌉ mod p`.
    pub a: Vec<Polynomial>,
    /// Collision differences `α_i − β_i`.
    pub z: Vec<Polynomial>,
    pub h: Polynomial,
    pub h_norm: BigInt,
    pub g_norm: BigInt,
    /// Largest deviation between the exact `h` and the floating formula.
    pub float_deviation: f64,
}

impl ReductionState {
    /// `h ≠ 0` and `‖h‖ ≤ ‖g‖/2`.
    pub fn halves(&self) -> bool {
        !self.h.is_zero() && &self.h_norm * 2 <= self.g_norm
    }
}

/// Uniform integer in `[0, bound)`.
fn uniform_below(rng: &mut ChaCha20Rng, bound: &BigUint) -> BigUint {
    let bits = bound.bits();
    let words = bits.div_ceil(64) as usize;
    loop {
        let mut digits: Vec<u64> = (0..words).map(|_| rng.random()).collect();
        let extra = words as u64 * 64 - bits;
        if let Some(top) = digits.last_mut() {
            *top >>= extra;
        }
        let x = BigUint::from_slice(
            &digits
                .iter()
                .flat_map(|w| [*w as u32, (*w >> 32) as u32])
                .collect::<Vec<_>>(),
        );
        if &x < bound {
            return x;
        }
    }
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[piv][col].abs() <= 1e-12 * scale {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for i in col + 1..n {
            let f = a[i][col] / a[col][col];
            if f != 0.0 {
                for j in col..n {
                    a[i][j] -= f * a[col][j];
                }
                b[i] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}

/// Matrix of multiplication by `f` on coordinates: column `j` is `φ(f·b_j)`.
fn mult_matrix(q: &QuotientRing, f: &Polynomial) -> Result<Vec<Vec<f64>>, QuotientError> {
    let n = q.dimension();
    let mut m = vec![vec![0.0; n]; n];
    for (j, b) in q.basis().iter().enumerate() {
        let col = q.phi(&q.mul(f, &Polynomial::term(b.clone(), 1))?)?;
        for (i, c) in col.iter().enumerate() {
            m[i][j] = bigint_to_f64(c);
        }
    }
    Ok(m)
}

fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// Reduces `v` into the fundamental box of a full-rank Hermite basis.
fn reduce_mod_hnf(l: &IntegerLattice, v: &mut [BigInt]) {
    for (row, &c) in l.hnf().iter().zip(l.pivots()) {
        let q = v[c].div_floor(&row[c]);
        if !q.is_zero() {
            for (a, b) in v.iter_mut().zip(row) {
                *a -= &q * b;
            }
        }
    }
}

/// Runs the reduction once and returns `h`.
pub fn algorithm1(
    q: &QuotientRing,
    gens: &[Polynomial],
    g: &Polynomial,
    params: &Algorithm1Params,
    oracle: &dyn CollisionOracle,
    seed: u64,
) -> Result<Polynomial, HardnessError> {
    Ok(algorithm1_traced(q, gens, g, params, oracle, seed)?.h)
}

/// One run of the collision-to-IncSPP reduction, with all intermediate data.
///
/// `h` is computed exactly as `Σ (v_i − g·k_i)·z_i − g·t` where
/// `w_i = w_i^raw − p·k_i` and `t = (Σ ⌊w_i⌉·z_i)/p`, which is integral
/// because the `z_i` come from a collision. The floating form
/// `Σ (g(w_i − ⌊w_i⌉)/p − y_i)·z_i` is evaluated alongside as a check.
pub fn algorithm1_traced(
    q: &QuotientRing,
    gens: &[Polynomial],
    g: &Polynomial,
    params: &Algorithm1Params,
    oracle: &dyn CollisionOracle,
    seed: u64,
) -> Result<ReductionState, HardnessError> {
    require_free(q)?;
    if q.modulus().is_some() {
        return Err(HardnessError::Invalid("quotient must be over the integers".into()));
    }
    let n = q.dimension();
    if n < 2 {
        return Err(HardnessError::Invalid("dimension must be at least 2 so that log N > 0".into()));
    }
    if params.m == 0 || params.d == 0 || !(params.eta > 0.0) {
        return Err(HardnessError::Invalid("m, d and eta must be positive".into()));
    }
    let p = &params.p;
    let pf = bigint_to_f64(p);
    let g = q.reduce(g)?;
    if g.is_zero() {
        return Err(HardnessError::ZeroInput);
    }
    let la = ideal_to_lattice(q, gens)?;
    if !la.contains(&q.phi(&g)?) {
        return Err(HardnessError::NotInIdeal);
    }
    let lg = ideal_to_lattice(q, std::slice::from_ref(&g))?;
    if !lg.is_full_rank() {
        return Err(HardnessError::Degenerate("g times the basis is singular".into()));
    }
    let g_norm = g.inf_norm();
    let nf = n as f64;
    let s = bigint_to_f64(&g_norm) / (8.0 * params.eta * nf.sqrt() * params.d as f64 * params.m as f64 * nf.ln());
    let sigma = s / (2.0 * std::f64::consts::PI).sqrt();
    let normal = Normal::new(0.0, sigma).map_err(|e| HardnessError::Degenerate(e.to_string()))?;
    let mg = mult_matrix(q, &g)?;
    let det = lg.determinant().to_biguint().expect("positive determinant");

    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let (mut vs, mut ys, mut ws, mut rs, mut ks, mut a_s) = (vec![], vec![], vec![], vec![], vec![], vec![]);
    for _ in 0..params.m {
        let mut v = vec![BigInt::zero(); n];
        for row in la.hnf() {
            let u = BigInt::from_biguint(Sign::Plus, uniform_below(&mut rng, &det));
            for (x, y) in v.iter_mut().zip(row) {
                *x += &u * y;
            }
        }
        reduce_mod_hnf(&lg, &mut v);
        let y: Vec<f64> = (0..n).map(|_| normal.sample(&mut rng)).collect();
        let rhs: Vec<f64> = v.iter().zip(&y).map(|(vi, yi)| pf * (bigint_to_f64(vi) + yi)).collect();
        let raw = solve(mg.clone(), rhs).ok_or_else(|| HardnessError::Degenerate("g times the basis is singular".into()))?;
        let k: Vec<f64> = raw.iter().map(|x| (x / pf).floor()).collect();
        let w: Vec<f64> = raw.iter().zip(&k).map(|(x, k)| x - pf * k).collect();
        let r: Vec<BigInt> = w
            .iter()
            .map(|x| x.round().to_i64().map(BigInt::from))
            .collect::<Option<_>>()
            .ok_or_else(|| HardnessError::Degenerate("non-finite coordinate".into()))?;
        let a: Vec<BigInt> = r.iter().map(|x| x.mod_floor(p)).collect();
        let kb: Vec<BigInt> = k
            .iter()
            .map(|x| x.to_i64().map(BigInt::from))
            .collect::<Option<_>>()
            .ok_or_else(|| HardnessError::Degenerate("non-finite coordinate".into()))?;
        vs.push(v);
        ys.push(y);
        ws.push(w);
        rs.push(r);
        ks.push(kb);
        a_s.push(q.phi_inv(&a)?);
    }

    let ring = prepare(&HashParams {
        p: p.clone(),
        ideal: q.ideal().clone(),
        order: q.order().clone(),
        d: params.d,
        m: params.m,
        eta: params.eta,
    })?;
    let key = HashKey::new(ring, a_s.clone())?;
    let (alpha, beta) = oracle.collide(&key)?;
    let z: Vec<Polynomial> = alpha
        .iter()
        .zip(&beta)
        .map(|(x, y)| &x.centered() - &y.centered())
        .collect();
    if z.iter().all(|zi| zi.is_zero()) {
        return Err(HardnessError::ZeroCollision);
    }
    if !verify_collision(&key, &alpha, &beta) {
        return Err(HardnessError::BadCollision);
    }

    // exact h
    let mut t = Polynomial::zero(q.nvars());
    let mut h = Polynomial::zero(q.nvars());
    for i in 0..params.m {
        t = &t + &q.mul(&q.phi_inv(&rs[i])?, &z[i])?;
        let gk = q.mul(&g, &q.phi_inv(&ks[i])?)?;
        let vi = &q.phi_inv(&vs[i])? - &gk;
        h = &h + &q.mul(&vi, &z[i])?;
    }
    let t = q.reduce(&t)?;
    let mut t_div = Polynomial::zero(q.nvars());
    for (m, c) in t.terms() {
        let (quo, rem) = c.div_rem(p);
        if !rem.is_zero() {
            return Err(HardnessError::BadCollision);
        }
        t_div.add_term(m.clone(), quo);
    }
    let h = q.reduce(&(&h - &q.mul(&g, &t_div)?))?;

    // floating formula
    let mut hf = vec![0.0; n];
    for i in 0..params.m {
        let delta: Vec<f64> = ws[i].iter().zip(&rs[i]).map(|(w, r)| w - bigint_to_f64(r)).collect();
        let gd = mat_vec(&mg, &delta);
        let inner: Vec<f64> = gd.iter().zip(&ys[i]).map(|(a, y)| a / pf - y).collect();
        let zi = mat_vec(&mult_matrix(q, &z[i])?, &inner);
        hf.iter_mut().zip(zi).for_each(|(a, b)| *a += b);
    }
    let hc = q.phi(&h)?;
    let float_deviation = hc.iter().zip(&hf).map(|(a, b)| (bigint_to_f64(a) - b).abs()).fold(0.0, f64::max);
    let scale = 1.0 + bigint_to_f64(&g_norm) * params.m as f64;
    if !(float_deviation <= 1e-6 * scale) {
        return Err(HardnessError::Degenerate(format!(
            "exact and floating results differ by {float_deviation:e}"
        )));
    }
    if !la.contains(&hc) {
        return Err(HardnessError::Degenerate("result left the ideal".into()));
    }

    Ok(ReductionState {
        h_norm: h.inf_norm(),
        g_norm,
        g,
        params: params.clone(),
        n,
        s,
        v: vs.iter().map(|v| q.phi_inv(v)).collect::<Result<_, _>>()?,
        y: ys,
        w: ws,
        a: a_s,
        z,
        h,
        float_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::Ideal;
    use crate::hashfam::{BruteForceOracle, HashError};
    use crate::poly::MonomialOrder;
    use crate::quotient::build_quotient;

    struct Degenerate;

    impl CollisionOracle for Degenerate {
        fn collide(&self, key: &HashKey) -> Result<(Vec<Polynomial>, Vec<Polynomial>), HashError> {
            let zero = vec![Polynomial::zero(1); key.a().len()];
            Ok((zero.clone(), zero))
        }
    }

    struct Failing;

    impl CollisionOracle for Failing {
        fn collide(&self, _: &HashKey) -> Result<(Vec<Polynomial>, Vec<Polynomial>), HashError> {
            Err(HashError::NoCollision)
        }
    }

    fn setup() -> (QuotientRing, Vec<Polynomial>, Polynomial, Algorithm1Params) {
        let q = build_quotient(&Ideal::parse(&["x^2 + x + 1"], Some(1), None).unwrap(), &MonomialOrder::lex(1)).unwrap();
        let a = Polynomial::parse("x + 2", Some(1)).unwrap();
        let g = q.mul(&a, &Polynomial::parse("311*x - 173", Some(1)).unwrap()).unwrap();
        let params = Algorithm1Params {
            p: 17.into(),
            m: 3,
            d: 1,
            eta: 2.0,
        };
        (q, vec![a], g, params)
    }

    #[test]
    fn membership_of_output() {
        let (q, gens, g, params) = setup();
        let oracle = BruteForceOracle { budget: 1_000_000 };
        let la = ideal_to_lattice(&q, &gens).unwrap();
        for seed in 0..10 {
            match algorithm1_traced(&q, &gens, &g, &params, &oracle, seed) {
                Ok(st) => {
                    assert!(la.contains(&q.phi(&st.h).unwrap()));
                    assert!(st.a.iter().all(|a| a.terms().all(|(_, c)| c >= &BigInt::zero() && c < &params.p)));
                }
                Err(HardnessError::ZeroCollision) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn degenerate_oracles() {
        let (q, gens, g, params) = setup();
        assert_eq!(
            algorithm1(&q, &gens, &g, &params, &Degenerate, 0),
            Err(HardnessError::ZeroCollision)
        );
        assert!(matches!(
            algorithm1(&q, &gens, &g, &params, &Failing, 0),
            Err(HardnessError::Hash(HashError::NoCollision))
        ));
    }

    #[test]
    fn rejects_bad_inputs() {
        let (q, gens, _, params) = setup();
        let oracle = BruteForceOracle { budget: 1_000_000 };
        assert_eq!(
            algorithm1(&q, &gens, &Polynomial::zero(1), &params, &oracle, 0),
            Err(HardnessError::ZeroInput)
        );
        assert_eq!(
            algorithm1(&q, &gens, &Polynomial::constant(1, 1), &params, &oracle, 0),
            Err(HardnessError::NotInIdeal)
        );
    }
}
