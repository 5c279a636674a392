use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use super::{require_free, HardnessError};
use crate::groebner::normal_form_counted;
use crate::poly::{Monomial, Polynomial};
use crate::quotient::{box_exponents, QuotientRing};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpansionOptions {
    /// Sample count; also the cap on the exhaustive box size.
    pub samples: u64,
    /// Coefficients are drawn from `[−c, c]`.
    pub coeff_bound: u32,
    pub seed: u64,
}

/// Measurements for one polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionSample {
    pub input_norm: BigInt,
    pub reduced_norm: BigInt,
    /// Reduction steps taken by the normal form.
    pub steps: u64,
    /// `‖f‖∞·(2·g_max)^steps`
    pub bound: BigInt,
}

impl ExpansionSample {
    pub fn ratio(&self) -> BigRational {
        BigRational::new(self.reduced_norm.clone(), self.input_norm.clone())
    }

    pub fn bound_holds(&self) -> bool {
        self.reduced_norm <= self.bound
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionReport {
    pub k_tuple: Vec<u32>,
    /// Per-variable degree cap `k_i·maxdeg_{x_i}(𝔞)`.
    pub degree_box: Vec<u32>,
    /// Largest ratio `‖g‖_{𝔞,≺} / ‖g‖∞` seen.
    pub estimate: BigRational,
    pub witness: Polynomial,
    /// `(2·g_max)^k` for the largest measured step count `k`.
    pub theorem_bound: BigInt,
    pub g_max: BigInt,
    pub max_steps: u64,
    /// Nonzero polynomials evaluated.
    pub samples: u64,
    pub exhaustive: bool,
    /// Samples whose own bound failed; zero unless something is broken.
    pub violations: u64,
}

fn g_max(q: &QuotientRing) -> BigInt {
    q.gb().elements().iter().map(|g| g.inf_norm()).max().unwrap_or_default()
}

fn measure(q: &QuotientRing, f: &Polynomial, gm: &BigInt) -> Option<ExpansionSample> {
    if f.is_zero() {
        return None;
    }
    let (r, steps) = normal_form_counted(f, q.gb());
    let input_norm = f.inf_norm();
    let two_g: BigInt = gm * 2;
    let factor = num_traits::pow(two_g, steps as usize);
    Some(ExpansionSample {
        bound: &input_norm * factor,
        reduced_norm: r.inf_norm(),
        input_norm,
        steps,
    })
}

/// Measures a single polynomial against the expansion bound.
pub fn expansion_sample(q: &QuotientRing, f: &Polynomial) -> Result<Option<ExpansionSample>, HardnessError> {
    require_free(q)?;
    if f.nvars() != q.nvars() || f.modulus().is_some() {
        return Err(HardnessError::Invalid("polynomial is not over the integers in the ring's variables".into()));
    }
    Ok(measure(q, f, &g_max(q)))
}

/// Expansion estimate with coefficients in `{−1, 0, 1}`.
pub fn expansion_factor(q: &QuotientRing, k: &[u32], samples: u64, seed: u64) -> Result<ExpansionReport, HardnessError> {
    expansion_factor_with(
        q,
        k,
        &ExpansionOptions {
            samples,
            coeff_bound: 1,
            seed,
        },
    )
}

/// Maximum of `‖g‖_{𝔞,≺}/‖g‖∞` over polynomials with `maxdeg_{x_i}(g) ≤
/// k_i·maxdeg_{x_i}(𝔞)` and coefficients in `[−c, c]`.
///
/// When the whole box has at most `samples` members it is enumerated,
/// otherwise `samples` polynomials are drawn; sample `i` uses its own
/// ChaCha stream so the result does not depend on the thread count.
pub fn expansion_factor_with(
    q: &QuotientRing,
    k: &[u32],
    opts: &ExpansionOptions,
) -> Result<ExpansionReport, HardnessError> {
    require_free(q)?;
    let n = q.nvars();
    if k.len() != n {
        return Err(HardnessError::Invalid(format!("{} degree multipliers for {n} variables", k.len())));
    }
    if k.contains(&0) {
        return Err(HardnessError::Invalid("degree multipliers must be at least 1".into()));
    }
    if opts.coeff_bound == 0 {
        return Err(HardnessError::Invalid("coefficient bound must be at least 1".into()));
    }
    let degree_box: Vec<u32> = (0..n)
        .map(|i| {
            let d = q.gb().elements().iter().map(|g| g.maxdeg(i)).max().unwrap_or(0);
            k[i] * d
        })
        .collect();
    let monomials: Vec<Monomial> = box_exponents(&degree_box.iter().map(|d| d + 1).collect::<Vec<_>>())
        .into_iter().map(Monomial::new).collect();
    let base = 2 * opts.coeff_bound as u64 + 1;
    let c = opts.coeff_bound as i64;
    let total = (base as f64).powi(monomials.len() as i32);
    let exhaustive = total <= opts.samples as f64;
    let gm = g_max(q);

    let build = |coeffs: &mut dyn Iterator<Item = i64>| {
        let mut f = Polynomial::zero(n);
        for (m, c) in monomials.iter().zip(coeffs) {
            if c != 0 {
                f.add_term(m.clone(), c.into());
            }
        }
        f
    };
    let count = if exhaustive { total as u64 } else { opts.samples };
    let sample = |idx: u64| -> Polynomial {
        if exhaustive {
            let mut t = idx;
            build(&mut std::iter::from_fn(|| {
                let d = (t % base) as i64 - c;
                t /= base;
                Some(d)
            }))
        } else {
            let mut rng = ChaCha20Rng::seed_from_u64(opts.seed);
            rng.set_stream(idx);
            build(&mut std::iter::from_fn(|| Some(rng.random_range(-c..=c))))
        }
    };

    struct Acc {
        best: Option<(BigRational, u64)>,
        max_steps: u64,
        samples: u64,
        violations: u64,
    }
    let empty = || Acc {
        best: None,
        max_steps: 0,
        samples: 0,
        violations: 0,
    };
    let merge = |a: Acc, b: Acc| Acc {
        best: match (a.best, b.best) {
            (Some(x), Some(y)) => Some(if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) { y } else { x }),
            (x, y) => x.or(y),
        },
        max_steps: a.max_steps.max(b.max_steps),
        samples: a.samples + b.samples,
        violations: a.violations + b.violations,
    };
    let acc = (0..count)
        .into_par_iter()
        .map(|idx| {
            let f = sample(idx);
            match measure(q, &f, &gm) {
                None => empty(),
                Some(s) => Acc {
                    best: Some((s.ratio(), idx)),
                    max_steps: s.steps,
                    samples: 1,
                    violations: u64::from(!s.bound_holds()),
                },
            }
        })
        .reduce(empty, merge);

    let (estimate, witness) = match acc.best {
        Some((r, idx)) => (r, sample(idx)),
        None => (BigRational::zero(), Polynomial::zero(n)),
    };
    Ok(ExpansionReport {
        k_tuple: k.to_vec(),
        degree_box,
        estimate,
        witness,
        theorem_bound: if acc.samples == 0 {
            BigInt::one()
        } else {
            num_traits::pow(&gm * 2, acc.max_steps as usize)
        },
        g_max: gm,
        max_steps: acc.max_steps,
        samples: acc.samples,
        exhaustive,
        violations: acc.violations,
    })
}
