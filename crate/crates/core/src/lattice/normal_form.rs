use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Row-style Hermite normal form with its unimodular transform.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnfResult {
    /// Nonzero Hermite rows.
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
    /// Unimodular `U` with `U · input = rows` followed by zero rows; the
    /// trailing rows of `U` span the left kernel of the input.
    pub transform: Vec<Vec<BigInt>>,
}

fn row_sub(a: &mut [BigInt], b: &[BigInt], q: &BigInt) {
    for (x, y) in a.iter_mut().zip(b) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

/// Hermite normal form of the row span of `input` (each row of length `dim`).
pub fn hnf_with_transform(input: &[Vec<BigInt>], dim: usize) -> HnfResult {
    let k = input.len();
    let mut h: Vec<Vec<BigInt>> = input.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..k)
        .map(|i| (0..k).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..dim {
        if r == k {
            break;
        }
        loop {
            let best = (r..k)
                .filter(|&i| !h[i][col].is_zero())
                .min_by(|&a, &b| h[a][col].abs().cmp(&h[b][col].abs()).then(a.cmp(&b)));
            let Some(i) = best else { break };
            h.swap(r, i);
            u.swap(r, i);
            let mut done = true;
            for j in r + 1..k {
                if h[j][col].is_zero() {
                    continue;
                }
                let q = &h[j][col] / &h[r][col];
                let (hr, ur) = (h[r].clone(), u[r].clone());
                row_sub(&mut h[j], &hr, &q);
                row_sub(&mut u[j], &ur, &q);
                if !h[j][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < k && !h[r][col].is_zero() {
            if h[r][col].is_negative() {
                h[r].iter_mut().for_each(|x| *x = -&*x);
                u[r].iter_mut().for_each(|x| *x = -&*x);
            }
            let (hr, ur) = (h[r].clone(), u[r].clone());
            for i in 0..r {
                let q = h[i][col].div_floor(&hr[col]);
                if !q.is_zero() {
                    row_sub(&mut h[i], &hr, &q);
                    row_sub(&mut u[i], &ur, &q);
                }
            }
            pivots.push(col);
            r += 1;
        }
    }
    h.truncate(r);
    HnfResult {
        rows: h,
        pivots,
        transform: u,
    }
}

/// Nonzero Smith invariant factors of the row span, ascending with
/// `d₁ | d₂ | …`.
pub fn smith_factors(rows: &[Vec<BigInt>], dim: usize) -> Vec<BigInt> {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let nr = m.len();
    let mut diag = Vec::new();
    for t in 0..nr.min(dim) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..nr {
                for j in t..dim {
                    if !m[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return finish(diag);
            };
            m.swap(t, bi);
            for row in m.iter_mut() {
                row.swap(t, bj);
            }
            let mut clean = true;
            for i in t + 1..nr {
                if !m[i][t].is_zero() {
                    let q = &m[i][t] / &m[t][t];
                    let mt = m[t].clone();
                    row_sub(&mut m[i], &mt, &q);
                    clean &= m[i][t].is_zero();
                }
            }
            for j in t + 1..dim {
                if !m[t][j].is_zero() {
                    let q = &m[t][j] / &m[t][t];
                    for row in m.iter_mut() {
                        let v = &q * &row[t];
                        row[j] -= v;
                    }
                    clean &= m[t][j].is_zero();
                }
            }
            if clean {
                break;
            }
        }
        diag.push(m[t][t].abs());
    }
    finish(diag)
}

fn finish(mut d: Vec<BigInt>) -> Vec<BigInt> {
    d.retain(|x| !x.is_zero());
    let n = d.len();
    for i in 0..n {
        for j in i + 1..n {
            let g = d[i].gcd(&d[j]);
            let l = &d[i] / &g * &d[j];
            d[i] = g;
            d[j] = l;
        }
    }
    d
}
