//! The hash family h_a(b) = Σ a_i·b_i over ℤ_p[x₁..xₙ]/𝔞 with inputs from
//! the norm ball D = {b : ‖b‖ ≤ d}.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groebner::Ideal;
use crate::poly::{DecInt, MonomialOrder, OrderKind, PolyJson, Polynomial};
use crate::quotient::{build_quotient, QuotientError, QuotientRing};
use crate::{ErrorKind, HasKind};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HashError {
    #[error("parameter check `{name}` failed: {lhs} vs {rhs}")]
    Inequality { name: &'static str, lhs: f64, rhs: f64 },
    #[error("invalid parameter: {0}")]
    Invalid(String),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error("input {index} is outside the domain (norm {norm} > {d})")]
    OutsideDomain { index: usize, norm: BigInt, d: u64 },
    #[error("expected {expected} inputs, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("domain has {size} tuples, above the budget of {budget}")]
    Budget { size: f64, budget: u64 },
    #[error("no collision exists: the domain is not larger than the range")]
    NoCollision,
    #[error("input of {bytes} bytes does not fit into one domain tuple")]
    InputTooLong { bytes: usize },
    #[error("malformed key: {0}")]
    Key(String),
}

impl HasKind for HashError {
    fn kind(&self) -> ErrorKind {
        match self {
            HashError::Budget { .. } => ErrorKind::Resource,
            HashError::Quotient(e) => e.kind(),
            _ => ErrorKind::Domain,
        }
    }
}

/// Raw parameters of the family.
#[derive(Clone, Debug)]
pub struct HashParams {
    pub p: BigInt,
    /// Defining ideal over ℤ.
    pub ideal: Ideal,
    pub order: MonomialOrder,
    /// Domain bound on the centered coefficients.
    pub d: u64,
    /// Key length.
    pub m: usize,
    /// Expansion bound for degree multipliers (3, …, 3).
    pub eta: f64,
}

/// Parameters together with the quotient ring over ℤ_p they determine.
#[derive(Clone, Debug)]
pub struct HashRing {
    params: HashParams,
    ring: QuotientRing,
    strict: bool,
}

impl HashRing {
    pub fn params(&self) -> &HashParams {
        &self.params
    }

    /// The quotient ring over ℤ_p.
    pub fn ring(&self) -> &QuotientRing {
        &self.ring
    }

    pub fn dimension(&self) -> usize {
        self.ring.dimension()
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    /// Reduces `b` and measures its centered norm against `d`.
    pub fn in_domain(&self, b: &Polynomial) -> Result<bool, HashError> {
        Ok(self.ring.reduce(b)?.centered().inf_norm() <= BigInt::from(self.params.d))
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Structural checks only: `p` prime, `d, m ≥ 1`, and the quotients over ℤ
/// and ℤ_p both free of the same finite dimension.
pub fn prepare(params: &HashParams) -> Result<HashRing, HashError> {
    let p = params
        .p
        .to_u64()
        .ok_or_else(|| HashError::Invalid(format!("modulus {} is not a 64-bit positive integer", params.p)))?;
    if !is_prime_u64(p) {
        return Err(HashError::Invalid(format!("modulus {p} is not prime")));
    }
    if params.d == 0 {
        return Err(HashError::Invalid("domain bound d must be at least 1".into()));
    }
    if params.m == 0 {
        return Err(HashError::Invalid("key length m must be at least 1".into()));
    }
    let over_z = build_quotient(&params.ideal.with_modulus(None), &params.order)?;
    if !over_z.is_free() {
        let (mono, k) = over_z.torsion_witness().expect("torsion");
        return Err(QuotientError::NotFree {
            monomial: mono.to_string(),
            order: k,
        }
        .into());
    }
    let ring = build_quotient(&params.ideal.with_modulus(Some(params.p.clone())), &params.order)?;
    if ring.dimension() != over_z.dimension() {
        return Err(HashError::Invalid(format!(
            "quotient has dimension {} over the integers but {} modulo {p}",
            over_z.dimension(),
            ring.dimension()
        )));
    }
    Ok(HashRing {
        params: params.clone(),
        ring,
        strict: false,
    })
}

/// Full validation. Lax mode checks `m > log p / log 2d`; strict mode
/// additionally requires `p ≥ 8·η·d·m·N^1.5·√(ln N)`.
pub fn validate(params: &HashParams, strict: bool) -> Result<HashRing, HashError> {
    if params.d == 0 {
        return Err(HashError::Inequality {
            name: "log 2d > 0",
            lhs: 0.0,
            rhs: 0.0,
        });
    }
    let mut ring = prepare(params)?;
    let p = params.p.to_f64().unwrap_or(f64::INFINITY);
    let d = params.d as f64;
    let m = params.m as f64;
    let log2d = (2.0 * d).ln();
    let richness = p.ln() / log2d;
    if !(log2d > 0.0 && m > richness) {
        return Err(HashError::Inequality {
            name: "m > log p / log 2d",
            lhs: m,
            rhs: richness,
        });
    }
    if strict {
        let n = ring.dimension() as f64;
        let bound = 8.0 * params.eta * d * m * n.powf(1.5) * n.ln().max(0.0).sqrt();
        if p < bound {
            return Err(HashError::Inequality {
                name: "p >= 8 eta d m N^1.5 sqrt(ln N)",
                lhs: p,
                rhs: bound,
            });
        }
    }
    ring.strict = strict;
    Ok(ring)
}

#[derive(Clone, Debug)]
pub struct HashKey {
    ring: HashRing,
    a: Vec<Polynomial>,
}

impl HashKey {
    /// Key from explicit ring elements (reduced on construction).
    pub fn new(ring: HashRing, a: Vec<Polynomial>) -> Result<Self, HashError> {
        if a.len() != ring.params.m {
            return Err(HashError::Arity {
                expected: ring.params.m,
                got: a.len(),
            });
        }
        let a = a.iter().map(|ai| ring.ring.reduce(ai)).collect::<Result<_, _>>()?;
        Ok(HashKey { ring, a })
    }

    pub fn ring(&self) -> &HashRing {
        &self.ring
    }

    pub fn a(&self) -> &[Polynomial] {
        &self.a
    }

    pub fn to_json(&self) -> KeyJson {
        let prm = &self.ring.params;
        let ord = &prm.order;
        KeyJson {
            p: DecInt(prm.p.clone()),
            ideal: IdealJson {
                nvars: prm.ideal.nvars(),
                modulus: None,
                generators: prm
                    .ideal
                    .generators()
                    .iter()
                    .map(|g| GenJson::Poly(g.lift().to_json(ord)))
                    .collect(),
            },
            order: OrderJson {
                kind: ord.kind().to_string(),
                priority: Some(ord.priority().to_vec()),
            },
            d: prm.d,
            m: prm.m,
            eta: prm.eta,
            a: self.a.iter().map(|ai| ai.to_json(ord)).collect(),
        }
    }

    pub fn from_json(j: &KeyJson) -> Result<Self, HashError> {
        let params = HashParams {
            p: j.p.0.clone(),
            ideal: j.ideal.to_ideal().map_err(HashError::Key)?,
            order: j.order.to_order(j.ideal.nvars).map_err(HashError::Key)?,
            d: j.d,
            m: j.m,
            eta: j.eta,
        };
        let ring = prepare(&params)?;
        let a = j
            .a
            .iter()
            .map(|pj| Polynomial::from_json(pj).map_err(|e| HashError::Key(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        HashKey::new(ring, a)
    }
}

/// Draws each coordinate of each `a_i` uniformly from `[0, p)`.
pub fn keygen(ring: &HashRing, seed: u64) -> HashKey {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let q = &ring.ring;
    // prepare() guarantees p fits in 64 bits
    let p = ring.params.p.to_u64().expect("64-bit modulus");
    let a = (0..ring.params.m)
        .map(|_| {
            let coords: Vec<BigInt> = (0..q.dimension()).map(|_| BigInt::from(rng.random_range(0..p))).collect();
            q.phi_inv(&coords).expect("free quotient")
        })
        .collect();
    HashKey { ring: ring.clone(), a }
}

fn check_inputs(key: &HashKey, b: &[Polynomial]) -> Result<Vec<Polynomial>, HashError> {
    if b.len() != key.a.len() {
        return Err(HashError::Arity {
            expected: key.a.len(),
            got: b.len(),
        });
    }
    let q = &key.ring.ring;
    let mut out = Vec::with_capacity(b.len());
    for (i, bi) in b.iter().enumerate() {
        let r = q.reduce(bi)?;
        let norm = r.centered().inf_norm();
        if norm > BigInt::from(key.ring.params.d) {
            return Err(HashError::OutsideDomain {
                index: i,
                norm,
                d: key.ring.params.d,
            });
        }
        out.push(r);
    }
    Ok(out)
}

/// `Σ a_i·b_i` reduced modulo (𝔞, p), without the domain restriction.
pub fn hash_unrestricted(key: &HashKey, b: &[Polynomial]) -> Result<Polynomial, HashError> {
    if b.len() != key.a.len() {
        return Err(HashError::Arity {
            expected: key.a.len(),
            got: b.len(),
        });
    }
    let q = &key.ring.ring;
    let mut acc = Polynomial::zero(q.nvars()).with_modulus(q.modulus().cloned());
    for (ai, bi) in key.a.iter().zip(b) {
        acc = acc.try_add(&q.mul(ai, bi)?).map_err(QuotientError::from)?;
    }
    Ok(q.reduce(&acc)?)
}

/// `h_a(b)` for `b ∈ D^m`.
pub fn hash(key: &HashKey, b: &[Polynomial]) -> Result<Polynomial, HashError> {
    let b = check_inputs(key, b)?;
    hash_unrestricted(key, &b)
}

/// `α ≠ β`, both in `D^m`, with equal hashes.
pub fn verify_collision(key: &HashKey, alpha: &[Polynomial], beta: &[Polynomial]) -> bool {
    let (Ok(a), Ok(b)) = (check_inputs(key, alpha), check_inputs(key, beta)) else {
        return false;
    };
    if a == b {
        return false;
    }
    matches!((hash_unrestricted(key, &a), hash_unrestricted(key, &b)), (Ok(x), Ok(y)) if x == y)
}

/// Decodes a tuple index in `[0, (2d+1)^{Nm})` into a domain tuple: base
/// `2d+1` digits, least significant first, digit `t` giving coefficient
/// `t − d`; the coordinates of `b_1` come first.
fn tuple_from_digits(ring: &HashRing, digits: &[i64]) -> Vec<Polynomial> {
    let q = &ring.ring;
    let n = q.dimension();
    let d = ring.params.d as i64;
    digits
        .chunks(n)
        .map(|c| {
            let coords: Vec<BigInt> = c.iter().map(|&t| BigInt::from(t - d)).collect();
            q.phi_inv(&coords).expect("free quotient")
        })
        .collect()
}

/// Exhaustive search over `D^m` in lexicographic order of the digit
/// encoding; returns the first repeat `(earlier, current)`.
pub fn find_collision_bruteforce(
    key: &HashKey,
    budget: u64,
) -> Result<(Vec<Polynomial>, Vec<Polynomial>), HashError> {
    let prm = &key.ring.params;
    let n = key.ring.dimension();
    let base = 2 * prm.d as i64 + 1;
    let len = n * prm.m;
    let size = (base as f64).powi(len as i32);
    if size > budget as f64 {
        return Err(HashError::Budget { size, budget });
    }
    let q = &key.ring.ring;
    let p = &prm.p;
    let mut seen: HashMap<Vec<BigInt>, Vec<i64>> = HashMap::new();
    let mut digits = vec![0i64; len];
    // a_i times each basis monomial, precomputed as coordinate vectors
    let basis_images: Vec<Vec<Vec<BigInt>>> = key
        .a
        .iter()
        .map(|ai| {
            q.basis()
                .iter()
                .map(|b| {
                    let prod = q.mul(ai, &Polynomial::term(b.clone(), 1)).expect("same ring");
                    q.phi(&prod).expect("free quotient")
                })
                .collect()
        })
        .collect();
    let d = prm.d as i64;
    loop {
        let mut acc = vec![BigInt::zero(); n];
        for (i, chunk) in digits.chunks(n).enumerate() {
            for (j, &t) in chunk.iter().enumerate() {
                let c = t - d;
                if c != 0 {
                    for (x, y) in acc.iter_mut().zip(&basis_images[i][j]) {
                        *x += y * c;
                    }
                }
            }
        }
        acc.iter_mut().for_each(|x| *x = x.mod_floor(p));
        if let Some(prev) = seen.get(&acc) {
            return Ok((tuple_from_digits(&key.ring, prev), tuple_from_digits(&key.ring, &digits)));
        }
        seen.insert(acc, digits.clone());
        // advance: lexicographic order with the first digit most significant
        let mut k = len;
        loop {
            if k == 0 {
                return Err(HashError::NoCollision);
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < base {
                break;
            }
            digits[k] = 0;
        }
    }
}

/// Something that produces collisions for a key.
pub trait CollisionOracle {
    fn collide(&self, key: &HashKey) -> Result<(Vec<Polynomial>, Vec<Polynomial>), HashError>;
}

/// Exhaustive search with a tuple budget.
#[derive(Clone, Copy, Debug)]
pub struct BruteForceOracle {
    pub budget: u64,
}

impl CollisionOracle for BruteForceOracle {
    fn collide(&self, key: &HashKey) -> Result<(Vec<Polynomial>, Vec<Polynomial>), HashError> {
        find_collision_bruteforce(key, self.budget)
    }
}

/// Encodes bytes as a domain tuple (little-endian integer, base `2d+1`
/// digits, digit `t` ↦ coefficient `t − d`, coordinates of `b_1` first).
pub fn encode_bytes(ring: &HashRing, bytes: &[u8]) -> Result<Vec<Polynomial>, HashError> {
    let n = ring.dimension();
    let len = n * ring.params.m;
    let base = BigInt::from(2 * ring.params.d + 1);
    let mut value = num_bigint::BigUint::from_bytes_le(bytes);
    let capacity = num_traits::pow(base.magnitude().clone(), len);
    if value >= capacity {
        return Err(HashError::InputTooLong { bytes: bytes.len() });
    }
    let b = base.magnitude().clone();
    let mut digits = Vec::with_capacity(len);
    for _ in 0..len {
        let (q, r) = value.div_rem(&b);
        digits.push(r.to_i64().expect("digit"));
        value = q;
    }
    Ok(tuple_from_digits(ring, &digits))
}

/// Generator as text or as the JSON term form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GenJson {
    Text(String),
    Poly(PolyJson),
}

/// `{"nvars":n, "modulus":p|null, "generators":[...]}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdealJson {
    pub nvars: usize,
    #[serde(default)]
    pub modulus: Option<DecInt>,
    pub generators: Vec<GenJson>,
}

impl IdealJson {
    pub fn to_ideal(&self) -> Result<Ideal, String> {
        let modulus = self.modulus.as_ref().map(|m| m.0.clone());
        let gens = self
            .generators
            .iter()
            .map(|g| match g {
                GenJson::Text(s) => Polynomial::parse_mod(s, Some(self.nvars), modulus.clone()),
                GenJson::Poly(pj) => {
                    if pj.nvars != self.nvars {
                        return Err(crate::poly::PolyError::Arity(format!(
                            "generator in {} variables, ideal in {}",
                            pj.nvars, self.nvars
                        )));
                    }
                    Polynomial::from_json(pj).map(|p| p.lift().with_modulus(modulus.clone()))
                }
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        Ideal::new(gens).map_err(|e| e.to_string())
    }

    pub fn from_ideal(ideal: &Ideal, ord: &MonomialOrder) -> Self {
        IdealJson {
            nvars: ideal.nvars(),
            modulus: ideal.modulus().cloned().map(DecInt),
            generators: ideal.generators().iter().map(|g| GenJson::Text(g.to_text(ord))).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderJson {
    pub kind: String,
    #[serde(default)]
    pub priority: Option<Vec<usize>>,
}

impl OrderJson {
    pub fn to_order(&self, nvars: usize) -> Result<MonomialOrder, String> {
        let kind: OrderKind = self.kind.parse().map_err(|e: crate::poly::PolyError| e.to_string())?;
        match &self.priority {
            Some(p) => {
                if p.len() != nvars {
                    return Err(format!("priority has {} entries for {nvars} variables", p.len()));
                }
                MonomialOrder::with_priority(kind, p.clone()).map_err(|e| e.to_string())
            }
            None => Ok(MonomialOrder::new(kind, nvars)),
        }
    }
}

/// `{p, ideal, order, d, m, eta, a:[poly-json...]}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KeyJson {
    pub p: DecInt,
    pub ideal: IdealJson,
    pub order: OrderJson,
    pub d: u64,
    pub m: usize,
    #[serde(default = "default_eta")]
    pub eta: f64,
    pub a: Vec<PolyJson>,
}

fn default_eta() -> f64 {
    1.0
}

/// Parameter file for key generation: the key format without `a`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamsJson {
    pub p: DecInt,
    pub ideal: IdealJson,
    #[serde(default = "default_order")]
    pub order: OrderJson,
    pub d: u64,
    pub m: usize,
    #[serde(default = "default_eta")]
    pub eta: f64,
    #[serde(default)]
    pub strict: bool,
}

fn default_order() -> OrderJson {
    OrderJson {
        kind: "lex".into(),
        priority: None,
    }
}

impl ParamsJson {
    pub fn to_params(&self) -> Result<HashParams, HashError> {
        Ok(HashParams {
            p: self.p.0.clone(),
            ideal: self.ideal.to_ideal().map_err(HashError::Invalid)?,
            order: self.order.to_order(self.ideal.nvars).map_err(HashError::Invalid)?,
            d: self.d,
            m: self.m,
            eta: self.eta,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: u64, gens: &[&str], d: u64, m: usize) -> HashParams {
        HashParams {
            p: p.into(),
            ideal: Ideal::parse(gens, Some(1), None).unwrap(),
            order: MonomialOrder::lex(1),
            d,
            m,
            eta: 1.0,
        }
    }

    fn p1(s: &str) -> Polynomial {
        Polynomial::parse(s, Some(1)).unwrap()
    }

    #[test]
    fn validation_examples() {
        assert!(validate(&params(17, &["x^2 + x + 1"], 1, 5), false).is_ok());
        match validate(&params(17, &["x^2 + x + 1"], 1, 1), false) {
            Err(HashError::Inequality { lhs, rhs, .. }) => assert!(lhs <= rhs),
            other => panic!("{other:?}"),
        }
        assert!(validate(&params(17, &["x^2 + x + 1"], 0, 5), false).is_err());
        assert!(validate(&params(17, &["x^2 + x + 1"], 1, 0), false).is_err());
        assert!(validate(&params(15, &["x^2 + x + 1"], 1, 5), false).is_err());
        assert!(matches!(
            validate(&params(17, &["x^2 + x + 1"], 1, 5), true),
            Err(HashError::Inequality { .. })
        ));
        assert!(validate(&params(17, &["2*x^2 + 1"], 1, 5), false).is_err());
    }

    #[test]
    fn hash_example_mod_seven() {
        let ring = validate(&params(7, &["x^2 + x + 1"], 1, 3), false).unwrap();
        let key = HashKey::new(
            ring,
            vec![p1("x"), p1("1 + x"), p1("0")],
        )
        .unwrap();
        let h = hash(&key, &[p1("1"), p1("x"), p1("0")]).unwrap();
        // x + x + x^2 with x^2 = 6x + 6
        assert_eq!(h.lift(), p1("x + 6"));
        assert!(hash(&key, &[p1("0"), p1("0"), p1("0")]).unwrap().is_zero());
        assert!(matches!(
            hash(&key, &[p1("2"), p1("0"), p1("0")]),
            Err(HashError::OutsideDomain { index: 0, .. })
        ));
        // 6 is -1 in centered form, so it lies in D
        assert!(hash(&key, &[p1("6"), p1("0"), p1("0")]).is_ok());
    }

    #[test]
    fn keygen_is_deterministic() {
        let ring = validate(&params(17, &["x^2 + x + 1"], 1, 5), false).unwrap();
        let a = keygen(&ring, 7);
        let b = keygen(&ring, 7);
        assert_eq!(a.a(), b.a());
        assert_ne!(a.a(), keygen(&ring, 8).a());
    }

    #[test]
    fn pigeonhole_collision() {
        let ring = validate(&params(17, &["x^2 + x + 1"], 1, 5), false).unwrap();
        let key = keygen(&ring, 1);
        let (alpha, beta) = find_collision_bruteforce(&key, 100_000).unwrap();
        assert!(verify_collision(&key, &alpha, &beta));
        assert!(!verify_collision(&key, &alpha, &alpha));
        assert!(matches!(
            find_collision_bruteforce(&key, 1000),
            Err(HashError::Budget { .. })
        ));
    }

    #[test]
    fn key_json_round_trip() {
        let ring = validate(&params(17, &["x^2 + x + 1"], 1, 5), false).unwrap();
        let key = keygen(&ring, 3);
        let s = serde_json::to_string(&key.to_json()).unwrap();
        let back = HashKey::from_json(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back.a(), key.a());
        assert_eq!(serde_json::to_string(&back.to_json()).unwrap(), s);
    }

    #[test]
    fn byte_encoding() {
        let ring = validate(&params(17, &["x^2 + x + 1"], 1, 5), false).unwrap();
        let b = encode_bytes(&ring, &[5]).unwrap();
        // 5 = 2 + 1*3: digits (2, 1, 0, 0, ...) -> coefficients (1, 0, -1, -1, ...)
        assert_eq!(b[0], Polynomial::parse("1", Some(1)).unwrap().with_modulus(Some(17.into())));
        assert_eq!(b[1].centered(), p1("-1 - x"));
        assert!(encode_bytes(&ring, &[0xff; 3]).is_err());
        assert!(hash(&keygen(&ring, 0), &b).is_ok());
    }
}
