#![allow(dead_code)]

use ideal_lattice::groebner::Ideal;
use ideal_lattice::poly::{MonomialOrder, Polynomial};
use ideal_lattice::quotient::{build_quotient, QuotientRing};
use num_bigint::BigInt;
use proptest::prelude::*;

pub fn poly(s: &str, n: usize) -> Polynomial {
    Polynomial::parse(s, Some(n)).unwrap()
}

pub fn quotient(gens: &[&str], n: usize) -> QuotientRing {
    build_quotient(&Ideal::parse(gens, Some(n), None).unwrap(), &MonomialOrder::lex(n)).unwrap()
}

pub fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Polynomials in `n` variables with up to `terms` terms, each exponent at
/// most `deg` and coefficients in `[-c, c]`.
pub fn arb_poly(n: usize, terms: usize, deg: u32, c: i64) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0..=deg, n), -c..=c), 0..=terms)
        .prop_map(move |t| Polynomial::from_terms(n, t))
}

pub fn arb_nonzero_poly(n: usize, terms: usize, deg: u32, c: i64) -> impl Strategy<Value = Polynomial> {
    arb_poly(n, terms, deg, c).prop_filter("nonzero", |p| !p.is_zero())
}

pub fn arb_vec(len: usize, c: i64) -> impl Strategy<Value = Vec<BigInt>> {
    prop::collection::vec(-c..=c, len).prop_map(|v| ints(&v))
}
