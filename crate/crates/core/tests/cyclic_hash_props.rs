mod common;

use common::*;
use ideal_lattice::cyclic::{cyclic_ideal, element_of, is_multivariate_cyclic, sigma, tensor_of, Tensor};
use ideal_lattice::groebner::Ideal;
use ideal_lattice::hashfam::{
    find_collision_bruteforce, hash, hash_unrestricted, keygen, prepare, validate, verify_collision, HashKey,
    HashParams, KeyJson,
};
use ideal_lattice::lattice::ideal_to_lattice;
use ideal_lattice::poly::{MonomialOrder, Polynomial};
use ideal_lattice::quotient::build_quotient;
use num_bigint::BigInt;
use proptest::prelude::*;

const SHAPES: [&[usize]; 4] = [&[3], &[2, 2], &[2, 3], &[2, 2, 3]];

fn arb_tensor(shape: &'static [usize]) -> impl Strategy<Value = Tensor> {
    arb_vec(shape.iter().product(), 9).prop_map(move |d| Tensor::new(shape.to_vec(), d).unwrap())
}

fn arb_shaped_pair() -> impl Strategy<Value = (Tensor, Tensor)> {
    (0..SHAPES.len()).prop_flat_map(|k| (arb_tensor(SHAPES[k]), arb_tensor(SHAPES[k])))
}

fn ring(p: u64, m: usize) -> ideal_lattice::hashfam::HashRing {
    prepare(&HashParams {
        p: p.into(),
        ideal: Ideal::parse(&["x^2 + x + 1"], Some(1), None).unwrap(),
        order: MonomialOrder::lex(1),
        d: 1,
        m,
        eta: 1.0,
    })
    .unwrap()
}

#[test]
fn storage_order_last_axis_fastest() {
    let t = Tensor::new(vec![2, 3], ints(&[1, 2, 3, 4, 5, 6])).unwrap();
    assert_eq!(element_of(&t), poly("1 + 2*y + 3*y^2 + 4*x + 5*x*y + 6*x*y^2", 2));
    assert_eq!(sigma(&t, 1).unwrap().data(), ints(&[3, 1, 2, 6, 4, 5]));
}

#[test]
fn strict_validation() {
    let params = HashParams {
        p: 17.into(),
        ideal: Ideal::parse(&["x^2 + x + 1"], Some(1), None).unwrap(),
        order: MonomialOrder::lex(1),
        d: 1,
        m: 5,
        eta: 1.0,
    };
    assert!(validate(&params, false).is_ok());
    assert!(validate(&params, true).is_err());
    assert!(validate(&HashParams { m: 2, ..params }, false).is_err());
}

proptest! {
    #[test]
    fn shift_is_linear((t, s) in arb_shaped_pair(), a in -5i64..=5, b in -5i64..=5) {
        let (a, b) = (BigInt::from(a), BigInt::from(b));
        for i in 0..t.shape().len() {
            let lhs = sigma(&t.scale(&a).add(&s.scale(&b)), i).unwrap();
            let rhs = sigma(&t, i).unwrap().scale(&a).add(&sigma(&s, i).unwrap().scale(&b));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn shift_matches_multiplication((t, _) in arb_shaped_pair()) {
        let shape = t.shape().to_vec();
        let n = shape.len();
        let q = build_quotient(&cyclic_ideal(&shape).unwrap(), &MonomialOrder::lex(n)).unwrap();
        let f = element_of(&t);
        prop_assert_eq!(tensor_of(&f, &shape).unwrap(), t.clone());
        for i in 0..n {
            let xf = q.mul(&Polynomial::var(n, i), &f).unwrap();
            prop_assert_eq!(tensor_of(&xf, &shape).unwrap(), sigma(&t, i).unwrap());
        }
    }

    #[test]
    fn ideal_lattices_are_cyclic((t, s) in arb_shaped_pair()) {
        let shape = t.shape().to_vec();
        let q = build_quotient(&cyclic_ideal(&shape).unwrap(), &MonomialOrder::lex(shape.len())).unwrap();
        let l = ideal_to_lattice(&q, &[element_of(&t), element_of(&s)]).unwrap();
        prop_assert!(is_multivariate_cyclic(&l, &shape).unwrap());
    }

    #[test]
    fn hash_is_bilinear(
        a in prop::collection::vec(arb_poly(1, 2, 1, 16), 3),
        a2 in prop::collection::vec(arb_poly(1, 2, 1, 16), 3),
        b in prop::collection::vec(arb_poly(1, 2, 1, 40), 3),
        c in prop::collection::vec(arb_poly(1, 2, 1, 40), 3),
    ) {
        let r = ring(17, 3);
        let q = r.ring().clone();
        let key = |a: &[Polynomial]| HashKey::new(r.clone(), a.iter().map(|x| q.reduce(x).unwrap()).collect()).unwrap();
        let add = |x: &[Polynomial], y: &[Polynomial]| -> Vec<Polynomial> { x.iter().zip(y).map(|(u, v)| u + v).collect() };
        let ka = key(&a);
        let lhs = hash_unrestricted(&ka, &add(&b, &c)).unwrap();
        let rhs = q.reduce(&hash_unrestricted(&ka, &b).unwrap().try_add(&hash_unrestricted(&ka, &c).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let lhs = hash_unrestricted(&key(&add(&a, &a2)), &b).unwrap();
        let rhs = q.reduce(&hash_unrestricted(&ka, &b).unwrap().try_add(&hash_unrestricted(&key(&a2), &b).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pigeonhole_collisions(seed in any::<u64>(), k in 0usize..3) {
        // (2d+1)^{Nm} > p^N for each (p, m)
        let (p, m) = [(5u64, 3usize), (7, 4), (13, 5)][k];
        let r = ring(p, m);
        let key = keygen(&r, seed);
        let (a, b) = find_collision_bruteforce(&key, 1_000_000).unwrap();
        prop_assert!(verify_collision(&key, &a, &b));
        prop_assert_eq!(hash(&key, &a).unwrap(), hash(&key, &b).unwrap());
        let z: Vec<Polynomial> = a.iter().zip(&b).map(|(x, y)| &x.centered() - &y.centered()).collect();
        prop_assert!(z.iter().all(|zi| zi.inf_norm() <= BigInt::from(2)));
        prop_assert!(hash_unrestricted(&key, &z).unwrap().is_zero());
    }

    #[test]
    fn key_round_trip(seed in any::<u64>()) {
        let key = keygen(&ring(17, 5), seed);
        let s = serde_json::to_string(&key.to_json()).unwrap();
        let back = HashKey::from_json(&serde_json::from_str::<KeyJson>(&s).unwrap()).unwrap();
        prop_assert_eq!(back.a(), key.a());
        prop_assert_eq!(serde_json::to_string(&back.to_json()).unwrap(), s);
        let again = keygen(&ring(17, 5), seed);
        prop_assert_eq!(again.a(), key.a());
    }
}
