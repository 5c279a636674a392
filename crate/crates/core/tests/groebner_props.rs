mod common;

use common::*;
use ideal_lattice::groebner::{
    buchberger, divide, gcd_polynomial, groebner, groebner_with_budget, ideal_membership, normal_form, s_polynomial, GroebnerBasis, Ideal,
};
use ideal_lattice::poly::{MonomialOrder, Polynomial};
use num_bigint::BigInt;
use proptest::prelude::*;

fn arb_ideal(n: usize) -> impl Strategy<Value = Ideal> {
    prop::collection::vec(arb_nonzero_poly(n, 3, 2, 9), 1..=3).prop_map(|g| Ideal::new(g).unwrap())
}

fn closed(gb: &GroebnerBasis) -> bool {
    let el = gb.elements();
    (0..el.len()).all(|i| {
        (i + 1..el.len()).all(|j| {
            let s = s_polynomial(&el[i], &el[j], gb.order()).unwrap();
            let g = gcd_polynomial(&el[i], &el[j], gb.order()).unwrap();
            normal_form(&s, gb).is_zero() && g.is_none_or(|g| normal_form(&g, gb).is_zero())
        })
    })
}

fn sorted(gb: &GroebnerBasis) -> Vec<Polynomial> {
    let mut v = gb.elements().to_vec();
    v.sort_by_key(|p| p.to_string());
    v
}

#[test]
fn worked_example() {
    let i = Ideal::parse(&["3*x^2", "5*x^2", "y"], Some(2), None).unwrap();
    let gb = groebner(&i, &MonomialOrder::lex(2)).unwrap();
    assert_eq!(sorted(&gb), vec![poly("x^2", 2), poly("y", 2)]);
    assert!(gb.is_monic());
}

#[test]
fn integer_coefficients_give_torsion() {
    let i = Ideal::parse(&["2*x", "x^2"], Some(1), None).unwrap();
    let gb = groebner(&i, &MonomialOrder::lex(1)).unwrap();
    assert!(!gb.is_monic());
    assert!(ideal_membership(&poly("2*x", 1), &gb));
    assert!(!ideal_membership(&poly("x", 1), &gb));
}

#[test]
fn modular_basis() {
    let i = Ideal::parse(&["3*x^2 + 1", "x*y - 2"], Some(2), Some(BigInt::from(7))).unwrap();
    let gb = groebner(&i, &MonomialOrder::lex(2)).unwrap();
    assert!(gb.is_monic());
    assert!(closed(&gb));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn strong_basis_is_closed(i in arb_ideal(2)) {
        let ord = MonomialOrder::lex(2);
        let full = buchberger(&i, &ord).unwrap();
        let gb = groebner(&i, &ord).unwrap();
        prop_assert!(closed(&full));
        prop_assert!(closed(&gb));
        prop_assert!(gb.is_short_reduced());
        for g in i.generators() {
            prop_assert!(ideal_membership(g, &gb));
        }
    }

    #[test]
    fn normal_form_idempotent(i in arb_ideal(2), f in arb_poly(2, 6, 4, 20)) {
        let gb = groebner(&i, &MonomialOrder::grevlex(2)).unwrap();
        let r = normal_form(&f, &gb);
        prop_assert_eq!(normal_form(&r, &gb), r);
    }

    #[test]
    fn division_identity(
        gens in prop::collection::vec(arb_nonzero_poly(3, 3, 1, 9), 1..=3),
        f in arb_poly(3, 6, 3, 20),
    ) {
        let gb = groebner_with_budget(&Ideal::new(gens).unwrap(), &MonomialOrder::grevlex(3), 20_000);
        prop_assume!(gb.is_ok());
        let gb = gb.unwrap();
        let d = divide(&f, &gb);
        let mut acc = d.remainder.clone();
        for (q, g) in d.quotients.iter().zip(gb.elements()) {
            acc = &acc + &(q * g);
        }
        prop_assert_eq!(acc, f.clone());
        prop_assert_eq!(d.remainder, normal_form(&f, &gb));
    }

    #[test]
    fn short_basis_is_unique(gens in prop::collection::vec(arb_nonzero_poly(2, 3, 2, 9), 2..=3), rot in 1usize..3) {
        let ord = MonomialOrder::grlex(2);
        let a = groebner(&Ideal::new(gens.clone()).unwrap(), &ord).unwrap();
        let mut perm = gens.clone();
        perm.rotate_left(rot % gens.len());
        perm.reverse();
        let b = groebner(&Ideal::new(perm).unwrap(), &ord).unwrap();
        prop_assert_eq!(sorted(&a), sorted(&b));
    }

    #[test]
    fn members_reduce_to_zero(i in arb_ideal(2), h in prop::collection::vec(arb_poly(2, 3, 2, 5), 3)) {
        let gb = groebner(&i, &MonomialOrder::lex(2)).unwrap();
        let mut f = Polynomial::zero(2);
        for (g, c) in i.generators().iter().zip(&h) {
            f = &f + &(g * c);
        }
        prop_assert!(ideal_membership(&f, &gb));
    }

    #[test]
    fn monic_normal_form_ignores_sign(f in arb_poly(1, 5, 6, 20)) {
        // x^3 - 2 and -(x^3 - 2) generate the same ideal and give the same monic basis
        let a = groebner(&Ideal::parse(&["x^3 - 2"], Some(1), None).unwrap(), &MonomialOrder::lex(1)).unwrap();
        let b = groebner(&Ideal::parse(&["-x^3 + 2"], Some(1), None).unwrap(), &MonomialOrder::lex(1)).unwrap();
        prop_assert!(a.is_monic() && b.is_monic());
        prop_assert_eq!(normal_form(&f, &a), normal_form(&f, &b));
    }
}
