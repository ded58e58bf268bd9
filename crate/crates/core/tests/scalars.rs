mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::Rng;
use vf_core::parse::{parse_param_poly, parse_scalar};
use vf_core::{FieldAutomorphism, Indeterminate, ParamPoly, Scalar};

fn arb_scalar() -> impl Strategy<Value = Scalar> {
    any::<u64>().prop_map(|seed| common::small_scalar(&mut common::rng(seed)))
}

fn arb_poly() -> impl Strategy<Value = ParamPoly> {
    any::<u64>().prop_map(|seed| {
        let mut r = common::rng(seed);
        let vars = ["a11", "a12", "a21", "a22"];
        let mut p = ParamPoly::zero();
        for _ in 0..r.gen_range(1..4) {
            let mut t = ParamPoly::constant(common::small_scalar(&mut r));
            for _ in 0..r.gen_range(0..3) {
                t = t.mul(&ParamPoly::named(vars[r.gen_range(0..4)]));
            }
            p = p.add(&t);
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_laws(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, Scalar::zero());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv().unwrap(), Scalar::one());
        }
    }

    #[test]
    fn automorphism_is_a_field_homomorphism(a in arb_scalar(), b in arb_scalar()) {
        let phi = FieldAutomorphism::swap(1, 2).unwrap();
        prop_assert_eq!(phi.apply(&(&a + &b)), &phi.apply(&a) + &phi.apply(&b));
        prop_assert_eq!(phi.apply(&(&a * &b)), &phi.apply(&a) * &phi.apply(&b));
        prop_assert_eq!(phi.inverse().apply(&phi.apply(&a)), a);
    }

    #[test]
    fn display_round_trips(a in arb_scalar(), p in arb_poly()) {
        prop_assert_eq!(parse_scalar(&a.to_string()).unwrap(), a);
        prop_assert_eq!(parse_param_poly(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn branching_factorization_multiplies_back(p in arb_poly(), q in arb_poly()) {
        let det = parse_param_poly("a11*a22 - a12*a21").unwrap();
        let f = p.mul(&q).mul(&det);
        let fac = f.factor_for_branching(std::slice::from_ref(&det));
        prop_assert_eq!(fac.product(), f);
        for g in &fac.factors {
            prop_assert!(!g.is_constant());
            prop_assert_eq!(g.monic(), g.clone());
        }
    }

    #[test]
    fn reduce_is_idempotent(p in arb_poly(), v in arb_poly()) {
        let subs = BTreeMap::from([(Indeterminate::new("a12"), parse_param_poly("t1*a21 + 1").unwrap())]);
        let van = vec![v];
        let once = p.reduce(&subs, &van).unwrap();
        prop_assert_eq!(once.reduce(&subs, &van).unwrap(), once);
    }
}

#[test]
fn cyclic_substitution_is_rejected() {
    let subs = BTreeMap::from([
        (Indeterminate::new("a11"), parse_param_poly("a12 + 1").unwrap()),
        (Indeterminate::new("a12"), parse_param_poly("a11").unwrap()),
    ]);
    assert!(ParamPoly::named("a11").reduce(&subs, &[]).is_err());
}

#[test]
fn zero_has_no_inverse() {
    assert!(Scalar::zero().inv().is_err());
    let t1 = Scalar::transcendental(0);
    assert!((&t1 - &t1).inv().is_err());
}

#[test]
fn canonical_fractions() {
    let a = parse_scalar("(t1^2 - 1)/(t1 - 1)").unwrap();
    assert_eq!(a, parse_scalar("t1 + 1").unwrap());
    let b = parse_scalar("2/(4*t2)").unwrap();
    assert_eq!(b, parse_scalar("1/(2*t2)").unwrap());
}

#[test]
fn automorphism_specs() {
    let phi = FieldAutomorphism::parse_spec("swap:1,2").unwrap();
    assert_eq!(phi.apply(&Scalar::transcendental(0)), Scalar::transcendental(1));
    assert_eq!(phi.spec_string(), "swap:1,2");
    assert!(FieldAutomorphism::parse_spec("swap:0,1").is_err());
    assert!(FieldAutomorphism::parse_spec("frobenius").is_err());
}
