use proptest::prelude::*;
use std::sync::Arc;
use weightcat::degonemod::{build_m, build_n};
use weightcat::extcoh::{
    build_extension, cocycle_check, cocycle_space, ext_solve_type_a, ext_solve_type_c, is_coboundary, make_coboundary,
    make_sl2_cocycle, random_cocycles, random_phi, spot_check, window_cohomology_dim, ExtError,
};
use weightcat::rational::{q, qf, Q};
use weightcat::rootsys::{CartanType, LieAlg};
use weightcat::weylmod::{Constraint, LatticeModule, WeylParams};

fn sl2(a1: Q, a2: Q) -> LatticeModule {
    let alg = Arc::new(LieAlg::new(CartanType::a(1)).unwrap());
    LatticeModule::new(alg, WeylParams::new(vec![a1, a2]), Constraint::SumZero)
}

fn sp4(a1: Q, a2: Q) -> LatticeModule {
    build_m(vec![a1, a2]).unwrap().module
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn coboundaries_are_recognised_sl2(seed in any::<u64>()) {
        let m = sl2(qf(1, 2), qf(1, 3));
        let n = sl2(qf(3, 2), qf(-2, 3));
        for (x, y) in [(&m, &m), (&n, &m)] {
            let phi = random_phi(x, y, 3, seed);
            let c = make_coboundary(&phi, x, y, 3);
            let (checked, bad) = cocycle_check(&c, x, y);
            prop_assert!(checked > 0 && bad.is_empty());
            let w = is_coboundary(&c, x, y, 3).expect("coboundary witness");
            prop_assert_eq!(make_coboundary(&w.phi, x, y, 3), c);
        }
    }

    #[test]
    fn coboundaries_are_recognised_sp4(seed in any::<u64>()) {
        let m = sp4(qf(1, 3), qf(1, 5));
        let phi = random_phi(&m, &m, 1, seed);
        let c = make_coboundary(&phi, &m, &m, 1);
        prop_assert!(is_coboundary(&c, &m, &m, 1).is_some());
    }
}

#[test]
fn random_window_cocycles_satisfy_the_cocycle_identity() {
    let m = sl2(qf(1, 2), qf(1, 3));
    let z = cocycle_space(&m, &m, 3);
    assert!(z.dim() > 0);
    for c in random_cocycles(&z, 10, 5) {
        let (checked, bad) = cocycle_check(&c, &m, &m);
        assert!(checked > 0 && bad.is_empty(), "{bad:?}");
    }
    let s = sp4(qf(1, 3), qf(1, 5));
    let z = cocycle_space(&s, &s, 2);
    for c in random_cocycles(&z, 5, 9) {
        assert!(cocycle_check(&c, &s, &s).1.is_empty());
    }
}

#[test]
fn sl2_self_extension_line() {
    let m = sl2(qf(1, 2), qf(1, 3));
    for b in 1..=4 {
        assert_eq!(window_cohomology_dim(&m, &m, b), 1, "B={b}");
    }
    // the b-line: c(X⁺) = b (X⁻)⁻¹ is a cocycle and never a coboundary for b ≠ 0
    for b in [q(1), qf(-2, 7)] {
        let c = make_sl2_cocycle(&b, &m, 3).unwrap();
        assert!(is_coboundary(&c, &m, &m, 3).is_none());
        let e = build_extension(c, m.clone(), m.clone()).unwrap();
        assert!(e.bracket_fidelity().1.is_empty());
    }
    assert_eq!(window_cohomology_dim(&sl2(qf(1, 4), qf(1, 12)), &m, 3), 0);
}

#[test]
fn type_a_dimensions_are_stable_in_the_window() {
    let m = build_n(vec![q(-1), qf(1, 2), qf(1, 3), q(0)]).unwrap().module;
    let other = build_n(vec![q(-1), qf(1, 5), qf(2, 7), q(0)]).unwrap().module;
    let a4 = build_n(vec![q(-1), q(-1), qf(1, 2), qf(1, 3), q(0)]).unwrap().module;
    for b in 1..=4 {
        assert_eq!(ext_solve_type_a(&m, &m, 1, b).unwrap().dimension, 0, "B={b}");
        assert_eq!(ext_solve_type_a(&m, &other, 1, b).unwrap().dimension, 0, "B={b}");
    }
    for b in 1..=3 {
        assert_eq!(ext_solve_type_a(&a4, &a4, 2, b).unwrap().dimension, 0, "A4 B={b}");
    }
    assert!(matches!(
        ext_solve_type_a(&m, &m, 1, 0),
        Err(ExtError::CertificationImpossible(..))
    ));
}

#[test]
fn type_c_dimensions_are_stable_in_the_window() {
    let m = sp4(q(-1), qf(1, 4));
    let c3 = build_m(vec![q(-1), q(-1), qf(2, 5)]).unwrap().module;
    for b in 1..=4 {
        assert_eq!(ext_solve_type_c(&m, &m, b).unwrap().dimension, 0, "B={b}");
        assert_eq!(
            ext_solve_type_c(&m, &sp4(q(-1), qf(9, 4)), b).unwrap().dimension,
            0,
            "B={b}"
        );
    }
    for b in 1..=3 {
        assert_eq!(ext_solve_type_c(&c3, &c3, b).unwrap().dimension, 0, "C3 B={b}");
    }
}

#[test]
fn constraint_system_report_serializes() {
    let m = sp4(q(-1), qf(1, 4));
    let s = ext_solve_type_c(&m, &m, 3).unwrap();
    let v = serde_json::to_value(&s).unwrap();
    assert_eq!(v["window"], 3);
    assert_eq!(v["dimension"], 0);
    assert!(v["basis"].as_array().unwrap().is_empty());
    assert_eq!(v["certified"], true);
}

#[test]
fn sp4_spot_checks_across_seeds() {
    let x = sp4(qf(1, 3), qf(1, 5));
    let y = sp4(qf(2, 7), qf(-3, 4));
    for seed in 0..3 {
        for (a, b) in [(&x, &x), (&y, &y), (&x, &y)] {
            let r = spot_check(a, b, 2, 10, seed);
            assert!(r.pass, "{r:?}");
        }
    }
}
