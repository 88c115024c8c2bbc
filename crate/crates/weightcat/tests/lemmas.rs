use proptest::prelude::*;
use std::collections::BTreeSet;
use weightcat::degonemod::DegOneSpec;
use weightcat::paperlab::{
    appendix_a3, random_inputs, run_lemma, verify_ac1, verify_ak_an, verify_cc, verify_lem_a12, LabError, LemmaReport,
    DEFAULT_KS, LEMMAS,
};
use weightcat::rational::{parse_q, q, qf, Q};

fn val(r: &LemmaReport, key: &str) -> Q {
    parse_q(&r.computed[key]).unwrap_or_else(|_| panic!("{key}: {}", r.computed[key]))
}

fn set(r: &LemmaReport, key: &str) -> BTreeSet<Q> {
    r.computed[key]
        .trim_matches(|c| c == '{' || c == '}')
        .split(", ")
        .map(|x| parse_q(x).unwrap())
        .collect()
}

#[test]
fn eta_at_half_third() {
    let r = verify_lem_a12(&qf(1, 2), &qf(1, 3), &[0, 1], 4).unwrap();
    assert!(r.matched);
    assert_eq!(set(&r, "c set"), BTreeSet::from([q(0), qf(-11, 6)]));
    // (c + a1 + k)/(a2 − k + 1) on the c = 0 branch
    assert_eq!(val(&r, "eta(c=0, k=0)"), qf(3, 8));
    assert_eq!(val(&r, "eta(c=0, k=1)"), qf(9, 2));
}

#[test]
fn ac1_quarter() {
    let r = verify_ac1(&qf(1, 4), &qf(-3, 4), &DEFAULT_KS, 4).unwrap();
    assert!(r.matched, "{r:?}");
    assert_eq!(r.params["target"], "M(-1,1/2)");
    assert_eq!(set(&r, "c set"), BTreeSet::from([q(0)]));
    assert!(matches!(
        verify_ac1(&qf(1, 4), &qf(1, 3), &DEFAULT_KS, 4),
        Err(LabError::Invalid(_))
    ));
}

#[test]
fn boundary_constants() {
    let r = verify_ak_an(&DegOneSpec::A(vec![qf(1, 2), qf(1, 3), qf(1, 5), q(0)]), 4).unwrap();
    assert!(r.matched);
    assert_eq!(val(&r, "c"), q(0));
    let r = verify_ak_an(&DegOneSpec::A(vec![q(-1), qf(1, 2), qf(1, 3), qf(1, 5)]), 4).unwrap();
    assert!(r.matched);
    assert_eq!(val(&r, "c'"), q(-1));
    let r = verify_cc(&DegOneSpec::C(vec![q(-1), qf(1, 4), qf(1, 5)]), 4).unwrap();
    assert!(r.matched);
    assert_eq!(val(&r, "c"), q(-1));
}

#[test]
fn appendix_constants() {
    let r = appendix_a3(&qf(1, 2), &qf(1, 3), &q(0), &DEFAULT_KS, 4).unwrap();
    assert!(r.matched, "{r:?}");
    assert_eq!(val(&r, "d"), qf(-17, 6));
    // η1(0) = −(1/3 + 2)/(1/3 + 1)
    assert_eq!(val(&r, "eta1(k=0)"), qf(-7, 4));
    assert_eq!(set(&r, "d set"), BTreeSet::from([q(0), qf(-17, 6)]));
}

#[test]
fn appendix_kernel_vector_when_a_is_a_negative_integer() {
    // A = −3: p(X_{−β2}^{2} ⊗ x(k)) vanishes in L(C)
    let r = appendix_a3(&qf(1, 2), &qf(-7, 2), &q(0), &DEFAULT_KS, 4).unwrap();
    assert!(r.matched, "{r:?}");
    assert_eq!(r.computed["A in Z_{<-1}"], "true");
    let kernel: Vec<_> = r.checks.iter().filter(|(k, _)| k.starts_with("p(X_-b2^2")).collect();
    assert_eq!(kernel.len(), DEFAULT_KS.len());
    assert!(kernel.iter().all(|(_, &ok)| ok));
}

#[test]
fn report_json_round_trip() {
    let r = appendix_a3(&qf(1, 2), &qf(1, 3), &q(0), &DEFAULT_KS, 4).unwrap();
    let s = serde_json::to_string(&r).unwrap();
    assert!(s.contains("\"match\":true"));
    let back: LemmaReport = serde_json::from_str(&s).unwrap();
    assert_eq!(back, r);
}

fn lemma() -> impl Strategy<Value = &'static str> {
    prop::sample::select(LEMMAS.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn seeded_runs_match_and_stay_on_branch(lemma in lemma(), seed in any::<u64>()) {
        for input in random_inputs(lemma, 1, seed).unwrap() {
            let r = run_lemma(lemma, &input, 4).unwrap();
            prop_assert!(r.matched, "{:?}", r);
            prop_assert!(r.checks["depth 5 agrees with depth 4"]);
            if lemma == "lemA12" {
                let a = &input.a[0] + &input.a[1];
                prop_assert_eq!(set(&r, "c set"), BTreeSet::from([q(0), q(-1) - a]));
            }
        }
    }
}
