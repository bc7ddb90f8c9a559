mod common;

use common::rs;
use kuq::coeffs::predict_low_coeffs;
use kuq::counting::CountPolynomial;
use kuq::engine::{run, EngineOptions, FamilyState};

const SMALL: [&str; 8] = ["A1", "A2", "B2", "G2", "A3", "B3", "C3", "A4"];

#[test]
fn census_matches_low_degree_structure() {
    for t in SMALL {
        let r = rs(t);
        let res = run(&r, &EngineOptions::default());
        let pred = predict_low_coeffs(&r);
        assert_eq!(res.census.get(&0).copied(), Some(1), "{t}");
        assert_eq!(res.census.get(&1).copied().unwrap_or(0) as u64, pred.c1, "{t}");
        if r.num_positive() > 1 {
            assert_eq!(res.census.get(&2).copied().unwrap_or(0) as u64, pred.c2, "{t}");
        }
    }
}

#[test]
fn normalization_does_not_change_the_count() {
    for t in ["A2", "B2", "G2", "A3", "B3"] {
        let r = rs(t);
        let a = run(&r, &EngineOptions::default());
        let b = run(
            &r,
            &EngineOptions {
                normalize: false,
                ..Default::default()
            },
        );
        assert_eq!(a.polynomial, b.polynomial, "{t}");
        assert!(b.bad.is_empty(), "{t}");
        assert!(b.families.iter().all(|f| f.normalized.is_empty()));
    }
}

#[test]
fn overrides_do_not_change_the_count() {
    let r = rs("B3");
    let all: Vec<usize> = (0..r.num_positive()).step_by(2).collect();
    let res = run(
        &r,
        &EngineOptions {
            normalization_overrides: all,
            ..Default::default()
        },
    );
    assert_eq!(res.polynomial.render_v(), "v^4+8v^3+16v^2+9v+1");
}

#[test]
fn runs_are_deterministic() {
    for t in ["B3", "G2"] {
        let r = rs(t);
        let a = serde_json::to_string(&run(&r, &EngineOptions::default()).artifact(true)).unwrap();
        let b = serde_json::to_string(&run(&r, &EngineOptions::default()).artifact(true)).unwrap();
        let c = serde_json::to_string(
            &run(
                &r,
                &EngineOptions {
                    workers: 4,
                    ..Default::default()
                },
            )
            .artifact(true),
        )
        .unwrap();
        assert_eq!(a, b, "{t}");
        assert_eq!(a, c, "{t}");
    }
}

#[test]
fn every_family_count_is_nonnegative_at_small_q() {
    let res = run(&rs("B3"), &EngineOptions::default());
    for f in &res.families {
        for q in [3u64, 5, 7] {
            assert!(f.count().eval_q(q) >= 0.into(), "{}", f.signature);
        }
    }
}

#[test]
fn family_counts_sum_to_total() {
    let res = run(&rs("G2"), &EngineOptions::default());
    let sum = res
        .families
        .iter()
        .fold(CountPolynomial::zero(), |acc, f| acc.add(&f.count()));
    assert_eq!(sum, res.polynomial);
}

#[test]
fn budget_exhaustion_is_flagged() {
    let res = run(
        &rs("B3"),
        &EngineOptions {
            max_states: 10,
            ..Default::default()
        },
    );
    assert!(res.partial);
    assert!(!res.is_complete());
}

#[test]
fn rank_one_uses_the_same_path() {
    let res = run(&rs("A1"), &EngineOptions::default());
    assert_eq!(res.families.len(), 2);
    assert_eq!(res.polynomial.render_v(), "v+1");
    assert!(FamilyState::initial().signature.is_empty());
}
