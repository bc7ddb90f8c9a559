mod common;

use common::{all_types, dependent_triples, structure_constant_axioms};
use kuq::root_system::RootSystem;

#[test]
fn structure_constant_axioms_exhaustive() {
    for ct in all_types() {
        structure_constant_axioms(&RootSystem::from_type(ct)).unwrap();
    }
}

#[test]
fn enumeration_is_linear_extension() {
    for ct in all_types() {
        let rs = RootSystem::from_type(ct);
        let roots = &rs.positive_roots;
        for i in 0..roots.len() {
            assert_eq!(roots[i].height as i32, roots[i].coeffs.iter().sum::<i32>());
            assert!(roots[i].coeffs.iter().all(|&c| c >= 0));
            for j in i + 1..roots.len() {
                let below = roots[j].coeffs.iter().zip(&roots[i].coeffs).all(|(a, b)| a <= b);
                assert!(!below, "{ct}: beta_{j} <= beta_{i}");
            }
        }
    }
}

#[test]
fn dependent_triples_up_to_rank_five() {
    for ct in all_types().into_iter().filter(|c| c.rank >= 3 && c.rank <= 5) {
        dependent_triples(&RootSystem::from_type(ct)).unwrap();
    }
}

#[test]
fn description_serializes() {
    let rs = RootSystem::from_type("G2".parse().unwrap());
    let d = rs.describe();
    let json = serde_json::to_string(&d).unwrap();
    let back: kuq::root_system::RootSystemDescription = serde_json::from_str(&json).unwrap();
    assert_eq!(back, d);
    assert_eq!(back.bad_primes, vec![2, 3]);
}
