mod common;

use common::{rs, torus_divisibility};
use kuq::oracle::{count_orbits_burnside, count_orbits_unionfind, OracleLimits};

#[test]
fn union_find_agrees_with_burnside() {
    let lim = OracleLimits::default();
    for (t, q, l) in [
        ("A1", 4, 1),
        ("A2", 4, 1),
        ("A2", 5, 1),
        ("B2", 5, 1),
        ("A3", 3, 1),
        ("A3", 3, 2),
        ("G2", 5, 2),
    ] {
        let r = rs(t);
        let uf = count_orbits_unionfind(&r, q, l, lim).unwrap();
        let b = count_orbits_burnside(&r, q, l, lim).unwrap();
        assert_eq!(uf.count, b, "{t} q={q} l={l}");
    }
}

#[test]
fn orbit_sizes_are_powers_of_p() {
    for (t, q, p) in [("A3", 3, 3), ("B2", 5, 5), ("A2", 4, 2)] {
        let c = count_orbits_unionfind(&rs(t), q, 1, OracleLimits::default()).unwrap();
        let total: u64 = c.orbit_sizes.iter().map(|(s, k)| s * k).sum();
        assert_eq!(total, q.pow(rs(t).num_positive() as u32));
        assert!(c.orbit_sizes.iter().any(|&(s, _)| s == 1));
        for (mut s, _) in c.orbit_sizes {
            while s % p == 0 {
                s /= p;
            }
            assert_eq!(s, 1, "{t} q={q}");
        }
    }
}

#[test]
fn torus_orbit_sizes_divisible() {
    for (t, qs) in [
        ("A2", &[2u64, 3, 5][..]),
        ("A3", &[2, 3, 5]),
        ("B2", &[3, 5]),
        ("B3", &[3, 5]),
    ] {
        for &q in qs {
            assert!(torus_divisibility(&rs(t), q).unwrap() > 0);
        }
    }
}
