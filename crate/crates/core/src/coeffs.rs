//! Closed forms for the three lowest coefficients of `k(U(q))` in `v`, and
//! the torus orbit-size divisor attached to a set of roots.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::counting::CountPolynomial;
use crate::root_system::RootSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowCoeffPrediction {
    pub c0: u64,
    pub c1: u64,
    pub c2: u64,
}

impl LowCoeffPrediction {
    pub fn as_array(&self) -> [u64; 3] {
        [self.c0, self.c1, self.c2]
    }

    /// Compare with the low coefficients of a computed polynomial.
    pub fn matches(&self, p: &CountPolynomial) -> bool {
        self.as_array()
            .iter()
            .enumerate()
            .all(|(k, &c)| p.coeff_v(k) == c.into())
    }
}

/// `(1, N, #{j < k : beta_k - beta_j not a root})`.
pub fn predict_low_coeffs(rs: &RootSystem) -> LowCoeffPrediction {
    let n = rs.num_positive();
    let mut pairs = 0u64;
    for j in 0..n {
        for k in j + 1..n {
            let diff: Vec<i32> = rs
                .root(k)
                .coeffs
                .iter()
                .zip(&rs.root(j).coeffs)
                .map(|(a, b)| a - b)
                .collect();
            if !rs.is_root(&diff) {
                pairs += 1;
            }
        }
    }
    LowCoeffPrediction {
        c0: 1,
        c1: n as u64,
        c2: pairs,
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoeffError {
    #[error("roots {0:?} are linearly dependent")]
    Dependent(Vec<usize>),
    #[error("v must be positive")]
    NonPositive,
}

/// `v^k / prod_l gcd(d_l, v)` where `d_l` are the elementary divisors of the
/// roots in `set` (0-based indices).
pub fn orbit_divisor(rs: &RootSystem, set: &[usize], v: u64) -> Result<u64, CoeffError> {
    if v == 0 {
        return Err(CoeffError::NonPositive);
    }
    if !rs.independent(set) {
        return Err(CoeffError::Dependent(set.to_vec()));
    }
    let d: u64 = rs
        .snf_diagonal(set)
        .iter()
        .map(|&dl| num_integer::gcd(dl.unsigned_abs(), v))
        .product();
    Ok(v.pow(set.len() as u32) / d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(t: &str) -> RootSystem {
        RootSystem::from_type(t.parse().unwrap())
    }

    #[test]
    fn predictions() {
        assert_eq!(predict_low_coeffs(&rs("A2")).as_array(), [1, 3, 1]);
        assert_eq!(predict_low_coeffs(&rs("B2")).as_array(), [1, 4, 2]);
        assert_eq!(predict_low_coeffs(&rs("B3")).as_array(), [1, 9, 16]);
        assert!(predict_low_coeffs(&rs("G2")).matches(&CountPolynomial::parse("v^3+5v^2+6v+1").unwrap()));
    }

    #[test]
    fn divisors() {
        let a2 = rs("A2");
        assert_eq!(orbit_divisor(&a2, &[0, 1], 4), Ok(16));
        let b2 = rs("B2");
        let set = [b2.index_of(&[1, 0]).unwrap(), b2.index_of(&[1, 2]).unwrap()];
        assert_eq!(orbit_divisor(&b2, &set, 4), Ok(8));
        assert_eq!(orbit_divisor(&b2, &set, 1), Ok(1));
        let dep = [0, 1, a2.index_of(&[1, 1]).unwrap()];
        assert!(matches!(orbit_divisor(&a2, &dep, 4), Err(CoeffError::Dependent(_))));
    }
}
