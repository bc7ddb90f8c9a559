use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Primes met in numerators or denominators of divided-out contents and of
/// constants assumed to be nonzero. Results are only certified away from them.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeLog {
    primes: BTreeSet<u64>,
    /// Cofactors too large to factor by trial division.
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    unfactored: BTreeSet<String>,
}

const TRIAL_LIMIT: u64 = 1 << 20;

impl PrimeLog {
    pub fn record_int(&mut self, n: &BigInt) {
        let mut n = n.abs();
        if n.is_zero() || n.is_one() {
            return;
        }
        let mut p = 2u64;
        while p < TRIAL_LIMIT {
            let pb = BigInt::from(p);
            if &pb * &pb > n {
                break;
            }
            if (&n % &pb).is_zero() {
                self.primes.insert(p);
                while (&n % &pb).is_zero() {
                    n /= &pb;
                }
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if !n.is_one() {
            match n.to_u64() {
                Some(v) => {
                    self.primes.insert(v);
                }
                None => {
                    self.unfactored.insert(n.to_string());
                }
            }
        }
    }

    pub fn record_rational(&mut self, c: &BigRational) {
        self.record_int(c.numer());
        self.record_int(c.denom());
    }

    pub fn insert(&mut self, p: u64) {
        self.primes.insert(p);
    }

    pub fn merge(&mut self, other: &PrimeLog) {
        self.primes.extend(other.primes.iter().copied());
        self.unfactored.extend(other.unfactored.iter().cloned());
    }

    pub fn contains(&self, p: u64) -> bool {
        self.primes.contains(&p)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes.iter().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty() && self.unfactored.is_empty()
    }

    /// Whether `p` might divide one of the recorded large cofactors.
    pub fn may_involve(&self, p: u64) -> bool {
        self.contains(p)
            || self
                .unfactored
                .iter()
                .any(|s| s.parse::<BigInt>().map_or(true, |n| (n % p).is_zero()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_and_merges() {
        let mut a = PrimeLog::default();
        a.record_int(&BigInt::from(-12));
        let mut b = PrimeLog::default();
        b.record_rational(&BigRational::new(5.into(), 9.into()));
        a.merge(&b);
        assert_eq!(a.primes().collect::<Vec<_>>(), vec![2, 3, 5]);
        let mut c = b.clone();
        c.merge(&a);
        assert_eq!(a, c);
    }
}
