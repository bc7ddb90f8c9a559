//! Point counts of families as exact polynomials in `v = q - 1`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Data from which the number of F_q-points of a good family is recovered:
/// `d` free coordinates, of which `n[j]` avoid exactly `j` nonzero values
/// besides zero.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GoodFamilyRecord {
    pub d: u32,
    pub n: BTreeMap<u32, u32>,
}

impl GoodFamilyRecord {
    pub fn new(d: u32, n: BTreeMap<u32, u32>) -> Self {
        debug_assert!(n.values().sum::<u32>() <= d);
        debug_assert!(n.keys().all(|&j| j > 0) && n.values().all(|&c| c > 0));
        GoodFamilyRecord { d, n }
    }

    /// Record from per-coordinate exclusion counts (0 = only zero excluded).
    pub fn from_exclusions(exclusions: &[u32]) -> Self {
        let mut n = BTreeMap::new();
        for &j in exclusions.iter().filter(|&&j| j > 0) {
            *n.entry(j).or_insert(0) += 1;
        }
        GoodFamilyRecord {
            d: exclusions.len() as u32,
            n,
        }
    }
}

/// Integer polynomial stored in both the `v` and the `q = v + 1` basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountPolynomial {
    coeffs_v: Vec<BigInt>,
    coeffs_q: Vec<BigInt>,
}

fn trim(mut c: Vec<BigInt>) -> Vec<BigInt> {
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    c
}

/// Coefficients of `p(x + shift)` given those of `p(x)`.
fn taylor_shift(c: &[BigInt], shift: i64) -> Vec<BigInt> {
    let mut out = c.to_vec();
    let s = BigInt::from(shift);
    let n = out.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let t = &out[j + 1] * &s;
            out[j] += t;
        }
    }
    out
}

impl CountPolynomial {
    pub fn zero() -> Self {
        CountPolynomial {
            coeffs_v: Vec::new(),
            coeffs_q: Vec::new(),
        }
    }

    pub fn from_v(coeffs: Vec<BigInt>) -> Self {
        let coeffs_v = trim(coeffs);
        let coeffs_q = trim(taylor_shift(&coeffs_v, -1));
        let p = CountPolynomial { coeffs_v, coeffs_q };
        debug_assert_eq!(trim(taylor_shift(&p.coeffs_q, 1)), p.coeffs_v);
        p
    }

    pub fn from_v_i64(coeffs: &[i64]) -> Self {
        Self::from_v(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn from_q(coeffs: Vec<BigInt>) -> Self {
        Self::from_v(taylor_shift(&trim(coeffs), 1))
    }

    pub fn coeffs_v(&self) -> &[BigInt] {
        &self.coeffs_v
    }

    pub fn coeffs_q(&self) -> &[BigInt] {
        &self.coeffs_q
    }

    pub fn coeff_v(&self, k: usize) -> BigInt {
        self.coeffs_v.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs_v.len().checked_sub(1)
    }

    pub fn add(&self, other: &CountPolynomial) -> CountPolynomial {
        let n = self.coeffs_v.len().max(other.coeffs_v.len());
        CountPolynomial::from_v((0..n).map(|k| self.coeff_v(k) + other.coeff_v(k)).collect())
    }

    pub fn mul(&self, other: &CountPolynomial) -> CountPolynomial {
        if self.coeffs_v.is_empty() || other.coeffs_v.is_empty() {
            return CountPolynomial::zero();
        }
        let mut c = vec![BigInt::zero(); self.coeffs_v.len() + other.coeffs_v.len() - 1];
        for (i, a) in self.coeffs_v.iter().enumerate() {
            for (j, b) in other.coeffs_v.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        CountPolynomial::from_v(c)
    }

    pub fn eval_v(&self, v: &BigInt) -> BigInt {
        self.coeffs_v.iter().rev().fold(BigInt::zero(), |acc, c| acc * v + c)
    }

    /// Value at a field size `q`.
    pub fn eval_q(&self, q: u64) -> BigInt {
        self.eval_v(&(BigInt::from(q) - 1))
    }

    pub fn nonnegative_v(&self) -> bool {
        self.coeffs_v.iter().all(|c| !c.is_negative())
    }

    fn render(coeffs: &[BigInt], var: &str) -> String {
        if coeffs.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, c) in coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push(if neg { '-' } else { '+' });
            }
            if k == 0 || !abs.is_one() {
                s.push_str(&abs.to_string());
            }
            match k {
                0 => {}
                1 => s.push_str(var),
                _ => s.push_str(&format!("{var}^{k}")),
            }
        }
        s
    }

    pub fn render_v(&self) -> String {
        Self::render(&self.coeffs_v, "v")
    }

    pub fn render_q(&self) -> String {
        Self::render(&self.coeffs_q, "q")
    }

    /// Parse `"v^3+5v^2+6v+1"` (or the same in `q`).
    pub fn parse(s: &str) -> Option<CountPolynomial> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let var = if s.contains('q') { 'q' } else { 'v' };
        if s == "0" {
            return Some(CountPolynomial::zero());
        }
        let mut coeffs: Vec<BigInt> = Vec::new();
        let mut terms = Vec::new();
        let mut cur = String::new();
        for ch in s.chars() {
            if (ch == '+' || ch == '-') && !cur.is_empty() {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        if !cur.is_empty() {
            terms.push(cur);
        }
        for t in terms {
            let (sign, body) = match t.strip_prefix('-') {
                Some(b) => (-1, b),
                None => (1, t.strip_prefix('+').unwrap_or(&t)),
            };
            let (c, k) = match body.find(var) {
                None => (body.parse::<BigInt>().ok()?, 0usize),
                Some(pos) => {
                    let c = if pos == 0 {
                        BigInt::one()
                    } else {
                        body[..pos].parse::<BigInt>().ok()?
                    };
                    let rest = &body[pos + 1..];
                    let k = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')?.parse().ok()?
                    };
                    (c, k)
                }
            };
            if coeffs.len() <= k {
                coeffs.resize(k + 1, BigInt::zero());
            }
            coeffs[k] += c * sign;
        }
        Some(if var == 'q' {
            CountPolynomial::from_q(coeffs)
        } else {
            CountPolynomial::from_v(coeffs)
        })
    }
}

impl fmt::Display for CountPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_v())
    }
}

/// `v^(d - sum n_j) * prod_j (v - j)^(n_j)`.
pub fn family_count(rec: &GoodFamilyRecord) -> CountPolynomial {
    let free = rec.d - rec.n.values().sum::<u32>();
    let mut coeffs = vec![BigInt::zero(); free as usize + 1];
    coeffs[free as usize] = BigInt::one();
    let mut p = CountPolynomial::from_v(coeffs);
    for (&j, &e) in &rec.n {
        let lin = CountPolynomial::from_v(vec![-BigInt::from(j), BigInt::one()]);
        for _ in 0..e {
            p = p.mul(&lin);
        }
    }
    p
}

pub fn aggregate<'a, I: IntoIterator<Item = &'a GoodFamilyRecord>>(records: I) -> CountPolynomial {
    records
        .into_iter()
        .fold(CountPolynomial::zero(), |acc, r| acc.add(&family_count(r)))
}

pub fn to_q_basis(p: &CountPolynomial) -> Vec<BigInt> {
    p.coeffs_q.clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(d: u32, n: &[(u32, u32)]) -> GoodFamilyRecord {
        GoodFamilyRecord::new(d, n.iter().copied().collect())
    }

    #[test]
    fn family_count_examples() {
        assert_eq!(family_count(&rec(2, &[])).render_v(), "v^2");
        assert_eq!(family_count(&rec(0, &[])).render_v(), "1");
        assert_eq!(family_count(&rec(3, &[(1, 1)])).render_v(), "v^3-v^2");
    }

    #[test]
    fn aggregate_examples() {
        assert_eq!(aggregate(&[rec(0, &[]), rec(1, &[])]).render_v(), "v+1");
        assert_eq!(aggregate(&[]).render_v(), "0");
        let a2 = [rec(0, &[]), rec(1, &[]), rec(1, &[]), rec(1, &[]), rec(2, &[])];
        assert_eq!(aggregate(&a2).render_v(), "v^2+3v+1");
    }

    #[test]
    fn q_basis_examples() {
        assert_eq!(CountPolynomial::from_v_i64(&[1, 1]).render_q(), "q");
        assert_eq!(CountPolynomial::from_v_i64(&[1, 3, 1]).render_q(), "q^2+q-1");
        assert_eq!(CountPolynomial::zero().render_q(), "0");
        assert_eq!(
            to_q_basis(&CountPolynomial::from_v_i64(&[1, 1])),
            vec![BigInt::zero(), BigInt::one()]
        );
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["v^3+5v^2+6v+1", "v^4+8v^3+16v^2+9v+1", "q^2+q-1", "-2v+3", "0"] {
            let p = CountPolynomial::parse(s).unwrap();
            if s.contains('q') {
                assert_eq!(p.render_q(), s);
            } else {
                assert_eq!(p.render_v(), s);
            }
        }
        assert_eq!(CountPolynomial::parse("v^2+3v+1").unwrap().eval_q(3), BigInt::from(11));
    }
}
