//! Sparse multivariate polynomials over the rationals.
//!
//! Terms are kept in a `BTreeMap` under graded lexicographic order, so the
//! leading term is the last entry. Indeterminates are small integers; the
//! ones at or above [`Z_BASE`] are auxiliary coordinates introduced by
//! linear changes of variables and render as `z1, z2, ...`.

mod factor;
mod gcd;
mod primes;

pub use factor::{factor_linearish, factor_with_budget, poly_sqrt, Factorization};
pub use gcd::{content_in, gcd, gcd_many};
pub use primes::PrimeLog;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Var = u16;

/// Indeterminates at or above this index are auxiliary `z` coordinates.
pub const Z_BASE: Var = 1024;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("exact division failed: {divisor} does not divide {dividend}")]
    NotDivisible { dividend: String, divisor: String },
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

/// Exponent vector stored sparsely as `(variable, exponent)` pairs sorted by variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(Var, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_unstable();
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn pairs(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == v {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v, e - f)),
                }
            } else {
                out.push((v, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Componentwise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::new();
        for &(v, e) in &self.0 {
            let f = other.exponent(v);
            if f > 0 {
                out.push((v, e.min(f)));
            }
        }
        Monomial(out)
    }

    fn without(&self, v: Var) -> Monomial {
        Monomial(self.0.iter().copied().filter(|&(w, _)| w != v).collect())
    }
}

impl Ord for Monomial {
    /// Graded lexicographic with lower-numbered variables ranking higher.
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.degree().cmp(&other.degree());
        if d != Ordering::Equal {
            return d;
        }
        let (a, b) = (&self.0, &other.0);
        for k in 0..a.len().max(b.len()) {
            match (a.get(k), b.get(k)) {
                (Some(x), Some(y)) => {
                    if x.0 != y.0 {
                        return if x.0 < y.0 { Ordering::Greater } else { Ordering::Less };
                    }
                    if x.1 != y.1 {
                        return x.1.cmp(&y.1);
                    }
                }
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (None, None) => break,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn var_name(v: Var) -> String {
    if v >= Z_BASE {
        format!("z{}", v - Z_BASE + 1)
    } else {
        format!("t{}", v + 1)
    }
}

/// A polynomial with rational coefficients; no zero coefficient is ever stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({self})")
    }
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one() -> Self {
        MPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        MPoly { terms }
    }

    pub fn int(c: i64) -> Self {
        MPoly::constant(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn var(v: Var) -> Self {
        MPoly::monomial(Monomial::var(v), BigRational::one())
    }

    pub fn monomial(m: Monomial, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigRational)>>(it: I) -> Self {
        let mut p = MPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_zero() {
            Some(BigRational::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    /// A single term (constant times a product of indeterminates).
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut out: Vec<Var> = self
            .terms
            .keys()
            .flat_map(|m| m.pairs().iter().map(|&(v, _)| v))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> MPoly {
        let mut base = self.clone();
        let mut acc = MPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Quotient when `divisor` divides `self` exactly; `None` otherwise.
    pub fn try_div(&self, divisor: &MPoly) -> Option<MPoly> {
        let (lm, lc) = divisor.leading()?;
        let mut rem = self.clone();
        let mut quot = MPoly::zero();
        while let Some((m, c)) = rem.leading() {
            let qm = m.div(lm)?;
            let qc = c / lc;
            let t = MPoly::monomial(qm, qc);
            rem = rem.sub(&t.mul(divisor));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    pub fn divides(&self, other: &MPoly) -> bool {
        !self.is_zero() && other.try_div(self).is_some()
    }

    /// Exact division, logging the primes of the divisor's content.
    pub fn exact_divide(&self, divisor: &MPoly, log: &mut PrimeLog) -> Result<MPoly, PolyError> {
        if divisor.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let q = self.try_div(divisor).ok_or_else(|| PolyError::NotDivisible {
            dividend: self.to_string(),
            divisor: divisor.to_string(),
        })?;
        log.record_rational(&divisor.content());
        Ok(q)
    }

    /// Rational content: gcd of numerators over lcm of denominators (positive).
    pub fn content(&self) -> BigRational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return BigRational::zero();
        }
        BigRational::new(num, den)
    }

    /// Split into `(unit, primitive)` with integer coprime coefficients and
    /// positive leading coefficient; `self == unit * primitive`.
    pub fn primitive(&self) -> (BigRational, MPoly) {
        if self.is_zero() {
            return (BigRational::one(), MPoly::zero());
        }
        let mut c = self.content();
        if self.leading_coeff().is_negative() {
            c = -c;
        }
        let inv = c.recip();
        (c, self.scale(&inv))
    }

    pub fn primitive_part(&self) -> MPoly {
        self.primitive().1
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        it.fold(first.clone(), |g, m| g.gcd(m))
    }

    pub fn div_monomial(&self, m: &Monomial) -> Option<MPoly> {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            terms.insert(k.div(m)?, c.clone());
        }
        Some(MPoly { terms })
    }

    pub fn derivative(&self, v: Var) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let pairs: Vec<(Var, u32)> = m
                .pairs()
                .iter()
                .map(|&(w, f)| if w == v { (w, f - 1) } else { (w, f) })
                .collect();
            out.add_term(
                Monomial::from_pairs(pairs),
                c * BigRational::from_integer(BigInt::from(e)),
            );
        }
        out
    }

    /// Coefficients of `self` viewed as a polynomial in `v`, indexed by degree.
    pub fn coefficients_in(&self, v: Var) -> Vec<MPoly> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![MPoly::zero(); d + 1];
        for (m, c) in &self.terms {
            let e = m.exponent(v) as usize;
            out[e].add_term(m.without(v), c.clone());
        }
        out
    }

    pub fn coefficient_in(&self, v: Var, deg: u32) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            if m.exponent(v) == deg {
                out.add_term(m.without(v), c.clone());
            }
        }
        out
    }

    /// Indeterminates in which `self` has degree exactly one.
    pub fn linear_in(&self) -> Vec<Var> {
        self.vars().into_iter().filter(|&v| self.degree_in(v) == 1).collect()
    }

    /// `(h1, h0)` with `self = h1 * v + h0` when `self` is linear in `v`.
    pub fn split_linear(&self, v: Var) -> Option<(MPoly, MPoly)> {
        if self.degree_in(v) != 1 {
            return None;
        }
        Some((self.coefficient_in(v, 1), self.coefficient_in(v, 0)))
    }

    /// `den^deg_v(self) * self(v := num/den)`.
    pub fn substitute(&self, v: Var, num: &MPoly, den: &MPoly) -> MPoly {
        let d = self.degree_in(v);
        if d == 0 {
            return self.clone();
        }
        let coeffs = self.coefficients_in(v);
        let mut num_pows = vec![MPoly::one()];
        let mut den_pows = vec![MPoly::one()];
        for k in 1..=d as usize {
            num_pows.push(num_pows[k - 1].mul(num));
            den_pows.push(den_pows[k - 1].mul(den));
        }
        let mut out = MPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out = out.add(&c.mul(&num_pows[k]).mul(&den_pows[d as usize - k]));
        }
        out
    }

    /// Substitution that also logs the primes of the denominator's content.
    pub fn substitute_logged(&self, v: Var, num: &MPoly, den: &MPoly, log: &mut PrimeLog) -> MPoly {
        if self.contains_var(v) {
            log.record_rational(&den.content());
        }
        self.substitute(v, num, den)
    }

    /// Replace indeterminate `v` by the polynomial `value`.
    pub fn compose(&self, v: Var, value: &MPoly) -> MPoly {
        self.substitute(v, value, &MPoly::one())
    }

    pub fn rename(&self, from: Var, to: Var) -> MPoly {
        self.compose(from, &MPoly::var(to))
    }

    /// Evaluate over Z/p given values for every indeterminate occurring.
    /// Returns `None` if a coefficient denominator vanishes mod p.
    pub fn eval_mod(&self, p: u64, value: impl Fn(Var) -> u64) -> Option<u64> {
        let pb = BigInt::from(p);
        let mut acc: u64 = 0;
        for (m, c) in &self.terms {
            let num = c.numer().mod_floor(&pb).to_u64().unwrap();
            let den = c.denom().mod_floor(&pb).to_u64().unwrap();
            if den == 0 {
                return None;
            }
            let mut t = num * inv_mod(den, p) % p;
            for &(v, e) in m.pairs() {
                t = t * pow_mod(value(v) % p, e as u64, p) % p;
            }
            acc = (acc + t) % p;
        }
        Some(acc)
    }

    /// Total order: term count, total degree, |leading coefficient|, then terms.
    pub fn compare(&self, other: &MPoly) -> Ordering {
        self.num_terms()
            .cmp(&other.num_terms())
            .then_with(|| self.total_degree().cmp(&other.total_degree()))
            .then_with(|| self.leading_coeff().abs().cmp(&other.leading_coeff().abs()))
            .then_with(|| {
                for ((m1, c1), (m2, c2)) in self.terms.iter().rev().zip(other.terms.iter().rev()) {
                    let o = m1.cmp(m2).then_with(|| c1.cmp(c2));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            })
    }
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn fmt_coeff(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("({})", c)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else if neg {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                f.write_str(&fmt_coeff(&abs))?;
                continue;
            }
            if !abs.is_one() {
                f.write_str(&fmt_coeff(&abs))?;
            }
            for &(v, e) in m.pairs() {
                f.write_str(&var_name(v))?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(i: Var) -> MPoly {
        MPoly::var(i)
    }

    fn c(v: i64) -> MPoly {
        MPoly::int(v)
    }

    #[test]
    fn ring_examples() {
        let f = t(0).add(&c(1)).mul(&t(0).sub(&c(1)));
        assert_eq!(f, t(0).mul(&t(0)).sub(&c(1)));
        let mut log = PrimeLog::default();
        let q = f.exact_divide(&t(0).sub(&c(1)), &mut log).unwrap();
        assert_eq!(q, t(0).add(&c(1)));
        let q = t(0)
            .scale(&BigRational::from_integer(2.into()))
            .exact_divide(&c(2), &mut log)
            .unwrap();
        assert_eq!(q, t(0));
        assert!(log.contains(2));
        assert!(f.exact_divide(&t(1), &mut log).is_err());
    }

    #[test]
    fn rendering() {
        let f = c(2).mul(&t(0).pow(2)).mul(&t(1)).sub(&t(2)).add(&c(1));
        assert_eq!(f.to_string(), "2t1^2t2 - t3 + 1");
        assert_eq!(t(0).neg().to_string(), "-t1");
        assert_eq!(MPoly::var(Z_BASE + 1).to_string(), "z2");
        assert_eq!(MPoly::zero().to_string(), "0");
    }

    #[test]
    fn linearity() {
        assert_eq!(t(0).mul(&t(1)).add(&t(2)).linear_in(), vec![0, 1, 2]);
        assert_eq!(t(0).pow(2).add(&t(1)).linear_in(), vec![1]);
        let f = t(0).add(&t(1)).pow(2).add(&t(0));
        assert!(f.linear_in().is_empty());
    }

    #[test]
    fn substitution_examples() {
        let f = t(0).mul(&t(1)).add(&c(1));
        assert_eq!(f.substitute(1, &c(1), &t(0)), c(2).mul(&t(0)));
        let f = t(1).pow(2).add(&t(0));
        assert_eq!(f.substitute(1, &t(2), &c(1)), t(2).pow(2).add(&t(0)));
        let f = t(1).add(&t(0));
        assert!(f.substitute(1, &t(0).neg(), &c(1)).is_zero());
    }

    #[test]
    fn compare_examples() {
        assert_eq!(t(0).compare(&t(0).add(&t(1))), Ordering::Less);
        assert_eq!(t(0).pow(2).compare(&t(1)), Ordering::Greater);
        assert_eq!(t(0).compare(&t(0)), Ordering::Equal);
    }

    #[test]
    fn grlex_order() {
        let a = Monomial::from_pairs(vec![(0, 1)]);
        let b = Monomial::from_pairs(vec![(1, 1)]);
        let ab = Monomial::from_pairs(vec![(0, 1), (1, 1)]);
        let b2 = Monomial::from_pairs(vec![(1, 2)]);
        assert!(a > b);
        assert!(ab > a);
        assert!(ab > b2);
        assert!(Monomial::from_pairs(vec![(0, 2)]) > ab);
    }

    #[test]
    fn eval_mod_handles_denominators() {
        let half = BigRational::new(1.into(), 2.into());
        let f = t(0).scale(&half).add(&c(1));
        assert_eq!(f.eval_mod(5, |_| 4), Some(3));
        assert_eq!(f.eval_mod(2, |_| 1), None);
    }
}
