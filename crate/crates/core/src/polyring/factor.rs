//! Budgeted factorization over Q.
//!
//! Not a complete multivariate factorizer: it extracts contents, splits off
//! repeated factors through derivative gcds, finds rational roots of
//! univariate parts and factors quadratics with square discriminant. Pieces
//! it can neither split nor certify irreducible are returned as they are and
//! the result is flagged `unresolved`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::gcd::{content_in, gcd};
use super::{MPoly, Monomial, Var};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: BigRational,
    /// Primitive factors with multiplicities, sorted by the polynomial order.
    pub factors: Vec<(MPoly, u32)>,
    /// Some factor could be neither split nor certified irreducible.
    pub unresolved: bool,
}

impl Factorization {
    pub fn expand(&self) -> MPoly {
        self.factors
            .iter()
            .fold(MPoly::constant(self.unit.clone()), |acc, (f, e)| acc.mul(&f.pow(*e)))
    }

    /// Distinct non-monomial factors.
    pub fn nonmonomial(&self) -> impl Iterator<Item = &MPoly> {
        self.factors.iter().map(|(f, _)| f).filter(|f| !f.is_monomial())
    }
}

const DEFAULT_BUDGET: usize = 64;

pub fn factor_linearish(f: &MPoly) -> Factorization {
    factor_with_budget(f, DEFAULT_BUDGET)
}

pub fn factor_with_budget(f: &MPoly, budget: usize) -> Factorization {
    let (unit, p) = f.primitive();
    let mut out = Factorization {
        unit,
        factors: Vec::new(),
        unresolved: false,
    };
    if p.is_constant() {
        return out;
    }
    let m = p.monomial_content();
    for &(v, e) in m.pairs() {
        out.factors.push((MPoly::var(v), e));
    }
    let rest = p.div_monomial(&m).expect("monomial content divides");
    let mut budget = budget;
    let mut pieces: Vec<(MPoly, u32)> = Vec::new();
    let mut work = vec![(rest, 1u32)];
    while let Some((g, e)) = work.pop() {
        if g.is_constant() {
            continue;
        }
        if budget == 0 {
            out.unresolved = true;
            pieces.push((g, e));
            continue;
        }
        budget -= 1;
        match find_divisor(&g) {
            Some(h) => {
                let h = h.primitive_part();
                let q = g.try_div(&h).expect("found divisor divides").primitive_part();
                work.push((h, e));
                work.push((q, e));
            }
            None => {
                if !certified_irreducible(&g) {
                    out.unresolved = true;
                }
                pieces.push((g, e));
            }
        }
    }
    // Merge equal factors.
    for (g, e) in pieces {
        let g = g.primitive_part();
        match out.factors.iter_mut().find(|(h, _)| *h == g) {
            Some(slot) => slot.1 += e,
            None => out.factors.push((g, e)),
        }
    }
    out.factors.sort_by(|a, b| a.0.compare(&b.0));
    // Fix the unit so that the product is exact.
    let prod = out.factors.iter().fold(MPoly::one(), |acc, (f, e)| acc.mul(&f.pow(*e)));
    let lc = prod.leading_coeff();
    out.unit = f.leading_coeff() / lc;
    out
}

fn is_irreducible_linear(g: &MPoly) -> bool {
    g.linear_in().into_iter().any(|v| content_in(g, v).is_constant())
}

fn certified_irreducible(g: &MPoly) -> bool {
    if g.total_degree() <= 1 || is_irreducible_linear(g) {
        return true;
    }
    let vars = g.vars();
    if vars.len() == 1 {
        // No rational root was found, so degree 2 or 3 is irreducible.
        return g.total_degree() <= 3;
    }
    vars.into_iter()
        .any(|v| g.degree_in(v) == 2 && content_in(g, v).is_constant() && quadratic_split(g, v).is_none())
}

fn find_divisor(g: &MPoly) -> Option<MPoly> {
    let vars = g.vars();
    for &v in &vars {
        let c = content_in(g, v);
        if !c.is_constant() {
            return Some(c);
        }
    }
    if is_irreducible_linear(g) {
        return None;
    }
    for &v in &vars {
        let d = gcd(g, &g.derivative(v));
        if !d.is_constant() && d.total_degree() < g.total_degree() {
            return Some(d);
        }
    }
    if vars.len() == 1 {
        if let Some(h) = rational_root_factor(g, vars[0]) {
            return Some(h);
        }
    }
    for &v in &vars {
        if g.degree_in(v) == 2 {
            if let Some(h) = quadratic_split(g, v) {
                return Some(h);
            }
        }
    }
    None
}

fn small_divisors(n: &BigInt) -> Option<Vec<i64>> {
    let n = n.abs().to_i64()?;
    if n == 0 || n > 1_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    Some(out)
}

fn rational_root_factor(g: &MPoly, x: Var) -> Option<MPoly> {
    let coeffs = g.coefficients_in(x);
    let a0 = coeffs[0].constant_value()?;
    let ad = coeffs.last()?.constant_value()?;
    if a0.is_zero() {
        return Some(MPoly::var(x));
    }
    // g is integer primitive, so these are integers.
    let ps = small_divisors(&a0.to_integer())?;
    let qs = small_divisors(&ad.to_integer())?;
    for &q in &qs {
        for &p in &ps {
            for sign in [1i64, -1] {
                let root = BigRational::new(BigInt::from(sign * p), BigInt::from(q));
                let val = coeffs.iter().rev().fold(BigRational::zero(), |acc, c| {
                    acc * &root + c.constant_value().expect("univariate")
                });
                if val.is_zero() {
                    let lin = MPoly::var(x)
                        .scale(&BigRational::from_integer(root.denom().clone()))
                        .sub(&MPoly::constant(BigRational::from_integer(root.numer().clone())));
                    return Some(lin);
                }
            }
        }
    }
    None
}

/// A nontrivial factor of `g = a v^2 + b v + c` when the discriminant is a square.
fn quadratic_split(g: &MPoly, v: Var) -> Option<MPoly> {
    let co = g.coefficients_in(v);
    if co.len() != 3 {
        return None;
    }
    let (c, b, a) = (&co[0], &co[1], &co[2]);
    let disc = b.mul(b).sub(&a.mul(c).scale(&BigRational::from_integer(4.into())));
    let s = poly_sqrt(&disc)?;
    let two_a = a.scale(&BigRational::from_integer(2.into()));
    let cand = two_a.mul(&MPoly::var(v)).add(b).sub(&s);
    let h = gcd(g, &cand);
    if h.is_constant() || h.total_degree() >= g.total_degree() {
        return None;
    }
    Some(h)
}

fn rational_sqrt(c: &BigRational) -> Option<BigRational> {
    if c.is_negative() {
        return None;
    }
    let n = c.numer().sqrt();
    let d = c.denom().sqrt();
    if &(&n * &n) == c.numer() && &(&d * &d) == c.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Exact square root of a polynomial, if it has one.
pub fn poly_sqrt(f: &MPoly) -> Option<MPoly> {
    if f.is_zero() {
        return Some(MPoly::zero());
    }
    let (lm, lc) = f.leading()?;
    let half: Vec<(Var, u32)> = lm
        .pairs()
        .iter()
        .map(|&(v, e)| if e % 2 == 0 { Some((v, e / 2)) } else { None })
        .collect::<Option<_>>()?;
    let lead = MPoly::monomial(Monomial::from_pairs(half), rational_sqrt(lc)?);
    let (lead_m, lead_c) = lead.leading().map(|(m, c)| (m.clone(), c.clone()))?;
    let two_lead_c = lead_c * BigRational::from_integer(2.into());
    let mut s = lead;
    for _ in 0..=f.num_terms() {
        let r = f.sub(&s.mul(&s));
        if r.is_zero() {
            return Some(s);
        }
        let (rm, rc) = r.leading()?;
        let qm = rm.div(&lead_m)?;
        if qm >= lead_m {
            return None;
        }
        s = s.add(&MPoly::monomial(qm, rc / &two_lead_c));
    }
    None
}
