//! Rows of the linear system cutting out the centralizer of `x_c(t)` modulo
//! `m_i`, and their fraction-free reduction against earlier pivots.

use crate::polyring::{gcd, MPoly, PrimeLog, Var};
use crate::root_system::RootSystem;
use num_rational::BigRational;
use num_traits::One;

/// A coefficient of `x_c(t)`: a quotient of polynomials in the free
/// indeterminates whose denominator never vanishes on the family.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coordinate {
    pub num: MPoly,
    pub den: MPoly,
}

impl Coordinate {
    pub fn zero() -> Self {
        Coordinate {
            num: MPoly::zero(),
            den: MPoly::one(),
        }
    }

    pub fn one() -> Self {
        Coordinate {
            num: MPoly::one(),
            den: MPoly::one(),
        }
    }

    pub fn var(v: Var) -> Self {
        Coordinate {
            num: MPoly::var(v),
            den: MPoly::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Apply `v := num/den` and cancel common factors.
    pub fn substitute(&self, v: Var, num: &MPoly, den: &MPoly) -> Coordinate {
        if !self.num.contains_var(v) && !self.den.contains_var(v) {
            return self.clone();
        }
        let dn = self.num.degree_in(v);
        let dd = self.den.degree_in(v);
        let mut n = self.num.substitute(v, num, den);
        let mut d = self.den.substitute(v, num, den);
        if dd >= dn {
            n = n.mul(&den.pow(dd - dn));
        } else {
            d = d.mul(&den.pow(dn - dd));
        }
        Coordinate::reduced(n, d)
    }

    pub fn reduced(num: MPoly, den: MPoly) -> Coordinate {
        if num.is_zero() {
            return Coordinate::zero();
        }
        let g = gcd(&num, &den);
        let mut n = num.try_div(&g).expect("gcd divides");
        let mut d = den.try_div(&g).expect("gcd divides");
        let lc = d.leading_coeff();
        if !lc.is_one() {
            let inv = lc.recip();
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        Coordinate { num: n, den: d }
    }

    pub fn to_text(&self) -> String {
        if self.den == MPoly::one() {
            self.num.to_string()
        } else {
            format!("({})/({})", self.num, self.den)
        }
    }
}

/// Row `j` of `(P_{jk}(t))_k`: entry `k` is the coefficient of `e_{beta_j}`
/// in `[x_c(t), e_{beta_k}]`, scaled by a common denominator so that every
/// entry is a polynomial.
pub fn p_row(rs: &RootSystem, coords: &[Coordinate], j: usize) -> Vec<MPoly> {
    let n = rs.num_positive();
    let mut parts: Vec<Option<(i64, &Coordinate)>> = vec![None; n];
    for (m, a) in coords.iter().enumerate().take(j) {
        if a.is_zero() {
            continue;
        }
        for (k, slot) in parts.iter_mut().enumerate() {
            if rs.sum_index(m, k) == Some(j) {
                *slot = Some((rs.structure_constant(m, k), a));
            }
        }
    }
    // Common denominator.
    let mut den = MPoly::one();
    for (_, a) in parts.iter().flatten() {
        if !a.den.is_constant() {
            let g = gcd(&den, &a.den);
            den = den.mul(&a.den.try_div(&g).expect("gcd divides"));
        }
    }
    parts
        .iter()
        .map(|p| match p {
            None => MPoly::zero(),
            Some((c, a)) => {
                let scale = den.try_div(&a.den).expect("common denominator");
                a.num.mul(&scale).scale(&BigRational::from_integer((*c).into()))
            }
        })
        .collect()
}

/// Divide a row by its rational content, logging the primes involved.
pub fn normalize_row(row: &mut [MPoly], log: &mut PrimeLog) {
    let mut content: Option<BigRational> = None;
    for e in row.iter().filter(|e| !e.is_zero()) {
        let c = e.content();
        content = Some(match content {
            None => c,
            Some(acc) => rational_gcd(&acc, &c),
        });
    }
    if let Some(c) = content {
        if !c.is_one() {
            log.record_rational(&c);
            let inv = c.recip();
            for e in row.iter_mut() {
                *e = e.scale(&inv);
            }
        }
    }
}

fn rational_gcd(a: &BigRational, b: &BigRational) -> BigRational {
    use num_integer::Integer;
    BigRational::new(a.numer().gcd(b.numer()), a.denom().lcm(b.denom()))
}

/// The reduced matrix `Q(t)` together with its pivot list.
#[derive(Debug, Clone, Default)]
pub struct CentralizerMatrix {
    pub rows: Vec<Vec<MPoly>>,
    /// Pivot column of each row; `None` for rows that vanish on the family.
    pub pivots: Vec<Option<usize>>,
}

impl CentralizerMatrix {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Eliminate the pivot columns from `row`, in pivot order, with
    /// `Q_i := Q_i * Q_{j,p}/g - Q_j * Q_{i,p}/g` where `g = gcd(Q_{i,p}, Q_{j,p})`.
    pub fn reduce(&self, mut row: Vec<MPoly>, log: &mut PrimeLog) -> Vec<MPoly> {
        for (prow, pivot) in self.rows.iter().zip(&self.pivots) {
            let Some(p) = *pivot else { continue };
            if row[p].is_zero() {
                continue;
            }
            let a = &prow[p];
            let b = &row[p];
            let g = gcd(a, b);
            let fa = a.try_div(&g).expect("gcd divides");
            let fb = b.try_div(&g).expect("gcd divides");
            row = row.iter().zip(prow).map(|(x, y)| x.mul(&fa).sub(&y.mul(&fb))).collect();
            debug_assert!(row[p].is_zero());
        }
        normalize_row(&mut row, log);
        row
    }

    pub fn push(&mut self, row: Vec<MPoly>, pivot: Option<usize>) {
        self.rows.push(row);
        self.pivots.push(pivot);
    }

    /// Apply `v := num/den` to every row, clearing denominators row by row.
    pub fn substitute(&mut self, v: Var, num: &MPoly, den: &MPoly, log: &mut PrimeLog) {
        for row in self.rows.iter_mut() {
            substitute_row(row, v, num, den, log);
        }
    }

    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (row, p) in self.rows.iter().zip(&self.pivots) {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            let piv = p.map_or("-".to_string(), |c| (c + 1).to_string());
            s.push_str(&format!("[{}] pivot {}\n", cells.join(", "), piv));
        }
        s
    }
}

pub fn substitute_row(row: &mut [MPoly], v: Var, num: &MPoly, den: &MPoly, log: &mut PrimeLog) {
    let dmax = row.iter().map(|e| e.degree_in(v)).max().unwrap_or(0);
    if dmax == 0 {
        return;
    }
    log.record_rational(&den.content());
    for e in row.iter_mut() {
        let d = e.degree_in(v);
        let s = e.substitute(v, num, den);
        *e = if d < dmax { s.mul(&den.pow(dmax - d)) } else { s };
    }
    normalize_row(row, log);
}
