//! Irreducible reduced root systems of rank at most 8, with a fixed
//! height-compatible enumeration of the positive roots and the structure
//! constants of a Chevalley basis.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_RANK: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RootSystemError {
    #[error("unknown root system series '{0}'")]
    UnknownSeries(String),
    #[error("invalid root system type {series}{rank}: {reason}")]
    InvalidRank {
        series: Series,
        rank: usize,
        reason: &'static str,
    },
    #[error("cannot parse root system type '{0}' (expected e.g. \"B3\")")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Series::A => "A",
            Series::B => "B",
            Series::C => "C",
            Series::D => "D",
            Series::E => "E",
            Series::F => "F",
            Series::G => "G",
        };
        f.write_str(s)
    }
}

impl FromStr for Series {
    type Err = RootSystemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(Series::A),
            "B" => Ok(Series::B),
            "C" => Ok(Series::C),
            "D" => Ok(Series::D),
            "E" => Ok(Series::E),
            "F" => Ok(Series::F),
            "G" => Ok(Series::G),
            _ => Err(RootSystemError::UnknownSeries(s.to_string())),
        }
    }
}

/// A root system type such as `B3` or `G2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CartanType {
    pub series: Series,
    pub rank: usize,
}

impl CartanType {
    pub fn new(series: Series, rank: usize) -> Result<Self, RootSystemError> {
        let invalid = |reason| RootSystemError::InvalidRank { series, rank, reason };
        if rank == 0 || rank > MAX_RANK {
            return Err(invalid("rank must be between 1 and 8"));
        }
        match series {
            Series::A => {}
            Series::B | Series::C if rank < 2 => return Err(invalid("needs rank >= 2")),
            Series::D if rank < 4 => return Err(invalid("needs rank >= 4")),
            Series::E if !(6..=8).contains(&rank) => return Err(invalid("needs rank 6, 7 or 8")),
            Series::F if rank != 4 => return Err(invalid("only F4 exists")),
            Series::G if rank != 2 => return Err(invalid("only G2 exists")),
            _ => {}
        }
        Ok(CartanType { series, rank })
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = RootSystemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut chars = s.chars();
        let head = chars.next().ok_or_else(|| RootSystemError::Parse(s.to_string()))?;
        let series: Series = head.to_string().parse()?;
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| RootSystemError::Parse(s.to_string()))?;
        CartanType::new(series, rank)
    }
}

/// A positive root in simple-root coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Root {
    pub coeffs: Vec<i32>,
    pub height: u32,
    /// Zero-based position in the enumeration.
    pub index: usize,
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    pub cartan_type: CartanType,
    /// Gram matrix of the simple roots (short roots have squared length 2).
    pub gram: Vec<Vec<i64>>,
    pub cartan: Vec<Vec<i64>>,
    pub positive_roots: Vec<Root>,
    pub bad_primes: Vec<u64>,
    lookup: HashMap<Vec<i32>, usize>,
    /// `structure[i][j]` is N_{beta_i, beta_j}; zero when the sum is not a root.
    structure: Vec<Vec<i64>>,
    /// `sum_index[i][j]` is the index of beta_i + beta_j when it is a positive root.
    sum_index: Vec<Vec<Option<usize>>>,
}

fn gram_matrix(ct: CartanType) -> Vec<Vec<i64>> {
    let r = ct.rank;
    let mut g = vec![vec![0i64; r]; r];
    let link = |g: &mut Vec<Vec<i64>>, i: usize, j: usize, v: i64| {
        g[i][j] = v;
        g[j][i] = v;
    };
    match ct.series {
        Series::A => {
            for i in 0..r {
                g[i][i] = 2;
            }
            for i in 0..r.saturating_sub(1) {
                link(&mut g, i, i + 1, -1);
            }
        }
        Series::B => {
            for i in 0..r - 1 {
                g[i][i] = 4;
            }
            g[r - 1][r - 1] = 2;
            for i in 0..r - 1 {
                link(&mut g, i, i + 1, -2);
            }
        }
        Series::C => {
            for i in 0..r - 1 {
                g[i][i] = 2;
            }
            g[r - 1][r - 1] = 4;
            for i in 0..r - 2 {
                link(&mut g, i, i + 1, -1);
            }
            link(&mut g, r - 2, r - 1, -2);
        }
        Series::D => {
            for i in 0..r {
                g[i][i] = 2;
            }
            for i in 0..r - 2 {
                link(&mut g, i, i + 1, -1);
            }
            link(&mut g, r - 3, r - 1, -1);
        }
        Series::E => {
            for i in 0..r {
                g[i][i] = 2;
            }
            // Bourbaki: 1-3-4-5-6(-7-8), 2-4
            link(&mut g, 0, 2, -1);
            link(&mut g, 1, 3, -1);
            for i in 2..r - 1 {
                link(&mut g, i, i + 1, -1);
            }
        }
        Series::F => {
            g[0][0] = 4;
            g[1][1] = 4;
            g[2][2] = 2;
            g[3][3] = 2;
            link(&mut g, 0, 1, -2);
            link(&mut g, 1, 2, -2);
            link(&mut g, 2, 3, -1);
        }
        Series::G => {
            g[0][0] = 2;
            g[1][1] = 6;
            link(&mut g, 0, 1, -3);
        }
    }
    g
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl RootSystem {
    pub fn build(series: Series, rank: usize) -> Result<Self, RootSystemError> {
        Ok(Self::from_type(CartanType::new(series, rank)?))
    }

    pub fn from_type(ct: CartanType) -> Self {
        let r = ct.rank;
        let gram = gram_matrix(ct);
        let cartan: Vec<Vec<i64>> = (0..r)
            .map(|i| (0..r).map(|j| 2 * gram[i][j] / gram[j][j]).collect())
            .collect();

        // Generate positive roots layer by layer using simple-root strings.
        let mut roots: Vec<Vec<i32>> = (0..r)
            .map(|i| {
                let mut v = vec![0; r];
                v[i] = 1;
                v
            })
            .collect();
        let mut known: HashMap<Vec<i32>, ()> = roots.iter().map(|v| (v.clone(), ())).collect();
        let mut layer = roots.clone();
        while !layer.is_empty() {
            let mut next = Vec::new();
            for beta in &layer {
                for i in 0..r {
                    let mut down = beta.clone();
                    let mut p = 0i64;
                    loop {
                        down[i] -= 1;
                        if known.contains_key(&down) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let pairing: i64 = (0..r).map(|j| beta[j] as i64 * gram[j][i]).sum();
                    let q = p - 2 * pairing / gram[i][i];
                    if q > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if !known.contains_key(&up) {
                            known.insert(up.clone(), ());
                            next.push(up);
                        }
                    }
                }
            }
            roots.extend(next.iter().cloned());
            layer = next;
        }

        let height = |v: &Vec<i32>| v.iter().sum::<i32>() as u32;
        // Height first, then descending lexicographic order on coefficients.
        roots.sort_by(|a, b| height(a).cmp(&height(b)).then_with(|| b.cmp(a)));
        let positive_roots: Vec<Root> = roots
            .iter()
            .enumerate()
            .map(|(index, c)| Root {
                coeffs: c.clone(),
                height: height(c),
                index,
            })
            .collect();
        let lookup: HashMap<Vec<i32>, usize> = roots.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();

        let highest = &positive_roots.last().expect("nonempty").coeffs;
        let mut bad: Vec<u64> = highest.iter().flat_map(|&c| prime_factors(c as u64)).collect();
        bad.sort_unstable();
        bad.dedup();

        let n = positive_roots.len();
        let mut sum_index = vec![vec![None; n]; n];
        for i in 0..n {
            for j in 0..n {
                let s: Vec<i32> = roots[i].iter().zip(&roots[j]).map(|(a, b)| a + b).collect();
                sum_index[i][j] = lookup.get(&s).copied();
            }
        }

        let mut rs = RootSystem {
            cartan_type: ct,
            gram,
            cartan,
            positive_roots,
            bad_primes: bad,
            lookup,
            structure: vec![vec![0; n]; n],
            sum_index,
        };
        rs.compute_structure_constants();
        rs
    }

    pub fn rank(&self) -> usize {
        self.cartan_type.rank
    }

    pub fn num_positive(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn root(&self, i: usize) -> &Root {
        &self.positive_roots[i]
    }

    pub fn highest_root(&self) -> &Root {
        self.positive_roots.last().expect("nonempty")
    }

    pub fn index_of(&self, coeffs: &[i32]) -> Option<usize> {
        self.lookup.get(coeffs).copied()
    }

    /// True when `v` is the coefficient vector of a positive or negative root.
    pub fn is_root(&self, v: &[i32]) -> bool {
        if v.len() != self.rank() {
            return false;
        }
        if self.lookup.contains_key(v) {
            return true;
        }
        let neg: Vec<i32> = v.iter().map(|x| -x).collect();
        self.lookup.contains_key(&neg)
    }

    pub fn sum_index(&self, i: usize, j: usize) -> Option<usize> {
        self.sum_index[i][j]
    }

    /// N_{beta_i, beta_j} with `[e_i, e_j] = N e_{i+j}`.
    pub fn structure_constant(&self, i: usize, j: usize) -> i64 {
        self.structure[i][j]
    }

    pub fn inner(&self, u: &[i32], v: &[i32]) -> i64 {
        let r = self.rank();
        let mut s = 0;
        for a in 0..r {
            if u[a] == 0 {
                continue;
            }
            for b in 0..r {
                s += u[a] as i64 * v[b] as i64 * self.gram[a][b];
            }
        }
        s
    }

    /// Largest p with `v - p*u` a root (u, v roots).
    pub fn string_down(&self, u: &[i32], v: &[i32]) -> i64 {
        let mut p = 0;
        let mut w: Vec<i32> = v.to_vec();
        loop {
            for (a, b) in w.iter_mut().zip(u) {
                *a -= b;
            }
            if self.is_root(&w) {
                p += 1;
            } else {
                return p;
            }
        }
    }

    fn signed(&self, r: Signed) -> Vec<i32> {
        let c = &self.positive_roots[r.index].coeffs;
        if r.positive {
            c.clone()
        } else {
            c.iter().map(|x| -x).collect()
        }
    }

    fn as_signed(&self, v: &[i32]) -> Option<Signed> {
        if let Some(&i) = self.lookup.get(v) {
            return Some(Signed {
                index: i,
                positive: true,
            });
        }
        let neg: Vec<i32> = v.iter().map(|x| -x).collect();
        self.lookup.get(&neg).map(|&i| Signed {
            index: i,
            positive: false,
        })
    }

    /// Structure constant for arbitrary roots, reduced to the positive table
    /// through the standard Chevalley basis identities. Only valid for pairs
    /// whose reduction lands on already-computed entries.
    fn signed_constant(&self, r: Signed, s: Signed) -> i64 {
        let rv = self.signed(r);
        let sv = self.signed(s);
        let uv: Vec<i32> = rv.iter().zip(&sv).map(|(a, b)| a + b).collect();
        let Some(u) = self.as_signed(&uv) else {
            return 0;
        };
        match (r.positive, s.positive) {
            (true, true) => self.structure[r.index][s.index],
            (false, false) => -self.structure[r.index][s.index],
            (false, true) => -self.signed_constant(s, r),
            (true, false) => {
                let t = Signed {
                    index: u.index,
                    positive: !u.positive,
                };
                let tt = self.inner(&self.signed(t), &self.signed(t));
                if u.positive {
                    // s, t negative with -s - t = r.
                    let rr = self.inner(&rv, &rv);
                    let val = -self.structure[s.index][t.index] * tt;
                    debug_assert_eq!(val % rr, 0);
                    val / rr
                } else {
                    // t positive with t + r = -s.
                    let ss = self.inner(&sv, &sv);
                    let val = self.structure[t.index][r.index] * tt;
                    debug_assert_eq!(val % ss, 0);
                    val / ss
                }
            }
        }
    }

    fn compute_structure_constants(&mut self) {
        let n = self.num_positive();
        // Extraspecial pair of each non-simple root: the special pair (a, b),
        // a < b, with the smallest a.
        let mut extraspecial: Vec<Option<(usize, usize)>> = vec![None; n];
        for a in 0..n {
            for b in a + 1..n {
                if let Some(s) = self.sum_index[a][b] {
                    if extraspecial[s].is_none() {
                        extraspecial[s] = Some((a, b));
                    }
                }
            }
        }
        let mut pairs: Vec<(usize, usize, usize)> = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if let Some(s) = self.sum_index[a][b] {
                    pairs.push((a, b, s));
                }
            }
        }
        pairs.sort_by_key(|&(a, b, s)| (self.positive_roots[s].height, s, a, b));

        for (a, b, s) in pairs {
            let (g, d) = extraspecial[s].expect("sum has an extraspecial pair");
            let av = self.positive_roots[a].coeffs.clone();
            let bv = self.positive_roots[b].coeffs.clone();
            let value = if (a, b) == (g, d) {
                self.string_down(&av, &bv) + 1
            } else {
                let pos = |i| Signed {
                    index: i,
                    positive: true,
                };
                let neg = |i| Signed {
                    index: i,
                    positive: false,
                };
                let gv = &self.positive_roots[g].coeffs;
                let xi = &self.positive_roots[s].coeffs;
                let sq = |v: &[i32]| self.inner(v, v);
                let diff = |x: &[i32], y: &[i32]| -> Vec<i32> { x.iter().zip(y).map(|(p, q)| p - q).collect() };
                let n_gd = self.structure[g][d];
                // Numerator over a common denominator to stay in integers.
                let mut num = 0i64;
                let mut den = 1i64;
                let mut add_term = |c: i64, l: i64| {
                    if c == 0 {
                        return;
                    }
                    num = num * l + c * den;
                    den *= l;
                };
                let bg = diff(&bv, gv);
                if self.is_root(&bg) {
                    let c = self.signed_constant(pos(b), neg(g)) * self.signed_constant(pos(a), neg(d));
                    add_term(c, sq(&bg));
                }
                let ag = diff(&av, gv);
                if self.is_root(&ag) {
                    let c = self.signed_constant(neg(g), pos(a)) * self.signed_constant(pos(b), neg(d));
                    add_term(c, sq(&ag));
                }
                let total = num * sq(xi);
                let denom = den * n_gd;
                assert_eq!(total % denom, 0, "non-integral structure constant");
                total / denom
            };
            self.structure[a][b] = value;
            self.structure[b][a] = -value;
        }
    }

    /// Whether the coefficient vectors of `set` are linearly independent over Q.
    pub fn independent(&self, set: &[usize]) -> bool {
        let m: Vec<Vec<i64>> = set
            .iter()
            .map(|&i| self.positive_roots[i].coeffs.iter().map(|&c| c as i64).collect())
            .collect();
        rank_i64(m) == set.len()
    }

    /// Nonzero diagonal of the Smith normal form of the rank x |set| matrix
    /// whose columns are the coordinate vectors of `set`.
    pub fn snf_diagonal(&self, set: &[usize]) -> Vec<i64> {
        let r = self.rank();
        let cols: Vec<Vec<i64>> = set
            .iter()
            .map(|&i| self.positive_roots[i].coeffs.iter().map(|&c| c as i64).collect())
            .collect();
        let mat: Vec<Vec<i64>> = (0..r).map(|row| cols.iter().map(|c| c[row]).collect()).collect();
        smith_diagonal(mat)
    }

    pub fn describe(&self) -> RootSystemDescription {
        let n = self.num_positive();
        let mut constants = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.structure[i][j] != 0 {
                    constants.push((i, j, self.structure[i][j]));
                }
            }
        }
        RootSystemDescription {
            cartan_type: self.cartan_type.to_string(),
            rank: self.rank(),
            cartan: self.cartan.clone(),
            positive_roots: self.positive_roots.iter().map(|r| r.coeffs.clone()).collect(),
            structure_constants: constants,
            bad_primes: self.bad_primes.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Signed {
    index: usize,
    positive: bool,
}

/// Serializable snapshot of a root system.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RootSystemDescription {
    pub cartan_type: String,
    pub rank: usize,
    pub cartan: Vec<Vec<i64>>,
    pub positive_roots: Vec<Vec<i32>>,
    pub structure_constants: Vec<(usize, usize, i64)>,
    pub bad_primes: Vec<u64>,
}

fn rank_i64(mut m: Vec<Vec<i64>>) -> usize {
    // Fraction-free elimination; entries stay tiny for root data.
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..rows {
            if m[r][c] != 0 {
                let (a, b) = (m[rank][c], m[r][c]);
                for k in 0..cols {
                    m[r][k] = m[r][k] * a - m[rank][k] * b;
                }
                let g = m[r].iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
                if g > 1 {
                    m[r].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Diagonal of the Smith normal form (nonzero entries only, in divisibility order).
pub fn smith_diagonal(mut m: Vec<Vec<i64>>) -> Vec<i64> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Pivot: smallest nonzero absolute value in the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0 && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = m[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let f = m[i][t] / p;
                if f != 0 {
                    for j in t..cols {
                        m[i][j] -= f * m[t][j];
                    }
                }
                if m[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let f = m[t][j] / p;
                if f != 0 {
                    for row in m.iter_mut().skip(t) {
                        row[j] -= f * row[t];
                    }
                }
                if m[t][j] != 0 {
                    clean = false;
                }
            }
            if clean {
                // Enforce divisibility against the rest of the block.
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| m[i][j] % p != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..cols {
                            m[t][j] += m[i][j];
                        }
                        continue;
                    }
                }
            }
            // Move the smallest nonzero entry of row/column t to the corner.
            let mut bi = (t, t);
            for i in t..rows {
                if m[i][t] != 0 && m[i][t].abs() < m[bi.0][bi.1].abs() {
                    bi = (i, t);
                }
            }
            for j in t..cols {
                if m[t][j] != 0 && m[t][j].abs() < m[bi.0][bi.1].abs() {
                    bi = (t, j);
                }
            }
            if bi.0 != t {
                m.swap(t, bi.0);
            } else if bi.1 != t {
                for row in m.iter_mut() {
                    row.swap(t, bi.1);
                }
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(s: &str) -> RootSystem {
        RootSystem::from_type(s.parse().unwrap())
    }

    #[test]
    fn positive_root_counts() {
        let expected = [
            ("A1", 1),
            ("A2", 3),
            ("A4", 10),
            ("B2", 4),
            ("B3", 9),
            ("C4", 16),
            ("D4", 12),
            ("D5", 20),
            ("E6", 36),
            ("E7", 63),
            ("E8", 120),
            ("F4", 24),
            ("G2", 6),
        ];
        for (t, n) in expected {
            assert_eq!(rs(t).num_positive(), n, "{t}");
        }
    }

    #[test]
    fn a2_enumeration() {
        let r = rs("A2");
        let heights: Vec<u32> = r.positive_roots.iter().map(|x| x.height).collect();
        assert_eq!(heights, vec![1, 1, 2]);
        assert_eq!(r.root(0).coeffs, vec![1, 0]);
        assert_eq!(r.root(1).coeffs, vec![0, 1]);
    }

    #[test]
    fn bad_primes_from_highest_root() {
        assert_eq!(rs("G2").highest_root().coeffs, vec![3, 2]);
        assert_eq!(rs("G2").bad_primes, vec![2, 3]);
        assert_eq!(rs("A5").bad_primes, Vec::<u64>::new());
        assert_eq!(rs("B3").bad_primes, vec![2]);
        assert_eq!(rs("D5").bad_primes, vec![2]);
        assert_eq!(rs("E8").bad_primes, vec![2, 3, 5]);
        assert_eq!(rs("F4").bad_primes, vec![2, 3]);
    }

    #[test]
    fn is_root_examples() {
        let a2 = rs("A2");
        assert!(a2.is_root(&[1, 1]));
        assert!(a2.is_root(&[-1, -1]));
        assert!(!a2.is_root(&[2, 0]));
        assert!(!a2.is_root(&[0, 0]));
        assert!(rs("B2").is_root(&[1, 2]));
        assert!(!rs("C2").is_root(&[1, 2]));
    }

    #[test]
    fn structure_constant_examples() {
        let a2 = rs("A2");
        assert_eq!(a2.structure_constant(0, 1).abs(), 1);
        assert_eq!(a2.structure_constant(0, 2), 0);
        let b2 = rs("B2");
        let short = b2.index_of(&[0, 1]).unwrap();
        let mid = b2.index_of(&[1, 1]).unwrap();
        assert_eq!(b2.structure_constant(short, mid).abs(), 2);
    }

    #[test]
    fn snf_examples() {
        let a2 = rs("A2");
        assert!(a2.independent(&[0, 1]));
        assert_eq!(a2.snf_diagonal(&[0, 1]), vec![1, 1]);
        let b2 = rs("B2");
        let j = [b2.index_of(&[1, 0]).unwrap(), b2.index_of(&[1, 2]).unwrap()];
        assert!(b2.independent(&j));
        assert_eq!(b2.snf_diagonal(&j), vec![1, 2]);
        let c5 = rs("C5");
        let j: Vec<usize> = [[0, 1, 0, 0, 0], [0, 0, 0, 0, 1], [0, 0, 1, 1, 1], [0, 0, 2, 2, 1]]
            .iter()
            .map(|v| c5.index_of(v).unwrap())
            .collect();
        assert!(!c5.independent(&j));
    }

    #[test]
    fn smith_diagonal_handles_divisibility() {
        assert_eq!(smith_diagonal(vec![vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(smith_diagonal(vec![vec![2, 4], vec![6, 8]]), vec![2, 4]);
        assert_eq!(smith_diagonal(vec![vec![0, 0], vec![0, 0]]), Vec::<i64>::new());
    }

    #[test]
    fn parse_rejects_invalid() {
        assert!("D3".parse::<CartanType>().is_err());
        assert!("F5".parse::<CartanType>().is_err());
        assert!("A9".parse::<CartanType>().is_err());
        assert!("X2".parse::<CartanType>().is_err());
        assert!("B".parse::<CartanType>().is_err());
        assert_eq!("g2".parse::<CartanType>().unwrap().to_string(), "G2");
    }
}
