//! Brute-force orbit counts of the adjoint action of `U(q)` on `u(q)`, used
//! to check engine output at small rank.

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{FamilyOutput, RunResult};
use crate::polyring::PrimeLog;
use crate::root_system::RootSystem;

pub const DEFAULT_STATE_LIMIT: u64 = 1 << 24;
pub const DEFAULT_GROUP_LIMIT: u64 = 1 << 22;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field of order {0} is too large for table arithmetic")]
    FieldTooLarge(u64),
    #[error("characteristic {p} is a bad prime for {ty}")]
    BadPrime { p: u64, ty: String },
    #[error("{what} has {size} elements, above the limit {limit}")]
    TooLarge { what: &'static str, size: f64, limit: u64 },
    #[error("non-integral coefficient {coeff} in exp(t ad e_{root})")]
    NonIntegral { root: usize, coeff: String },
}

/// Finite field of order `p^k` with elements encoded as integers `0..q`
/// (base-`p` digits of the coefficient vector, constant term lowest).
#[derive(Debug, Clone)]
pub struct Fq {
    pub p: u64,
    pub k: u32,
    pub q: u64,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut k = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

impl Fq {
    pub fn new(q: u64) -> Result<Fq, OracleError> {
        let (p, k) = prime_power(q).ok_or(OracleError::NotPrimePower(q))?;
        if q > 256 {
            return Err(OracleError::FieldTooLarge(q));
        }
        let digits = |x: u64| -> Vec<u64> { (0..k).map(|i| (x / p.pow(i)) % p).collect() };
        let encode = |d: &[u64]| -> u64 { d.iter().rev().fold(0, |acc, &c| acc * p + c) };
        // Monic irreducible of degree k: no roots suffices for k <= 3; for
        // larger k test every monic factor of lower degree.
        let modulus: Vec<u64> = (0..q)
            .map(|low| {
                let mut m = digits(low);
                m.push(1);
                m
            })
            .find(|m| is_irreducible(m, p))
            .expect("irreducible polynomials exist");
        let n = q as usize;
        let mut add = vec![0u16; n * n];
        let mut mul = vec![0u16; n * n];
        let mut neg = vec![0u16; n];
        for x in 0..q {
            let dx = digits(x);
            neg[x as usize] = encode(&dx.iter().map(|&c| (p - c) % p).collect::<Vec<_>>()) as u16;
            for y in 0..q {
                let dy = digits(y);
                let s: Vec<u64> = dx.iter().zip(&dy).map(|(a, b)| (a + b) % p).collect();
                add[(x * q + y) as usize] = encode(&s) as u16;
                mul[(x * q + y) as usize] = encode(&polymulmod(&dx, &dy, &modulus, p)) as u16;
            }
        }
        Ok(Fq { p, k, q, add, mul, neg })
    }

    #[inline]
    pub fn add(&self, x: u16, y: u16) -> u16 {
        self.add[x as usize * self.q as usize + y as usize]
    }

    #[inline]
    pub fn mul(&self, x: u16, y: u16) -> u16 {
        self.mul[x as usize * self.q as usize + y as usize]
    }

    #[inline]
    pub fn sub(&self, x: u16, y: u16) -> u16 {
        self.add(x, self.neg[y as usize])
    }

    pub fn inv(&self, x: u16) -> u16 {
        (1..self.q as u16)
            .find(|&y| self.mul(x, y) == 1)
            .expect("nonzero element")
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> u16 {
        n.rem_euclid(self.p as i64) as u16
    }

    pub fn pow(&self, x: u16, e: u32) -> u16 {
        (0..e).fold(1, |acc, _| self.mul(acc, x))
    }
}

fn polymulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let k = m.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for d in (k..prod.len()).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        for (i, mi) in m.iter().enumerate() {
            let idx = d - k + i;
            prod[idx] = (prod[idx] + p * p - c * mi % p) % p;
        }
    }
    prod.truncate(k);
    prod.resize(k, 0);
    prod
}

fn is_irreducible(m: &[u64], p: u64) -> bool {
    let k = m.len() - 1;
    if k == 1 {
        return true;
    }
    // Trial division by every monic polynomial of degree 1..=k/2.
    for d in 1..=k / 2 {
        for low in 0..p.pow(d as u32) {
            let mut f: Vec<u64> = (0..d).map(|i| (low / p.pow(i as u32)) % p).collect();
            f.push(1);
            if poly_rem(m, &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let d = f.len() - 1;
    for i in (d..r.len()).rev() {
        let c = r[i];
        if c == 0 {
            continue;
        }
        for (j, fj) in f.iter().enumerate() {
            let idx = i - d + j;
            r[idx] = (r[idx] + p * p - c * fj % p) % p;
        }
    }
    r.truncate(d);
    r
}

/// `exp(t ad e_alpha)` on `u`: `e_{beta_i} -> sum_s m_s t^s e_{beta_i + s alpha}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjointGenerator {
    pub root: usize,
    /// For each basis index, the list of `(target, m_s, s)` with `s >= 1`.
    pub action: Vec<Vec<(usize, i64, u32)>>,
}

pub fn build_adjoint_generators(rs: &RootSystem) -> Result<Vec<AdjointGenerator>, OracleError> {
    let n = rs.num_positive();
    (0..n)
        .map(|a| {
            let mut action = Vec::with_capacity(n);
            for i in 0..n {
                let mut terms = Vec::new();
                let mut m = BigRational::one();
                let mut cur = i;
                let mut s = 0u32;
                while let Some(next) = rs.sum_index(a, cur) {
                    s += 1;
                    m = m * BigRational::from_integer(rs.structure_constant(a, cur).into())
                        / BigRational::from_integer(BigInt::from(s));
                    if !m.is_integer() {
                        return Err(OracleError::NonIntegral {
                            root: a + 1,
                            coeff: m.to_string(),
                        });
                    }
                    terms.push((next, m.to_integer().to_i64().expect("small"), s));
                    cur = next;
                }
                action.push(terms);
            }
            Ok(AdjointGenerator { root: a, action })
        })
        .collect()
}

/// Dense matrices over F_q acting on the basis of `u` (column `i` is the image
/// of `e_{beta_i}`).
type Mat = Vec<Vec<u16>>;

fn generator_matrix(f: &Fq, g: &AdjointGenerator, t: u16) -> Mat {
    let n = g.action.len();
    let mut m = vec![vec![0u16; n]; n];
    for i in 0..n {
        m[i][i] = 1;
        for &(j, c, s) in &g.action[i] {
            let val = f.mul(f.from_int(c), f.pow(t, s));
            m[j][i] = f.add(m[j][i], val);
        }
    }
    m
}

fn mat_mul(f: &Fq, a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut c = vec![vec![0u16; n]; n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i][k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                if b[k][j] != 0 {
                    c[i][j] = f.add(c[i][j], f.mul(x, b[k][j]));
                }
            }
        }
    }
    c
}

fn rank(f: &Fq, mut m: Mat) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let inv = f.inv(m[r][c]);
        for j in 0..cols {
            m[r][j] = f.mul(m[r][j], inv);
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let factor = m[i][c];
                for j in 0..cols {
                    let d = f.mul(factor, m[r][j]);
                    m[i][j] = f.sub(m[i][j], d);
                }
            }
        }
        r += 1;
    }
    r
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitCensus {
    pub q: u64,
    pub count: u64,
    /// Orbit size and number of orbits of that size.
    pub orbit_sizes: Vec<(u64, u64)>,
}

#[derive(Debug, Clone, Copy)]
pub struct OracleLimits {
    pub states: u64,
    pub group: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            states: DEFAULT_STATE_LIMIT,
            group: DEFAULT_GROUP_LIMIT,
        }
    }
}

/// Indices of the roots spanning the `l`-th central series term.
pub fn series_indices(rs: &RootSystem, l: u32) -> Vec<usize> {
    (0..rs.num_positive()).filter(|&i| rs.root(i).height >= l).collect()
}

fn check_prime(rs: &RootSystem, f: &Fq) -> Result<(), OracleError> {
    if rs.bad_primes.contains(&f.p) {
        return Err(OracleError::BadPrime {
            p: f.p,
            ty: rs.cartan_type.to_string(),
        });
    }
    Ok(())
}

fn guard(what: &'static str, q: u64, exp: usize, limit: u64) -> Result<u64, OracleError> {
    let size = (q as f64).powi(exp as i32);
    if size > limit as f64 {
        return Err(OracleError::TooLarge { what, size, limit });
    }
    Ok(q.pow(exp as u32))
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb) as usize] = ra.min(rb);
        }
    }
}

/// Orbit partition of the height-`>= l` part of `u(q)`.
pub struct OrbitPartition {
    pub field: Fq,
    /// Root indices spanning the subspace, in order.
    pub support: Vec<usize>,
    /// Orbit representative (smallest encoded vector) of every vector.
    pub orbit_of: Vec<u32>,
}

impl OrbitPartition {
    pub fn encode(&self, coords: &[u16]) -> u32 {
        self.support
            .iter()
            .rev()
            .fold(0u64, |acc, &i| acc * self.field.q + coords[i] as u64) as u32
    }

    pub fn decode(&self, mut code: u32) -> Vec<u16> {
        let mut v = vec![0u16; self.support.iter().max().map_or(0, |m| m + 1)];
        for &i in &self.support {
            v[i] = (code as u64 % self.field.q) as u16;
            code = (code as u64 / self.field.q) as u32;
        }
        v
    }

    pub fn census(&self) -> OrbitCensus {
        let mut sizes: HashMap<u32, u64> = HashMap::new();
        for &r in &self.orbit_of {
            *sizes.entry(r).or_default() += 1;
        }
        let mut hist: HashMap<u64, u64> = HashMap::new();
        for s in sizes.values() {
            *hist.entry(*s).or_default() += 1;
        }
        let mut orbit_sizes: Vec<(u64, u64)> = hist.into_iter().collect();
        orbit_sizes.sort();
        OrbitCensus {
            q: self.field.q,
            count: sizes.len() as u64,
            orbit_sizes,
        }
    }
}

pub fn orbit_partition(rs: &RootSystem, q: u64, l: u32, limits: OracleLimits) -> Result<OrbitPartition, OracleError> {
    let f = Fq::new(q)?;
    check_prime(rs, &f)?;
    let support = series_indices(rs, l);
    let states = guard("state space", q, support.len(), limits.states)?;
    let gens = build_adjoint_generators(rs)?;
    // The additive group is generated by 1, w, w^2, ... for a primitive element w
    // only over the prime field; the powers of the generator t = x (encoded p)
    // give an F_p-basis of F_q.
    let basis: Vec<u16> = (0..f.k).map(|i| f.p.pow(i) as u16).collect();
    let mats: Vec<Mat> = gens
        .iter()
        .flat_map(|g| basis.iter().map(|&t| generator_matrix(&f, g, t)))
        .collect();
    let mut uf = UnionFind {
        parent: (0..states as u32).collect(),
    };
    let part = OrbitPartition {
        field: f.clone(),
        support: support.clone(),
        orbit_of: Vec::new(),
    };
    for code in 0..states as u32 {
        let x = part.decode(code);
        for m in &mats {
            let mut y = x.clone();
            for &i in &support {
                if x[i] == 0 {
                    continue;
                }
                for &j in &support {
                    if j != i && m[j][i] != 0 {
                        y[j] = f.add(y[j], f.mul(m[j][i], x[i]));
                    }
                }
            }
            uf.union(code, part.encode(&y));
        }
    }
    let orbit_of = (0..states as u32).map(|c| uf.find(c)).collect();
    Ok(OrbitPartition { orbit_of, ..part })
}

pub fn count_orbits_unionfind(
    rs: &RootSystem,
    q: u64,
    l: u32,
    limits: OracleLimits,
) -> Result<OrbitCensus, OracleError> {
    Ok(orbit_partition(rs, q, l, limits)?.census())
}

/// Burnside: average of `q^dim Fix(Ad u)` over all `u = prod_i x_{beta_i}(a_i)`.
pub fn count_orbits_burnside(rs: &RootSystem, q: u64, l: u32, limits: OracleLimits) -> Result<u64, OracleError> {
    let f = Fq::new(q)?;
    check_prime(rs, &f)?;
    let n = rs.num_positive();
    let group = guard("group", q, n, limits.group)?;
    let support = series_indices(rs, l);
    let gens = build_adjoint_generators(rs)?;
    let tables: Vec<Vec<Mat>> = gens
        .iter()
        .map(|g| (0..q as u16).map(|t| generator_matrix(&f, g, t)).collect())
        .collect();
    let identity: Mat = (0..n).map(|i| (0..n).map(|j| (i == j) as u16).collect()).collect();

    fn walk(f: &Fq, tables: &[Vec<Mat>], support: &[usize], depth: usize, m: &Mat, acc: &mut BigInt) {
        if depth == tables.len() {
            let restricted: Mat = support
                .iter()
                .map(|&i| {
                    support
                        .iter()
                        .map(|&j| if i == j { f.sub(m[i][j], 1) } else { m[i][j] })
                        .collect()
                })
                .collect();
            let fix = support.len() - rank(f, restricted);
            *acc += BigInt::from(f.q).pow(fix as u32);
            return;
        }
        for x in &tables[depth] {
            walk(f, tables, support, depth + 1, &mat_mul(f, m, x), acc);
        }
    }

    let total: BigInt = tables[0]
        .par_iter()
        .map(|x0| {
            let mut acc = BigInt::zero();
            walk(&f, &tables, &support, 1, &mat_mul(&f, &identity, x0), &mut acc);
            acc
        })
        .sum();
    let (quot, rem) = total.div_rem(&BigInt::from(group));
    assert!(rem.is_zero(), "Burnside sum not divisible by the group order");
    Ok(quot.to_u64().expect("orbit count fits"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub q: u64,
    pub count: u64,
    pub method: String,
    pub seconds: f64,
}

pub fn timed(method: &str, q: u64, f: impl FnOnce() -> Result<u64, OracleError>) -> Result<OracleReport, OracleError> {
    let start = Instant::now();
    let count = f()?;
    Ok(OracleReport {
        q,
        count,
        method: method.to_string(),
        seconds: start.elapsed().as_secs_f64(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub q: u64,
    pub family_points: u64,
    pub orbits: u64,
    pub vectors: u64,
    /// Two family points in one orbit.
    pub duplicates: Vec<(String, String)>,
    /// An orbit representative not reached by any family point.
    pub missed: Vec<String>,
    pub problems: Vec<String>,
    /// The characteristic divided some constant during the run, so a
    /// mismatch would not indicate a bug.
    pub prime_logged: bool,
    pub passed: bool,
}

fn render_vector(v: &[u16]) -> String {
    let terms: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| {
            if c == 1 {
                format!("e{}", i + 1)
            } else {
                format!("{c}*e{}", i + 1)
            }
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

/// F_p-points of a family (`q` prime). Returns an error message for
/// families whose points cannot be enumerated.
pub fn family_points(fam: &FamilyOutput, n: usize, p: u64) -> Result<Vec<Vec<u16>>, String> {
    if !fam.a.is_empty() || fam.is_bad() {
        return Err(format!("family {} is unresolved", fam.signature));
    }
    if !fam.normalized.is_empty() {
        return Err(format!("family {} was normalized by the torus", fam.signature));
    }
    let vars = &fam.live;
    let mut out = Vec::new();
    let combos = (p - 1).pow(vars.len() as u32);
    for code in 0..combos {
        let mut c = code;
        let vals: Vec<u64> = vars
            .iter()
            .map(|_| {
                let v = c % (p - 1) + 1;
                c /= p - 1;
                v
            })
            .collect();
        let value = |v: crate::polyring::Var| vals[vars.iter().position(|&w| w == v).expect("live var")];
        let mut ok = true;
        for b in &fam.b {
            match b.eval_mod(p, value) {
                Some(0) => {
                    ok = false;
                    break;
                }
                Some(_) => {}
                None => return Err(format!("condition {b} has a denominator divisible by {p}")),
            }
        }
        if !ok {
            continue;
        }
        let mut x = vec![0u16; n];
        for (k, c) in &fam.coords {
            let k = *k;
            let num = c.num.eval_mod(p, value).ok_or("coefficient denominator vanishes")?;
            let den = c.den.eval_mod(p, value).ok_or("coefficient denominator vanishes")?;
            if den == 0 {
                return Err(format!("coefficient {} has vanishing denominator", c.to_text()));
            }
            let val = num * crate::polyring::inv_mod(den, p) % p;
            if val == 0 {
                return Err(format!("coefficient {} vanishes at a family point", c.to_text()));
            }
            x[k] = val as u16;
        }
        out.push(x);
    }
    Ok(out)
}

/// Check that the family points of an unnormalized run form a set of orbit
/// representatives.
pub fn verify_partition(
    rs: &RootSystem,
    q: u64,
    result: &RunResult,
    limits: OracleLimits,
) -> Result<PartitionReport, OracleError> {
    let l = result.options.series_term;
    let part = orbit_partition(rs, q, l, limits)?;
    let census = part.census();
    let mut report = PartitionReport {
        q,
        family_points: 0,
        orbits: census.count,
        vectors: part.orbit_of.len() as u64,
        duplicates: Vec::new(),
        missed: Vec::new(),
        problems: Vec::new(),
        prime_logged: result.primes.may_involve(part.field.p),
        passed: false,
    };
    if part.field.k != 1 {
        report
            .problems
            .push("family points are enumerated over prime fields only".into());
        return Ok(report);
    }
    if !result.bad.is_empty() {
        report.problems.push(format!("{} bad families", result.bad.len()));
    }
    let n = rs.num_positive();
    let mut hit: HashMap<u32, Vec<u16>> = HashMap::new();
    for fam in &result.families {
        match family_points(fam, n, q) {
            Err(e) => report.problems.push(e),
            Ok(points) => {
                for x in points {
                    report.family_points += 1;
                    let orbit = part.orbit_of[part.encode(&x) as usize];
                    if let Some(prev) = hit.get(&orbit) {
                        if report.duplicates.len() < 10 {
                            report.duplicates.push((render_vector(prev), render_vector(&x)));
                        }
                    } else {
                        hit.insert(orbit, x);
                    }
                }
            }
        }
    }
    let mut reps: Vec<u32> = part.orbit_of.iter().copied().filter(|r| !hit.contains_key(r)).collect();
    reps.sort();
    reps.dedup();
    report.missed = reps.iter().take(10).map(|&r| render_vector(&part.decode(r))).collect();
    report.passed = report.duplicates.is_empty()
        && reps.is_empty()
        && report.problems.is_empty()
        && report.family_points == report.orbits;
    Ok(report)
}

/// Size of the orbit of the split torus `T(q)` (adjoint type) on vectors
/// supported exactly on `set`; all such vectors have orbits of this size.
pub fn torus_orbit_size(rs: &RootSystem, set: &[usize], q: u64) -> Result<u64, OracleError> {
    prime_power(q).ok_or(OracleError::NotPrimePower(q))?;
    let v = q - 1;
    let r = rs.rank();
    // F_q^x is cyclic of order v. Characters are exponent vectors: beta(t) = prod t_i^{c_i}. Working in
    // exponents modulo v, the orbit is the image of (Z/v)^r.
    let mut image = std::collections::HashSet::new();
    let mut e = vec![0u64; r];
    loop {
        let tuple: Vec<u64> = set
            .iter()
            .map(|&j| {
                rs.root(j)
                    .coeffs
                    .iter()
                    .zip(&e)
                    .map(|(&c, &x)| c as u64 * x)
                    .sum::<u64>()
                    % v
            })
            .collect();
        image.insert(tuple);
        let mut i = 0;
        loop {
            if i == r {
                return Ok(image.len() as u64);
            }
            e[i] += 1;
            if e[i] < v {
                break;
            }
            e[i] = 0;
            i += 1;
        }
    }
}

/// Whether a mismatch at characteristic `p` could be explained by a
/// division during the symbolic run.
pub fn mismatch_explained(log: &PrimeLog, p: u64) -> bool {
    log.may_involve(p)
}
