//! Depth-first enumeration of the families of minimal representatives of
//! adjoint `U(q)`-orbits on `u(q)`.
//!
//! Each [`FamilyState`] describes a locally closed set of coefficient vectors
//! `x_c(t)` with a fixed inert/ramification signature `c`, cut out by
//! polynomial equations (`A`) and inequations (`B`) in the free
//! indeterminates. At every position the engine appends the reduced
//! centralizer row and decides whether the position is inert or ramified,
//! splitting the family where the answer depends on the point.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering as AtomicOrdering};
use std::sync::Mutex;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::centralizer::{p_row, substitute_row, CentralizerMatrix, Coordinate};
use crate::counting::{aggregate, CountPolynomial, GoodFamilyRecord};
use crate::polyring::{factor_with_budget, gcd, var_name, MPoly, PrimeLog, Var, Z_BASE};
use crate::root_system::{CartanType, RootSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Letter {
    /// Inert: the centralizer dimension drops by one.
    I,
    /// Ramification point with coefficient zero.
    R0,
    /// Ramification point with a nonzero coefficient.
    Rn,
}

impl Letter {
    pub fn symbol(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::R0 => '0',
            Letter::Rn => 'n',
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FamilySignature(pub Vec<Letter>);

impl FamilySignature {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn m_c(&self) -> usize {
        self.0.iter().filter(|&&l| l == Letter::Rn).count()
    }

    /// Positions carrying a nonzero coefficient.
    pub fn positions(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] == Letter::Rn).collect()
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }
}

impl fmt::Display for FamilySignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for FamilySignature {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|ch| match ch {
                'I' => Ok(Letter::I),
                '0' => Ok(Letter::R0),
                'n' => Ok(Letter::Rn),
                _ => Err(format!("invalid signature letter {ch:?}")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(FamilySignature)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EngineOptions {
    /// Only positions of height at least this may carry nonzero coefficients.
    pub series_term: u32,
    pub normalize: bool,
    /// Root indices (0-based) that are never normalized to 1.
    pub normalization_overrides: Vec<usize>,
    pub factor_budget: usize,
    /// Upper bound on the number of family states processed.
    pub max_states: usize,
    pub trace: u8,
    /// 0 means the rayon default.
    pub workers: usize,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            series_term: 1,
            normalize: true,
            normalization_overrides: Vec::new(),
            factor_budget: 64,
            max_states: 20_000_000,
            trace: 0,
            workers: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FamilyState {
    pub signature: FamilySignature,
    /// Coefficient of `e_{beta_k}` in `x_c(t)` for every decided position.
    pub coords: Vec<Coordinate>,
    /// Free indeterminates, each nonzero on the family.
    pub live: BTreeSet<Var>,
    /// Positions whose coefficient was normalized to 1 by the torus.
    pub normalized: Vec<usize>,
    /// Vanishing conditions that could not be eliminated.
    pub a: Vec<MPoly>,
    /// Vanishing conditions still waiting to be eliminated.
    a_fresh: Vec<MPoly>,
    /// Pairwise coprime non-vanishing conditions.
    pub b: Vec<MPoly>,
    pub substitutions: Vec<String>,
    pub matrix: CentralizerMatrix,
    pending: Option<Vec<MPoly>>,
    next_z: Var,
    pub log: PrimeLog,
}

impl FamilyState {
    pub fn initial() -> Self {
        FamilyState {
            signature: FamilySignature::default(),
            coords: Vec::new(),
            live: BTreeSet::new(),
            normalized: Vec::new(),
            a: Vec::new(),
            a_fresh: Vec::new(),
            b: Vec::new(),
            substitutions: Vec::new(),
            matrix: CentralizerMatrix::new(),
            pending: None,
            next_z: Z_BASE,
            log: PrimeLog::default(),
        }
    }

    fn is_known_zero(&self, e: &MPoly) -> bool {
        e.is_zero() || self.a.iter().chain(&self.a_fresh).any(|a| a.divides(e))
    }

    /// Record `g != 0`. Returns false when the family becomes empty.
    pub fn add_nonzero(&mut self, g: &MPoly, budget: usize) -> bool {
        if self.is_known_zero(g) {
            return false;
        }
        let u = residual(g, &self.b);
        if u.is_constant() {
            self.log.record_rational(&g.content());
            return true;
        }
        let fac = factor_with_budget(&u, budget);
        for f in fac.nonmonomial() {
            insert_coprime(&mut self.b, f.clone());
        }
        true
    }

    /// Choice of a linear indeterminate for each constraint, if any.
    pub fn sigma(&self, f: &MPoly) -> Option<Var> {
        linear_choice(f, &self.live).map(|(v, _, _)| v)
    }
}

/// `g` with monomial factors, constants and factors shared with `b` removed.
/// A constant result means `g` cannot vanish on the family.
pub fn residual(g: &MPoly, b: &[MPoly]) -> MPoly {
    let p = g.primitive_part();
    let m = p.monomial_content();
    let mut u = p.div_monomial(&m).expect("monomial content divides");
    for bi in b {
        while !u.is_constant() {
            let h = gcd(&u, bi);
            if h.is_constant() {
                break;
            }
            u = u.try_div(&h).expect("gcd divides");
        }
    }
    u.primitive_part()
}

fn insert_coprime(b: &mut Vec<MPoly>, f: MPoly) {
    let mut todo = vec![f];
    while let Some(p) = todo.pop() {
        if p.is_constant() {
            continue;
        }
        let p = p.primitive_part();
        let mut merged = false;
        for i in 0..b.len() {
            let h = gcd(&p, &b[i]);
            if h.is_constant() {
                continue;
            }
            merged = true;
            if h == p && h == b[i] {
                break;
            }
            let bi = b.remove(i);
            todo.push(bi.try_div(&h).expect("gcd divides"));
            todo.push(p.try_div(&h).expect("gcd divides"));
            todo.push(h);
            break;
        }
        if !merged {
            b.push(p);
        }
    }
    b.sort_by(|x, y| x.compare(y));
}

/// Linear indeterminate of `f` among `live` whose coefficient has the fewest
/// terms, ties by lowest index; returns `(v, h1, h0)` with `f = h1 v + h0`.
fn linear_choice(f: &MPoly, live: &BTreeSet<Var>) -> Option<(Var, MPoly, MPoly)> {
    f.linear_in()
        .into_iter()
        .filter(|v| live.contains(v))
        .filter_map(|v| f.split_linear(v).map(|(h1, h0)| (v, h1, h0)))
        .min_by(|x, y| x.1.num_terms().cmp(&y.1.num_terms()).then(x.0.cmp(&y.0)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Case {
    /// Every entry vanishes: a ramification point for all points.
    Case1a,
    /// Pivot column whose entry never vanishes.
    Case1b(usize),
    /// Pivot column whose entry may vanish, with its unresolved factors.
    Case1c(usize, Vec<MPoly>),
}

/// A completed family.
#[derive(Debug, Clone)]
pub struct FamilyOutput {
    pub signature: FamilySignature,
    /// Root index (0-based) and coefficient of each `Rn` position.
    pub coords: Vec<(usize, Coordinate)>,
    pub live: Vec<Var>,
    pub normalized: Vec<usize>,
    pub a: Vec<MPoly>,
    pub b: Vec<MPoly>,
    pub substitutions: Vec<String>,
    pub records: Vec<GoodFamilyRecord>,
    pub bad_reason: Option<String>,
    pub log: PrimeLog,
}

impl FamilyOutput {
    pub fn is_bad(&self) -> bool {
        self.bad_reason.is_some()
    }

    pub fn count(&self) -> CountPolynomial {
        aggregate(&self.records)
    }

    fn sort_key(&self) -> (String, String) {
        let rest: Vec<String> = self
            .a
            .iter()
            .chain(&self.b)
            .map(|p| p.to_string())
            .chain(self.coords.iter().map(|(_, c)| c.to_text()))
            .collect();
        (self.signature.to_string(), rest.join(";"))
    }

    pub fn report(&self) -> FamilyReport {
        let live: BTreeSet<Var> = self.live.iter().copied().collect();
        FamilyReport {
            signature: self.signature.to_string(),
            m_c: self.signature.m_c(),
            free: self.live.iter().map(|&v| var_name(v)).collect(),
            normalized: self.normalized.iter().map(|i| i + 1).collect(),
            coordinates: self.coords.iter().map(|(k, c)| (k + 1, c.to_text())).collect(),
            a: self.a.iter().map(|p| p.to_string()).collect(),
            b: self.b.iter().map(|p| p.to_string()).collect(),
            sigma: self
                .a
                .iter()
                .chain(&self.b)
                .map(|p| linear_choice(p, &live).map(|(v, _, _)| var_name(v)))
                .collect(),
            substitutions: self.substitutions.clone(),
            records: self.records.clone(),
            count: if self.is_bad() {
                None
            } else {
                Some(self.count().render_v())
            },
            bad_reason: self.bad_reason.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub signature: String,
    pub m_c: usize,
    pub free: Vec<String>,
    /// 1-based root indices normalized to coefficient 1.
    pub normalized: Vec<usize>,
    /// 1-based root index and coefficient for each nonzero position.
    pub coordinates: Vec<(usize, String)>,
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub sigma: Vec<Option<String>>,
    pub substitutions: Vec<String>,
    pub records: Vec<GoodFamilyRecord>,
    pub count: Option<String>,
    pub bad_reason: Option<String>,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub cartan_type: CartanType,
    pub options: EngineOptions,
    pub polynomial: CountPolynomial,
    /// Number of distinct signatures by number of nonzero coefficients.
    pub census: BTreeMap<usize, usize>,
    pub families: Vec<FamilyOutput>,
    pub bad: Vec<FamilyOutput>,
    pub primes: PrimeLog,
    pub partial: bool,
    pub states_processed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunArtifact {
    pub cartan_type: String,
    pub series_term: u32,
    pub normalize: bool,
    pub polynomial_v: String,
    pub polynomial_q: String,
    pub coeffs_v: Vec<String>,
    pub coeffs_q: Vec<String>,
    pub census: BTreeMap<usize, usize>,
    pub num_families: usize,
    pub families: Vec<FamilyReport>,
    pub bad: Vec<FamilyReport>,
    pub primes: PrimeLog,
    pub partial: bool,
    pub version: String,
}

impl RunResult {
    pub fn is_complete(&self) -> bool {
        self.bad.is_empty() && !self.partial
    }

    pub fn artifact(&self, include_families: bool) -> RunArtifact {
        RunArtifact {
            cartan_type: self.cartan_type.to_string(),
            series_term: self.options.series_term,
            normalize: self.options.normalize,
            polynomial_v: self.polynomial.render_v(),
            polynomial_q: self.polynomial.render_q(),
            coeffs_v: self.polynomial.coeffs_v().iter().map(|c| c.to_string()).collect(),
            coeffs_q: self.polynomial.coeffs_q().iter().map(|c| c.to_string()).collect(),
            census: self.census.clone(),
            num_families: self.families.len(),
            families: if include_families {
                self.families.iter().map(|f| f.report()).collect()
            } else {
                Vec::new()
            },
            bad: self.bad.iter().map(|f| f.report()).collect(),
            primes: self.primes.clone(),
            partial: self.partial,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

struct Engine<'a> {
    rs: &'a RootSystem,
    opts: &'a EngineOptions,
    processed: AtomicUsize,
    exhausted: AtomicBool,
}

const COUNT_DEPTH: usize = 24;
const SHIFTS: [(i64, i64); 6] = [(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2)];

impl<'a> Engine<'a> {
    fn trace(&self, level: u8, st: &FamilyState, msg: impl FnOnce() -> String) {
        if self.opts.trace >= level {
            eprintln!("[{}] {}", st.signature, msg());
        }
    }

    fn classify(&self, st: &FamilyState, row: &[MPoly]) -> Case {
        let live: Vec<usize> = (0..row.len()).filter(|&k| !st.is_known_zero(&row[k])).collect();
        if live.is_empty() {
            return Case::Case1a;
        }
        let pick =
            |cols: &mut dyn Iterator<Item = usize>| cols.min_by(|&x, &y| row[x].compare(&row[y]).then(x.cmp(&y)));
        let known = pick(&mut live.iter().copied().filter(|&k| residual(&row[k], &st.b).is_constant()));
        if let Some(l) = known {
            return Case::Case1b(l);
        }
        let l = pick(&mut live.iter().copied()).expect("nonempty");
        let u = residual(&row[l], &st.b);
        let fac = factor_with_budget(&u, self.opts.factor_budget);
        Case::Case1c(l, fac.nonmonomial().cloned().collect())
    }

    /// Run a state until its signature has full length, handing every split
    /// off to `push`. Returns the finished families.
    fn advance(&self, mut st: FamilyState, push: &mut dyn FnMut(FamilyState)) -> Vec<FamilyOutput> {
        let n = self.rs.num_positive();
        loop {
            if self.processed.fetch_add(1, AtomicOrdering::Relaxed) >= self.opts.max_states {
                self.exhausted.store(true, AtomicOrdering::Relaxed);
                return Vec::new();
            }
            let i = st.signature.len();
            let row = match st.pending.take() {
                Some(r) => r,
                None => {
                    if i == n {
                        return self.finalize(st);
                    }
                    let row = p_row(self.rs, &st.coords, i);
                    st.matrix.reduce(row, &mut st.log)
                }
            };
            if self.opts.trace >= 2 {
                let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
                self.trace(2, &st, || format!("row {}: [{}]", i + 1, cells.join(", ")));
            }
            match self.classify(&st, &row) {
                Case::Case1a => {
                    st.matrix.push(row, None);
                    if self.rs.root(i).height < self.opts.series_term {
                        st.signature.push(Letter::R0);
                        st.coords.push(Coordinate::zero());
                        continue;
                    }
                    let mut sib = st.clone();
                    sib.signature.push(Letter::R0);
                    sib.coords.push(Coordinate::zero());
                    push(sib);
                    self.introduce(&mut st, i);
                }
                Case::Case1b(l) => {
                    st.log.record_rational(&row[l].content());
                    st.matrix.push(row, Some(l));
                    st.signature.push(Letter::I);
                    st.coords.push(Coordinate::zero());
                }
                Case::Case1c(l, factors) => {
                    self.trace(1, &st, || {
                        let fs: Vec<String> = factors.iter().map(|f| f.to_string()).collect();
                        format!("split at {} column {} on {{{}}}", i + 1, l + 1, fs.join(", "))
                    });
                    for s in (0..factors.len()).rev() {
                        let mut br = st.clone();
                        br.pending = Some(row.clone());
                        if !factors[..s].iter().all(|g| br.add_nonzero(g, self.opts.factor_budget)) {
                            continue;
                        }
                        for fam in self.impose(br, factors[s].clone()) {
                            push(fam);
                        }
                    }
                    for g in &factors {
                        if !st.add_nonzero(g, self.opts.factor_budget) {
                            return Vec::new();
                        }
                    }
                    st.log.record_rational(&row[l].content());
                    st.matrix.push(row, Some(l));
                    st.signature.push(Letter::I);
                    st.coords.push(Coordinate::zero());
                }
            }
        }
    }

    /// Extend by a nonzero coefficient at position `i`, normalizing it to 1
    /// when the torus allows.
    fn introduce(&self, st: &mut FamilyState, i: usize) {
        st.signature.push(Letter::Rn);
        if self.opts.normalize && !self.opts.normalization_overrides.contains(&i) {
            let mut j = st.normalized.clone();
            j.push(i);
            if self.rs.independent(&j) && self.rs.snf_diagonal(&j).iter().all(|&d| d == 1) {
                st.normalized = j;
                st.coords.push(Coordinate::one());
                return;
            }
        }
        st.live.insert(i as Var);
        st.coords.push(Coordinate::var(i as Var));
    }

    /// Impose `f = 0` and eliminate as many resulting constraints as possible.
    fn impose(&self, mut st: FamilyState, f: MPoly) -> Vec<FamilyState> {
        st.a_fresh.push(f);
        self.settle(st)
    }

    fn settle(&self, st: FamilyState) -> Vec<FamilyState> {
        let mut done = Vec::new();
        let mut work = vec![st];
        while let Some(mut s) = work.pop() {
            match s.a_fresh.pop() {
                None => done.push(s),
                Some(g) => work.extend(self.impose_step(s, g)),
            }
        }
        done.reverse();
        done
    }

    fn impose_step(&self, mut st: FamilyState, f: MPoly) -> Vec<FamilyState> {
        if st.is_known_zero(&f) {
            return vec![st];
        }
        let u = residual(&f, &st.b);
        if u.is_constant() {
            st.log.record_rational(&f.content());
            return Vec::new();
        }
        let fac = factor_with_budget(&u, self.opts.factor_budget);
        let factors: Vec<MPoly> = fac.nonmonomial().cloned().collect();
        let mut out = Vec::new();
        for s in 0..factors.len() {
            let mut br = st.clone();
            if !factors[..s].iter().all(|g| br.add_nonzero(g, self.opts.factor_budget)) {
                continue;
            }
            out.extend(self.impose_irreducible(br, factors[s].clone()));
        }
        out
    }

    fn impose_irreducible(&self, mut st: FamilyState, g: MPoly) -> Vec<FamilyState> {
        if st.is_known_zero(&g) {
            return vec![st];
        }
        let mut cands: Vec<(Var, MPoly, MPoly)> = g
            .linear_in()
            .into_iter()
            .filter(|v| st.live.contains(v))
            .filter_map(|v| g.split_linear(v).map(|(h1, h0)| (v, h1, h0)))
            .collect();
        cands.sort_by(|x, y| x.1.num_terms().cmp(&y.1.num_terms()).then(x.0.cmp(&y.0)));
        if let Some((v, h1, h0)) = cands.iter().find(|c| residual(&c.1, &st.b).is_constant()) {
            return self.substitute(st, *v, &h0.neg(), h1).into_iter().collect();
        }
        if let Some((v, h1, h0)) = cands.first() {
            // Coefficient of the linear indeterminate may vanish: split on it.
            let mut out = Vec::new();
            let mut nz = st.clone();
            if nz.add_nonzero(h1, self.opts.factor_budget) {
                out.extend(self.substitute(nz, *v, &h0.neg(), h1));
            }
            st.a.push(g.clone());
            st.a_fresh.push(h1.clone());
            out.push(st);
            return out;
        }
        if let Some(out) = self.change_coordinates(&st, &g) {
            return out;
        }
        self.trace(1, &st, || format!("cannot eliminate {g}"));
        st.a.push(g);
        vec![st]
    }

    /// Replace `t_b` by `z - lambda t_a` so that `g` becomes linear in some
    /// indeterminate with a non-vanishing coefficient. The stratum
    /// `t_b = -lambda t_a` is split off.
    fn change_coordinates(&self, st: &FamilyState, g: &MPoly) -> Option<Vec<FamilyState>> {
        let vars: Vec<Var> = g.vars().into_iter().filter(|v| st.live.contains(v)).collect();
        let z = st.next_z;
        for &a in &vars {
            for &b in &vars {
                if a == b {
                    continue;
                }
                for &(num, den) in &SHIFTS {
                    let lambda = MPoly::constant(BigRational::new(num.into(), den.into()));
                    let shifted = MPoly::var(z).sub(&lambda.mul(&MPoly::var(a)));
                    let g2 = g.compose(b, &shifted);
                    let mut live = st.live.clone();
                    live.remove(&b);
                    live.insert(z);
                    let ok = g2.linear_in().into_iter().any(|v| {
                        live.contains(&v)
                            && g2
                                .split_linear(v)
                                .is_some_and(|(h1, _)| residual(&h1, &st.b).is_constant())
                    });
                    if !ok {
                        continue;
                    }
                    self.trace(1, st, || {
                        format!("coordinate change {} := {} on {}", var_name(b), shifted, g)
                    });
                    let mut out = Vec::new();
                    let mut zero = st.clone();
                    zero.a.push(g.clone());
                    let collapsed = lambda.mul(&MPoly::var(a)).neg();
                    out.extend(self.substitute(zero, b, &collapsed, &MPoly::one()));
                    let mut moved = st.clone();
                    moved.next_z += 1;
                    moved.live.insert(z);
                    moved.a.push(g.clone());
                    out.extend(self.substitute(moved, b, &shifted, &MPoly::one()));
                    return Some(out);
                }
            }
        }
        None
    }

    /// Like `change_coordinates`, but for a family with only non-vanishing
    /// conditions: find `t_b := z - lambda t_a` after which every condition
    /// is linear in some indeterminate. Returns the strata `z = 0` and
    /// `z != 0`.
    fn shift_for_count(&self, st: &FamilyState) -> Option<Vec<FamilyState>> {
        let z = st.next_z;
        let all_linear = |s: &FamilyState| {
            s.live
                .iter()
                .any(|&v| s.b.iter().all(|b| !b.contains_var(v) || b.degree_in(v) == 1))
        };
        for &a in &st.live {
            for &b in &st.live {
                if a == b {
                    continue;
                }
                for &(num, den) in &SHIFTS {
                    let lambda = MPoly::constant(BigRational::new(num.into(), den.into()));
                    let shifted = MPoly::var(z).sub(&lambda.mul(&MPoly::var(a)));
                    let mut moved = st.clone();
                    moved.next_z += 1;
                    moved.live.insert(z);
                    let Some(moved) = self.substitute(moved, b, &shifted, &MPoly::one()) else {
                        continue;
                    };
                    if !all_linear(&moved) {
                        continue;
                    }
                    self.trace(1, st, || {
                        format!("coordinate change {} := {} for counting", var_name(b), shifted)
                    });
                    let collapsed = lambda.mul(&MPoly::var(a)).neg();
                    let zero = self.substitute(st.clone(), b, &collapsed, &MPoly::one());
                    return Some(zero.into_iter().chain(std::iter::once(moved)).collect());
                }
            }
        }
        None
    }

    /// Eliminate `v := num/den` everywhere; `den` must not vanish on the
    /// family. Returns `None` if the family becomes empty.
    fn substitute(&self, mut st: FamilyState, v: Var, num: &MPoly, den: &MPoly) -> Option<FamilyState> {
        debug_assert!(!den.is_zero());
        st.log.record_rational(&den.content());
        st.live.remove(&v);
        st.substitutions.push(if *den == MPoly::one() {
            format!("{} := {}", var_name(v), num)
        } else {
            format!("{} := ({})/({})", var_name(v), num, den)
        });
        for c in st.coords.iter_mut() {
            *c = c.substitute(v, num, den);
        }
        st.matrix.substitute(v, num, den, &mut st.log);
        if let Some(row) = st.pending.as_mut() {
            substitute_row(row, v, num, den, &mut st.log);
        }
        let old_b = std::mem::take(&mut st.b);
        for b in old_b {
            let b2 = b.substitute(v, num, den);
            if !st.add_nonzero(&b2, self.opts.factor_budget) {
                return None;
            }
        }
        // The eliminated indeterminate was nonzero.
        if !st.add_nonzero(num, self.opts.factor_budget) {
            return None;
        }
        let old_a = std::mem::take(&mut st.a);
        let old_fresh = std::mem::take(&mut st.a_fresh);
        for (a, fresh) in old_a
            .into_iter()
            .map(|a| (a, false))
            .chain(old_fresh.into_iter().map(|a| (a, true)))
        {
            if !a.contains_var(v) {
                if fresh {
                    st.a_fresh.push(a);
                } else {
                    st.a.push(a);
                }
                continue;
            }
            let a2 = a.substitute(v, num, den);
            if a2.is_zero() {
                continue;
            }
            if a2.is_constant() {
                return None;
            }
            st.a_fresh.push(a2.primitive_part());
        }
        Some(st)
    }

    fn finalize(&self, st: FamilyState) -> Vec<FamilyOutput> {
        let result = if st.a.is_empty() {
            self.count(st.clone(), 0)
        } else {
            Err("unresolved vanishing conditions".to_string())
        };
        let d_extra = st.normalized.len() as u32;
        let (records, bad_reason) = match result {
            Ok(excl) => (
                excl.iter()
                    .map(|e| {
                        let mut r = GoodFamilyRecord::from_exclusions(e);
                        r.d += d_extra;
                        r
                    })
                    .collect(),
                None,
            ),
            Err(msg) => (Vec::new(), Some(msg)),
        };
        if let Some(reason) = &bad_reason {
            self.trace(1, &st, || format!("bad family: {reason}"));
        }
        let mut coords = st.coords;
        let coords = st
            .signature
            .positions()
            .into_iter()
            .map(|k| (k, std::mem::replace(&mut coords[k], Coordinate::zero())))
            .collect();
        vec![FamilyOutput {
            signature: st.signature,
            coords,
            live: st.live.into_iter().collect(),
            normalized: st.normalized,
            a: st.a,
            b: st.b,
            substitutions: st.substitutions,
            records,
            bad_reason,
            log: st.log,
        }]
    }

    /// Exclusion counts, one vector per piece of a disjoint decomposition.
    /// Each indeterminate of a piece ranges over the nonzero field elements
    /// minus the listed number of further values.
    fn count(&self, st: FamilyState, depth: usize) -> Result<Vec<Vec<u32>>, String> {
        if !st.a.is_empty() || !st.a_fresh.is_empty() {
            return Err("vanishing conditions left after splitting".to_string());
        }
        if st.live.is_empty() {
            return if st.b.is_empty() {
                Ok(vec![Vec::new()])
            } else {
                Err("constant non-vanishing condition".to_string())
            };
        }
        let mut split_on: Option<MPoly> = None;
        for &v in st.live.iter().rev() {
            let (with_v, rest): (Vec<&MPoly>, Vec<&MPoly>) = st.b.iter().partition(|b| b.contains_var(v));
            if with_v.iter().any(|b| b.degree_in(v) != 1) {
                continue;
            }
            let rest: Vec<MPoly> = rest.into_iter().cloned().collect();
            let known = |g: &MPoly| residual(g, &rest).is_constant();
            let mut need: Option<MPoly> = None;
            let mut exclusions: Vec<(MPoly, MPoly)> = Vec::new();
            let mut log = PrimeLog::default();
            for b in &with_v {
                let (h1, h0) = b.split_linear(v).expect("linear");
                if !known(&h1) {
                    need.get_or_insert(h1);
                    continue;
                }
                log.record_rational(&h1.content());
                if h0.is_zero() {
                    continue;
                }
                if !known(&h0) {
                    need.get_or_insert(h0);
                    continue;
                }
                log.record_rational(&h0.content());
                let mut distinct = true;
                for (e0, e1) in &exclusions {
                    let delta = h0.mul(e1).sub(&e0.mul(&h1));
                    if delta.is_zero() {
                        distinct = false;
                        break;
                    }
                    if !known(&delta) {
                        need.get_or_insert(delta);
                        continue;
                    }
                    log.record_rational(&delta.content());
                }
                if distinct {
                    exclusions.push((h0, h1));
                }
            }
            if let Some(g) = need {
                split_on.get_or_insert(g);
                continue;
            }
            let mut sub = st.clone();
            sub.live.remove(&v);
            sub.b = rest;
            let pieces = self.count(sub, depth)?;
            let j = exclusions.len() as u32;
            return Ok(pieces
                .into_iter()
                .map(|mut p| {
                    p.push(j);
                    p
                })
                .collect());
        }
        let Some(g) = split_on else {
            if depth < COUNT_DEPTH {
                if let Some(pieces) = self.shift_for_count(&st) {
                    let mut out = Vec::new();
                    for piece in pieces {
                        out.extend(self.count(piece, depth + 1)?);
                    }
                    return Ok(out);
                }
            }
            return Err("no indeterminate in which all conditions are linear".to_string());
        };
        if depth >= COUNT_DEPTH {
            return Err("splitting depth exceeded while counting".to_string());
        }
        let mut out = Vec::new();
        let mut nz = st.clone();
        if nz.add_nonzero(&g, self.opts.factor_budget) {
            out.extend(self.count(nz, depth + 1)?);
        }
        for piece in self.impose(st, g) {
            out.extend(self.count(piece, depth + 1)?);
        }
        Ok(out)
    }
}

fn collect(rs: &RootSystem, opts: &EngineOptions, mut outputs: Vec<FamilyOutput>, engine: &Engine) -> RunResult {
    outputs.sort_by_cached_key(|f| f.sort_key());
    let mut census: BTreeMap<usize, BTreeSet<String>> = BTreeMap::new();
    let mut primes = PrimeLog::default();
    for f in &outputs {
        census
            .entry(f.signature.m_c())
            .or_default()
            .insert(f.signature.to_string());
        primes.merge(&f.log);
    }
    let (bad, families): (Vec<_>, Vec<_>) = outputs.into_iter().partition(|f| f.is_bad());
    let polynomial = aggregate(families.iter().flat_map(|f| f.records.iter()));
    RunResult {
        cartan_type: rs.cartan_type,
        options: opts.clone(),
        polynomial,
        census: census.into_iter().map(|(k, s)| (k, s.len())).collect(),
        families,
        bad,
        primes,
        partial: engine.exhausted.load(AtomicOrdering::Relaxed),
        states_processed: engine.processed.load(AtomicOrdering::Relaxed),
    }
}

/// Enumerate all families for `rs` and aggregate their point counts.
pub fn run(rs: &RootSystem, opts: &EngineOptions) -> RunResult {
    let engine = Engine {
        rs,
        opts,
        processed: AtomicUsize::new(0),
        exhausted: AtomicBool::new(false),
    };
    let outputs = if opts.workers == 1 {
        let mut outputs = Vec::new();
        let mut stack = vec![FamilyState::initial()];
        while let Some(st) = stack.pop() {
            let mut pushed = Vec::new();
            outputs.extend(engine.advance(st, &mut |s| pushed.push(s)));
            stack.extend(pushed);
        }
        outputs
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .expect("thread pool");
        let sink = Mutex::new(Vec::new());
        pool.scope(|scope| spawn_job(scope, &engine, FamilyState::initial(), &sink));
        sink.into_inner().expect("no poisoned lock")
    };
    collect(rs, opts, outputs, &engine)
}

fn spawn_job<'s>(
    scope: &rayon::Scope<'s>,
    engine: &'s Engine<'s>,
    st: FamilyState,
    sink: &'s Mutex<Vec<FamilyOutput>>,
) {
    scope.spawn(move |scope| {
        let mut stack = vec![st];
        while let Some(st) = stack.pop() {
            let mut pushed = Vec::new();
            let out = engine.advance(st, &mut |s| pushed.push(s));
            sink.lock().expect("no poisoned lock").extend(out);
            // Keep one sibling local and share the rest.
            if let Some(last) = pushed.pop() {
                stack.push(last);
            }
            for s in pushed {
                spawn_job(scope, engine, s, sink);
            }
        }
    });
}
