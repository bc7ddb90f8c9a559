//! Checks shared by the property suites and the acceptance driver.
#![allow(dead_code)]

use kuq::centralizer::{p_row, CentralizerMatrix, Coordinate};
use kuq::coeffs::orbit_divisor;
use kuq::oracle::torus_orbit_size;
use kuq::polyring::{MPoly, PrimeLog, Var};
use kuq::root_system::{CartanType, RootSystem, Series};

pub fn all_types() -> Vec<CartanType> {
    let mut out = Vec::new();
    for r in 1..=8 {
        out.push(CartanType::new(Series::A, r).unwrap());
    }
    for r in 2..=8 {
        out.push(CartanType::new(Series::B, r).unwrap());
        out.push(CartanType::new(Series::C, r).unwrap());
    }
    for r in 4..=8 {
        out.push(CartanType::new(Series::D, r).unwrap());
    }
    for r in 6..=8 {
        out.push(CartanType::new(Series::E, r).unwrap());
    }
    out.push(CartanType::new(Series::F, 4).unwrap());
    out.push(CartanType::new(Series::G, 2).unwrap());
    out
}

pub fn rs(t: &str) -> RootSystem {
    RootSystem::from_type(t.parse().unwrap())
}

fn positive_count(ct: CartanType) -> usize {
    let r = ct.rank;
    match ct.series {
        Series::A => r * (r + 1) / 2,
        Series::B | Series::C => r * r,
        Series::D => r * (r - 1),
        Series::E => [36, 63, 120][r - 6],
        Series::F => 24,
        Series::G => 6,
    }
}

/// Antisymmetry, `|N_{a,b}| = p + 1`, vanishing off the root set and the
/// Jacobi identity on positive triples.
pub fn structure_constant_axioms(rs: &RootSystem) -> Result<(), String> {
    let ct = rs.cartan_type;
    let n = rs.num_positive();
    if n != positive_count(ct) {
        return Err(format!("{ct}: {n} positive roots"));
    }
    for i in 0..n {
        for j in 0..n {
            let nij = rs.structure_constant(i, j);
            if nij != -rs.structure_constant(j, i) {
                return Err(format!("{ct}: antisymmetry fails at ({i},{j})"));
            }
            match rs.sum_index(i, j) {
                None if nij != 0 => return Err(format!("{ct}: N({i},{j}) nonzero off the root set")),
                None => {}
                Some(_) => {
                    let p = rs.string_down(&rs.root(i).coeffs, &rs.root(j).coeffs);
                    if nij.abs() != p + 1 {
                        return Err(format!("{ct}: |N({i},{j})| = {} but p + 1 = {}", nij.abs(), p + 1));
                    }
                }
            }
        }
    }
    let term = |x: usize, y: usize, z: usize| -> i64 {
        match rs.sum_index(y, z) {
            Some(yz) => rs.structure_constant(y, z) * rs.structure_constant(x, yz),
            None => 0,
        }
    };
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if term(a, b, c) + term(b, c, a) + term(c, a, b) != 0 {
                    return Err(format!("{ct}: Jacobi fails at ({a},{b},{c})"));
                }
            }
        }
    }
    Ok(())
}

fn diff_is_root(rs: &RootSystem, x: &[i32], y: &[i32]) -> bool {
    let d: Vec<i32> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    rs.is_root(&d)
}

/// For distinct positive roots a, b, g spanning a space of dimension two
/// with g of maximal height, one of the four root-difference conditions holds.
pub fn dependent_triples(rs: &RootSystem) -> Result<(), String> {
    let ct = rs.cartan_type;
    let n = rs.num_positive();
    let r = ct.rank;
    for a in 0..n {
        for b in 0..n {
            for g in 0..n {
                if a == b || b == g || a == g || rs.independent(&[a, b, g]) {
                    continue;
                }
                let (ra, rb, rg) = (rs.root(a), rs.root(b), rs.root(g));
                if rg.height < ra.height.max(rb.height) {
                    continue;
                }
                let (va, vb, vg) = (&ra.coeffs, &rb.coeffs, &rg.coeffs);
                let bga: Vec<i32> = (0..r).map(|k| vb[k] + vg[k] - va[k]).collect();
                let agb: Vec<i32> = (0..r).map(|k| va[k] + vg[k] - vb[k]).collect();
                let c1 = diff_is_root(rs, vb, va);
                let c2 = diff_is_root(rs, vg, vb) && diff_is_root(rs, vg, va);
                let c3 = diff_is_root(rs, vg, va) && !rs.is_root(&bga);
                let c4 = diff_is_root(rs, vg, vb) && !rs.is_root(&agb);
                if !(c1 || c2 || c3 || c4) {
                    return Err(format!("{ct}: triple ({a},{b},{g})"));
                }
            }
        }
    }
    Ok(())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for last in k - 1..n {
        for mut s in subsets(last, k - 1) {
            s.push(last);
            out.push(s);
        }
    }
    out
}

/// Torus orbits on vectors supported exactly on an independent set J have
/// size divisible by the orbit divisor of J.
pub fn torus_divisibility(rs: &RootSystem, q: u64) -> Result<usize, String> {
    let n = rs.num_positive();
    let mut checked = 0;
    for k in 1..=rs.rank().min(3) {
        for set in subsets(n, k) {
            if !rs.independent(&set) {
                continue;
            }
            let size = torus_orbit_size(rs, &set, q).map_err(|e| e.to_string())?;
            let div = orbit_divisor(rs, &set, q - 1).map_err(|e| e.to_string())?;
            if size % div != 0 {
                return Err(format!(
                    "{}: J={set:?} q={q}: orbit {size} not divisible by {div}",
                    rs.cartan_type
                ));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

pub const PRIME: u64 = 1_000_003;

/// Deterministic generator for sample points.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0 >> 33
    }

    pub fn below(&mut self, m: u64) -> u64 {
        self.next() % m
    }
}

pub fn rank_mod(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let inv = kuq_pow(m[r][c], p - 2, p);
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let f = m[i][c] * inv % p;
                for j in 0..cols {
                    m[i][j] = (m[i][j] + p - f * m[r][j] % p) % p;
                }
            }
        }
        r += 1;
    }
    r
}

fn kuq_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Appending and reducing the rows of the centralizer system one at a time
/// preserves the rank of the unreduced system at random points, and the
/// pivot count equals that rank.
/// With `symbolic` the coordinates are independent indeterminates (expensive
/// beyond rank 3); otherwise small random integers.
pub fn row_reduction_preserves_rank(
    rs: &RootSystem,
    samples: usize,
    seed: u64,
    symbolic: bool,
) -> Result<usize, String> {
    let n = rs.num_positive();
    let mut rng = Lcg(seed);
    let mut checked = 0;
    for _ in 0..samples {
        let coords: Vec<Coordinate> = (0..n)
            .map(|k| match rng.below(3) {
                0 => Coordinate::zero(),
                _ if symbolic => Coordinate::var(k as Var),
                _ => Coordinate {
                    num: MPoly::int(rng.below(19) as i64 - 9),
                    den: MPoly::one(),
                },
            })
            .collect();
        let point: Vec<u64> = (0..n).map(|_| 1 + rng.below(PRIME - 1)).collect();
        let eval = |e: &MPoly| e.eval_mod(PRIME, |v| point[v as usize]).unwrap();
        let mut q = CentralizerMatrix::new();
        let mut raw: Vec<Vec<u64>> = Vec::new();
        let mut log = PrimeLog::default();
        let mut degenerate = false;
        for i in 0..n {
            let row = p_row(rs, &coords, i);
            raw.push(row.iter().map(eval).collect());
            let red = q.reduce(row, &mut log);
            let pivot = (0..n).find(|&k| !red[k].is_zero());
            if let Some(k) = pivot {
                if eval(&red[k]) == 0 {
                    degenerate = true;
                }
            }
            q.push(red, pivot);
            if degenerate {
                break;
            }
            let reduced: Vec<Vec<u64>> = q.rows.iter().map(|r| r.iter().map(eval).collect()).collect();
            let pivots = q.pivots.iter().filter(|p| p.is_some()).count();
            let r1 = rank_mod(raw.clone(), PRIME);
            let r2 = rank_mod(reduced, PRIME);
            if r1 != r2 || r1 != pivots {
                return Err(format!(
                    "{}: row {}: raw rank {r1}, reduced rank {r2}, pivots {pivots}",
                    rs.cartan_type,
                    i + 1
                ));
            }
        }
        if !degenerate {
            checked += 1;
        }
    }
    Ok(checked)
}

fn random_poly(rng: &mut Lcg, vars: u16, terms: usize) -> MPoly {
    let mut p = MPoly::zero();
    for _ in 0..terms {
        let mut t = MPoly::int(rng.below(11) as i64 - 5);
        for v in 0..vars {
            t = t.mul(&MPoly::var(v).pow(rng.below(3) as u32));
        }
        p = p.add(&t);
    }
    p
}

/// Commutative ring axioms, exact division and gcd on random samples.
pub fn ring_axioms(samples: usize, seed: u64) -> Result<(), String> {
    let mut rng = Lcg(seed);
    for _ in 0..samples {
        let a = random_poly(&mut rng, 3, 4);
        let b = random_poly(&mut rng, 3, 4);
        let c = random_poly(&mut rng, 3, 3);
        let checks = [
            ("add commutes", a.add(&b) == b.add(&a)),
            ("mul commutes", a.mul(&b) == b.mul(&a)),
            ("add associates", a.add(&b).add(&c) == a.add(&b.add(&c))),
            ("mul associates", a.mul(&b).mul(&c) == a.mul(&b.mul(&c))),
            ("distributes", a.mul(&b.add(&c)) == a.mul(&b).add(&a.mul(&c))),
            ("additive inverse", a.sub(&a).is_zero()),
            ("unit", a.mul(&MPoly::one()) == a),
            (
                "exact division",
                b.is_zero() || a.mul(&b).try_div(&b) == Some(a.clone()),
            ),
        ];
        for (name, ok) in checks {
            if !ok {
                return Err(format!("{name} fails for a = {a}, b = {b}, c = {c}"));
            }
        }
        if !a.is_zero() && !b.is_zero() && !c.is_zero() {
            let g = kuq::polyring::gcd(&a.mul(&c), &b.mul(&c));
            if !g.divides(&a.mul(&c)) || !g.divides(&b.mul(&c)) || !c.divides(&g) {
                return Err(format!("gcd fails for a = {a}, b = {b}, c = {c}"));
            }
        }
    }
    Ok(())
}
