//! Multivariate gcd over Q by recursive primitive polynomial remainder sequences.

use super::{MPoly, Monomial, Var};

/// Normalized gcd: integer primitive with positive leading coefficient.
/// `gcd(0, 0) = 0`.
pub fn gcd(f: &MPoly, g: &MPoly) -> MPoly {
    if f.is_zero() {
        return g.primitive_part();
    }
    if g.is_zero() {
        return f.primitive_part();
    }
    let mf = f.monomial_content();
    let mg = g.monomial_content();
    let m = mf.gcd(&mg);
    let f = f.div_monomial(&mf).expect("monomial content divides").primitive_part();
    let g = g.div_monomial(&mg).expect("monomial content divides").primitive_part();
    gcd_primitive(&f, &g).mul_monomial(&m).primitive_part()
}

pub fn gcd_many<'a, I: IntoIterator<Item = &'a MPoly>>(polys: I) -> MPoly {
    let mut acc = MPoly::zero();
    for p in polys {
        acc = gcd(&acc, p);
        if acc.is_constant() && !acc.is_zero() {
            return acc;
        }
    }
    acc
}

/// Gcd of the coefficients of `f` viewed as a polynomial in `v`.
pub fn content_in(f: &MPoly, v: Var) -> MPoly {
    gcd_many(f.coefficients_in(v).iter().filter(|c| !c.is_zero()))
}

fn main_var(f: &MPoly, g: &MPoly) -> Option<Var> {
    let a = f.vars();
    let b = g.vars();
    match (a.first(), b.first()) {
        (Some(&x), Some(&y)) => Some(x.min(y)),
        (Some(&x), None) => Some(x),
        (None, Some(&y)) => Some(y),
        (None, None) => None,
    }
}

fn gcd_primitive(f: &MPoly, g: &MPoly) -> MPoly {
    if f.is_constant() || g.is_constant() {
        return MPoly::one();
    }
    if f == g {
        return f.clone();
    }
    let Some(x) = main_var(f, g) else {
        return MPoly::one();
    };
    let cf = content_in(f, x);
    let cg = content_in(g, x);
    let c = gcd(&cf, &cg);
    let pf = f.try_div(&cf).expect("content divides");
    let pg = g.try_div(&cg).expect("content divides");
    if pf.degree_in(x) == 0 || pg.degree_in(x) == 0 {
        return c;
    }
    let (mut a, mut b) = if pf.degree_in(x) >= pg.degree_in(x) {
        (pf, pg)
    } else {
        (pg, pf)
    };
    loop {
        let r = pseudo_remainder(&a, &b, x);
        if r.is_zero() {
            break;
        }
        if r.degree_in(x) == 0 {
            b = MPoly::one();
            break;
        }
        a = b;
        let cr = content_in(&r, x);
        b = r.try_div(&cr).expect("content divides").primitive_part();
    }
    let cb = content_in(&b, x);
    let pb = b.try_div(&cb).expect("content divides");
    c.mul(&pb).primitive_part()
}

fn pseudo_remainder(a: &MPoly, b: &MPoly, x: Var) -> MPoly {
    let db = b.degree_in(x);
    let lcb = b.coefficient_in(x, db);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(x) >= db {
        let dr = r.degree_in(x);
        let lcr = r.coefficient_in(x, dr);
        let shift = Monomial::from_pairs(vec![(x, dr - db)]);
        r = r.mul(&lcb).sub(&b.mul(&lcr).mul_monomial(&shift));
        // Keep coefficients small; scaling by a nonzero rational is harmless here.
        if !r.is_zero() {
            r = r.primitive_part();
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn t(i: Var) -> MPoly {
        MPoly::var(i)
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(&t(0).mul(&t(1)), &t(0)), t(0));
        let f = t(0).pow(2).sub(&t(1).pow(2));
        let g = t(0).sub(&t(1));
        assert_eq!(gcd(&f, &g), g);
        let two = BigRational::from_integer(2.into());
        let four = BigRational::from_integer(4.into());
        let a = t(0).add(&MPoly::one()).scale(&two);
        let b = t(0).add(&MPoly::one()).scale(&four);
        let d = gcd(&a, &b);
        assert_eq!(d, t(0).add(&MPoly::one()));
        // cofactors multiply back
        assert_eq!(d.mul(&a.try_div(&d).unwrap()), a);
        assert_eq!(gcd(&MPoly::zero(), &t(2).neg()), t(2));
    }

    #[test]
    fn gcd_multivariate_common_factor() {
        let h = t(0).mul(&t(1)).sub(&t(2)).add(&MPoly::int(3));
        let f = h.mul(&t(0).add(&t(2)));
        let g = h.mul(&t(1).sub(&MPoly::int(1))).mul(&t(2));
        assert_eq!(gcd(&f, &g), h.primitive_part());
        assert!(gcd(&t(0).add(&t(1)), &t(0).sub(&t(1))).is_constant());
    }
}
