#![allow(dead_code)]

use atiyah::funcs::{miller_build, CurveFunction};
use atiyah::{field_make, Curve, CurvePoint, Divisor, Field, Fq, Limits, Poly, RatFunc};
use rand::Rng;

pub struct Named {
    pub name: &'static str,
    pub curve: Curve,
}

/// Smooth curves over F_2, F_3, F_4, F_5, F_7, F_11, F_13.
pub fn corpus() -> Vec<Named> {
    let fp = |p| Field::prime(p).unwrap();
    let f4 = Field::new(field_make(2, 2, None).unwrap()).unwrap();
    let w = f4.from_coeffs(&[0, 1]).unwrap();
    let mk = |name, f: &Field, a| Named { name, curve: Curve::from_ints(f, a).unwrap() };
    vec![
        mk("y^2 = x^3 + x + 1 / F5", &fp(5), [0, 0, 0, 1, 1]),
        mk("y^2 = x^3 + 3x / F7", &fp(7), [0, 0, 0, 3, 0]),
        mk("y^2 = x^3 + x / F11", &fp(11), [0, 0, 0, 1, 0]),
        mk("y^2 = x^3 + x + 3 / F11", &fp(11), [0, 0, 0, 1, 3]),
        mk("y^2 = x^3 + 2x + 1 / F13", &fp(13), [0, 0, 0, 2, 1]),
        mk("y^2 = x^3 + x / F13", &fp(13), [0, 0, 0, 1, 0]),
        mk("y^2 = x^3 + 2x + 1 / F3", &fp(3), [0, 0, 0, 2, 1]),
        mk("y^2 + y = x^3 + x / F2", &fp(2), [0, 0, 1, 1, 0]),
        mk("y^2 + y = x^3 / F4", &f4, [0, 0, 1, 0, 0]),
        Named {
            name: "y^2 + xy = x^3 + w / F4",
            curve: Curve::new(&f4, [Fq(1), Fq(0), Fq(0), Fq(0), w]).unwrap(),
        },
        mk("y^2 + xy + 3y = x^3 + 2x^2 + x + 1 / F5", &fp(5), [1, 2, 3, 1, 1]),
    ]
}

pub fn points(c: &Curve) -> Vec<CurvePoint> {
    c.enumerate_points(Limits::default().field_cap).unwrap()
}

pub fn affine(c: &Curve) -> Vec<CurvePoint> {
    points(c).into_iter().skip(1).collect()
}

pub fn random_poly(rng: &mut impl Rng, f: &Field, deg: usize) -> Poly {
    Poly::new((0..=deg).map(|_| Fq(rng.gen_range(0..f.q() as u32))).collect())
}

/// `(a + b y) / d` with small random degrees; never zero.
pub fn random_function(rng: &mut impl Rng, c: &Curve) -> CurveFunction {
    let f = c.field();
    loop {
        let (da, db, dd) = (rng.gen_range(0..4), rng.gen_range(0..3), rng.gen_range(0..3));
        let a = random_poly(rng, f, da);
        let b = random_poly(rng, f, db);
        let mut den = random_poly(rng, f, dd);
        if den.is_zero() {
            den = Poly::one();
        }
        let inv = RatFunc::new(Poly::one(), den, f).unwrap();
        let g = CurveFunction::from_parts(RatFunc::from_poly(a).mul(&inv, f), RatFunc::from_poly(b).mul(&inv, f));
        if !g.is_zero() {
            return g;
        }
    }
}

/// A random principal divisor: random points, closed off by `-S` and `O`.
pub fn random_principal(rng: &mut impl Rng, c: &Curve) -> Divisor {
    let pts = points(c);
    let mut d = Divisor::zero();
    for _ in 0..rng.gen_range(1..5) {
        d.add_point(pts[rng.gen_range(0..pts.len())], rng.gen_range(-2..3));
    }
    let s = c.divisor_sum(&d);
    d.add_point(c.neg_point(&s).unwrap(), 1);
    let deg = d.degree();
    d.add_point(CurvePoint::Infinity, -deg);
    d
}

pub fn random_miller(rng: &mut impl Rng, c: &Curve) -> (Divisor, CurveFunction) {
    let d = random_principal(rng, c);
    let g = miller_build(c, &d).unwrap();
    (d, g)
}
