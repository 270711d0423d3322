//! Rational functions on a curve, written uniquely as `u(x) + v(x) y`.
//!
//! With `h = a1 x + a3` and `f = x^3 + a2 x^2 + a4 x + a6` the curve is
//! `y^2 = f - h y`, and conjugation `y -> -y - h` is the hyperelliptic
//! involution; `A * conj(A)` is the norm `u^2 - h u v - f v^2 in F_q(x)`.

use crate::curve::{Curve, CurvePoint, Divisor};
use crate::error::{Error, Result};
use crate::field::{Field, Fq};
use crate::poly::{Poly, RatFunc};
use crate::series::Series;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CurveFunction {
    u: RatFunc,
    v: RatFunc,
}

impl CurveFunction {
    pub fn zero() -> Self {
        CurveFunction { u: RatFunc::zero(), v: RatFunc::zero() }
    }

    pub fn one() -> Self {
        CurveFunction { u: RatFunc::one(), v: RatFunc::zero() }
    }

    pub fn constant(c: Fq) -> Self {
        CurveFunction::from_polys(Poly::constant(c), Poly::zero())
    }

    pub fn x() -> Self {
        CurveFunction::from_polys(Poly::x(), Poly::zero())
    }

    pub fn y() -> Self {
        CurveFunction::from_polys(Poly::zero(), Poly::one())
    }

    pub fn from_parts(u: RatFunc, v: RatFunc) -> Self {
        CurveFunction { u, v }
    }

    /// `a(x) + b(x) y`.
    pub fn from_polys(a: Poly, b: Poly) -> Self {
        CurveFunction { u: RatFunc::from_poly(a), v: RatFunc::from_poly(b) }
    }

    /// The monomial `x^i y^j`, `j` in {0, 1}.
    pub fn monomial(i: usize, j: usize) -> Self {
        let mut c = vec![Fq(0); i + 1];
        c[i] = Fq(1);
        let p = Poly::new(c);
        if j == 0 {
            CurveFunction::from_polys(p, Poly::zero())
        } else {
            CurveFunction::from_polys(Poly::zero(), p)
        }
    }

    pub fn u(&self) -> &RatFunc {
        &self.u
    }

    pub fn v(&self) -> &RatFunc {
        &self.v
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn add(&self, o: &Self, c: &Curve) -> Self {
        let f = c.field();
        CurveFunction { u: self.u.add(&o.u, f), v: self.v.add(&o.v, f) }
    }

    pub fn neg(&self, c: &Curve) -> Self {
        let f = c.field();
        CurveFunction { u: self.u.neg(f), v: self.v.neg(f) }
    }

    pub fn sub(&self, o: &Self, c: &Curve) -> Self {
        self.add(&o.neg(c), c)
    }

    pub fn scale(&self, k: Fq, c: &Curve) -> Self {
        let f = c.field();
        CurveFunction { u: self.u.scale(k, f), v: self.v.scale(k, f) }
    }

    pub fn mul(&self, o: &Self, c: &Curve) -> Self {
        let f = c.field();
        let (h, fx) = (RatFunc::from_poly(c.h_poly()), RatFunc::from_poly(c.f_poly()));
        let vv = self.v.mul(&o.v, f);
        let u = self.u.mul(&o.u, f).add(&vv.mul(&fx, f), f);
        let v = self.u.mul(&o.v, f).add(&o.u.mul(&self.v, f), f).sub(&vv.mul(&h, f), f);
        CurveFunction { u, v }
    }

    /// Image under `y -> -y - h`.
    pub fn conj(&self, c: &Curve) -> Self {
        let f = c.field();
        let h = RatFunc::from_poly(c.h_poly());
        CurveFunction { u: self.u.sub(&self.v.mul(&h, f), f), v: self.v.neg(f) }
    }

    pub fn norm(&self, c: &Curve) -> RatFunc {
        let f = c.field();
        let (h, fx) = (RatFunc::from_poly(c.h_poly()), RatFunc::from_poly(c.f_poly()));
        let uu = self.u.mul(&self.u, f);
        let huv = h.mul(&self.u, f).mul(&self.v, f);
        let fvv = fx.mul(&self.v, f).mul(&self.v, f);
        uu.sub(&huv, f).sub(&fvv, f)
    }

    pub fn inv(&self, c: &Curve) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = c.field();
        let n = self.norm(c).inv(f)?;
        let cj = self.conj(c);
        Ok(CurveFunction { u: cj.u.mul(&n, f), v: cj.v.mul(&n, f) })
    }

    pub fn div(&self, o: &Self, c: &Curve) -> Result<Self> {
        Ok(self.mul(&o.inv(c)?, c))
    }

    /// `(a, b, B)` with `self = (a + b y) / B`, `B` monic.
    pub fn polynomial_form(&self, f: &Field) -> (Poly, Poly, Poly) {
        let g = self.u.den().gcd(self.v.den(), f);
        let big = self.u.den().mul(self.v.den(), f).div_exact(&g, f);
        let a = self.u.num().mul(&big.div_exact(self.u.den(), f), f);
        let b = self.v.num().mul(&big.div_exact(self.v.den(), f), f);
        (a, b, big)
    }

    /// Human-readable form, e.g. `x^2 + 1 + 3*y` or `(x + 2)*y`.
    pub fn display(&self, f: &Field) -> String {
        let show = |r: &RatFunc| {
            let n = poly_display(r.num(), f);
            if r.den().deg() == Some(0) {
                n
            } else {
                format!("({n})/({})", poly_display(r.den(), f))
            }
        };
        let with_y = |r: &RatFunc| match show(r) {
            s if s == "1" => "y".to_string(),
            s if s.contains(' ') || s.contains('/') => format!("({s})*y"),
            s => format!("{s}*y"),
        };
        match (self.u.is_zero(), self.v.is_zero()) {
            (true, true) => "0".into(),
            (false, true) => show(&self.u),
            (true, false) => with_y(&self.v),
            (false, false) => format!("{} + {}", show(&self.u), with_y(&self.v)),
        }
    }
}

fn poly_display(p: &Poly, f: &Field) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut terms = Vec::new();
    for (i, &c) in p.coeffs().iter().enumerate().rev() {
        if c == Fq(0) {
            continue;
        }
        let cs = f.display(c);
        let cs = if f.k() > 1 { format!("({cs})") } else { cs };
        terms.push(match (i, c == Fq(1)) {
            (0, _) => cs,
            (1, true) => "x".into(),
            (1, false) => format!("{cs}*x"),
            (_, true) => format!("x^{i}"),
            (_, false) => format!("{cs}*x^{i}"),
        });
    }
    terms.join(" + ")
}

fn poly_norm(a: &Poly, b: &Poly, c: &Curve) -> Poly {
    let f = c.field();
    let h = c.h_poly();
    a.mul(a, f).sub(&h.mul(a, f).mul(b, f), f).sub(&c.f_poly().mul(b, f).mul(b, f), f)
}

/// Multiplicity of `x0` as a root, with the zero polynomial as `None`.
fn mult(p: &Poly, x0: Fq, f: &Field) -> Option<usize> {
    (!p.is_zero()).then(|| p.root_multiplicity(x0, f))
}

fn divide_out(p: &Poly, x0: Fq, s: usize, f: &Field) -> Poly {
    let lin = Poly::linear(f, x0);
    (0..s).fold(p.clone(), |acc, _| acc.div_exact(&lin, f))
}

/// Valuation at `P`, computed algebraically from norms.
pub fn ord_at(c: &Curve, func: &CurveFunction, p: &CurvePoint) -> Result<i64> {
    if !c.contains(p) {
        return Err(Error::not_on_curve(p));
    }
    if func.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let f = c.field();
    match *p {
        CurvePoint::Infinity => {
            let du = func.u.degree().map(|d| -2 * d);
            let dv = func.v.degree().map(|d| -2 * d - 3);
            Ok(match (du, dv) {
                (Some(a), Some(b)) => a.min(b),
                (Some(a), None) | (None, Some(a)) => a,
                (None, None) => unreachable!(),
            })
        }
        CurvePoint::Affine(x0, y0) => {
            let (a, b, big) = func.polynomial_form(f);
            let e: i64 = if c.is_two_torsion(p) { 2 } else { 1 };
            let s = match (mult(&a, x0, f), mult(&b, x0, f)) {
                (Some(i), Some(j)) => i.min(j),
                (Some(i), None) | (None, Some(i)) => i,
                (None, None) => unreachable!(),
            };
            let a1 = divide_out(&a, x0, s, f);
            let b1 = divide_out(&b, x0, s, f);
            let val = f.add(a1.eval(x0, f), f.mul(b1.eval(x0, f), y0));
            let rest = if val != Fq(0) {
                0
            } else {
                poly_norm(&a1, &b1, c).root_multiplicity(x0, f) as i64
            };
            let pole = big.root_multiplicity(x0, f) as i64;
            Ok(e * s as i64 + rest - e * pole)
        }
    }
}

/// Local expansion of a function at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    pub center: CurvePoint,
    /// `x/y` at `O`, `x - x0` at ordinary points, `y - y0` at 2-torsion.
    pub uniformizer: String,
    pub leading_exponent: i64,
    /// Coefficients of `t^leading_exponent, ..., t^(precision - 1)`.
    pub coeffs: Vec<Fq>,
    pub precision: i64,
}

impl LaurentSeries {
    pub fn coeff(&self, e: i64) -> Option<Fq> {
        if e >= self.precision {
            None
        } else if e < self.leading_exponent {
            Some(Fq(0))
        } else {
            Some(self.coeffs[(e - self.leading_exponent) as usize])
        }
    }
}

fn fixed_point(mut s: Series, iters: i64, step: impl Fn(&Series) -> Series) -> Series {
    for _ in 0..=iters {
        let next = step(&s);
        if next == s {
            break;
        }
        s = next;
    }
    s
}

/// Expansions of `x` and `y` in the local uniformizer at `P`, each known
/// to absolute precision at least `w`.
pub fn local_coordinates(c: &Curve, p: &CurvePoint, w: i64) -> Result<(Series, Series)> {
    if !c.contains(p) {
        return Err(Error::not_on_curve(p));
    }
    let f = c.field();
    let [a1, a2, a3, a4, a6] = c.coefficients();
    match *p {
        CurvePoint::Infinity => {
            // s = 1/y solves s = t^3 - a1 t s + a2 t^2 s - a3 s^2 + a4 t s^2 + a6 s^3
            let ps = w.max(1) + 6;
            let t = Series::monomial(Fq(1), 1, ps);
            let t2 = t.mul(&t, f);
            let t3 = t2.mul(&t, f);
            let s = fixed_point(Series::zero(ps), ps, |s| {
                let s2 = s.mul(s, f);
                let s3 = s2.mul(s, f);
                let mut r = t3.clone();
                r = r.sub(&t.mul(s, f).scale(a1, f), f);
                r = r.add(&t2.mul(s, f).scale(a2, f), f);
                r = r.sub(&s2.scale(a3, f), f);
                r = r.add(&t.mul(&s2, f).scale(a4, f), f);
                r = r.add(&s3.scale(a6, f), f);
                r.truncate(ps)
            });
            let y = s.inv(f).expect("s has valuation 3");
            let x = y.shift(1);
            Ok((x, y))
        }
        CurvePoint::Affine(x0, y0) if !c.is_two_torsion(p) => {
            let w = w.max(1);
            let x = Series::constant(x0, w).add(&Series::monomial(Fq(1), 1, w), f);
            let fx = x.compose_poly(&c.f_poly(), f);
            let hx = x.compose_poly(&c.h_poly(), f);
            // F(x, y0) + eta D + eta^2 = 0, D = 2 y0 + h(x)
            let g0 = hx.scale(y0, f).add_const(f.mul(y0, y0), f).sub(&fx, f);
            let d = hx.add_const(f.mul(f.from_int(2), y0), f);
            let dinv = d.inv(f).expect("not 2-torsion");
            let eta = fixed_point(Series::zero(w), w, |eta| {
                g0.add(&eta.mul(eta, f), f).mul(&dinv, f).neg(f).truncate(w)
            });
            Ok((x, eta.add_const(y0, f)))
        }
        CurvePoint::Affine(x0, y0) => {
            let w = w.max(1);
            let y = Series::constant(y0, w).add(&Series::monomial(Fq(1), 1, w), f);
            let fx0 = c.f_poly().eval(x0, f);
            let dfx0 = f.add(
                f.add(f.mul(f.from_int(3), f.mul(x0, x0)), f.mul(f.from_int(2), f.mul(a2, x0))),
                a4,
            );
            // g0 + g1 xi - (3 x0 + a2) xi^2 - xi^3 = 0
            let g0 = y.mul(&y, f).add(&y.scale(f.add(f.mul(a1, x0), a3), f), f).add_const(f.neg(fx0), f);
            let g1 = y.scale(a1, f).add_const(f.neg(dfx0), f);
            let g1inv = g1.inv(f).expect("smooth point");
            let k2 = f.add(f.mul(f.from_int(3), x0), a2);
            let xi = fixed_point(Series::zero(w), w, |xi| {
                let xi2 = xi.mul(xi, f);
                let xi3 = xi2.mul(xi, f);
                g0.sub(&xi2.scale(k2, f), f).sub(&xi3, f).mul(&g1inv, f).neg(f).truncate(w)
            });
            Ok((xi.add_const(x0, f), y))
        }
    }
}

fn uniformizer_name(c: &Curve, p: &CurvePoint) -> String {
    let f = c.field();
    match *p {
        CurvePoint::Infinity => "x/y".into(),
        CurvePoint::Affine(x0, _) if !c.is_two_torsion(p) => format!("x - {}", f.display(x0)),
        CurvePoint::Affine(_, y0) => format!("y - {}", f.display(y0)),
    }
}

/// Local parameter at `p`: `x/y` at `O`, `x - x_P` at an ordinary point,
/// `y - y_P` where the vertical line is tangent.
pub fn uniformizer_at(c: &Curve, p: &CurvePoint) -> Result<CurveFunction> {
    if !c.contains(p) {
        return Err(Error::not_on_curve(p));
    }
    Ok(match *p {
        CurvePoint::Infinity => CurveFunction::x().div(&CurveFunction::y(), c)?,
        CurvePoint::Affine(x0, _) if !c.is_two_torsion(p) => CurveFunction::x().sub(&CurveFunction::constant(x0), c),
        CurvePoint::Affine(_, y0) => CurveFunction::y().sub(&CurveFunction::constant(y0), c),
    })
}

fn rat_series(r: &RatFunc, x: &Series, f: &Field) -> Option<Series> {
    if r.is_zero() {
        return Some(Series::zero(i64::MAX / 4));
    }
    let n = x.compose_poly(r.num(), f);
    let d = x.compose_poly(r.den(), f);
    Some(n.mul(&d.inv(f)?, f))
}

fn eval_series(c: &Curve, func: &CurveFunction, x: &Series, y: &Series) -> Option<Series> {
    let f = c.field();
    let u = rat_series(&func.u, x, f)?;
    let v = rat_series(&func.v, x, f)?;
    let vy = if func.v.is_zero() { v } else { v.mul(y, f) };
    Some(if func.u.is_zero() { vy } else if func.v.is_zero() { u } else { u.add(&vy, f) })
}

/// Laurent expansion of `func` at `P` with every coefficient below
/// `prec` certified. Working precision grows until that holds.
pub fn expand_at(c: &Curve, func: &CurveFunction, p: &CurvePoint, prec: i64) -> Result<LaurentSeries> {
    let ord = ord_at(c, func, p)?;
    if prec <= ord {
        return Err(Error::PrecisionTooLow { requested: prec });
    }
    let mut extra = 8 + (prec - ord);
    for _ in 0..24 {
        let (x, y) = local_coordinates(c, p, prec + extra)?;
        if let Some(s) = eval_series(c, func, &x, &y) {
            if s.prec() >= prec && !s.is_zero() {
                debug_assert_eq!(s.val(), ord);
                let s = s.truncate(prec);
                return Ok(LaurentSeries {
                    center: *p,
                    uniformizer: uniformizer_name(c, p),
                    leading_exponent: s.val(),
                    coeffs: s.coeffs().to_vec(),
                    precision: prec,
                });
            }
        }
        extra *= 2;
    }
    Err(Error::PrecisionTooLow { requested: prec })
}

/// Value at `P`; `PoleAtPoint` when `ord_P < 0`.
pub fn func_eval(c: &Curve, func: &CurveFunction, p: &CurvePoint) -> Result<Fq> {
    if !c.contains(p) {
        return Err(Error::not_on_curve(p));
    }
    if func.is_zero() {
        return Ok(Fq(0));
    }
    let ord = ord_at(c, func, p)?;
    if ord < 0 {
        return Err(Error::PoleAtPoint(format!("{p:?}")));
    }
    if ord > 0 {
        return Ok(Fq(0));
    }
    let f = c.field();
    if let CurvePoint::Affine(x0, y0) = *p {
        if let (Some(u), Some(v)) = (func.u.eval(x0, f), func.v.eval(x0, f)) {
            return Ok(f.add(u, f.mul(v, y0)));
        }
    }
    Ok(expand_at(c, func, p, 1)?.coeff(0).expect("certified"))
}

/// Rational part of `div(func)` and the residual degree carried by
/// closed points of degree > 1 (so the rational part has degree `-residual`).
pub fn divisor_of(c: &Curve, func: &CurveFunction) -> Result<(Divisor, i64)> {
    if func.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let f = c.field();
    let (a, b, big) = func.polynomial_form(f);
    let n = poly_norm(&a, &b, c);
    let mut xs = n.roots(f);
    xs.extend(big.roots(f));
    xs.sort();
    xs.dedup();
    let mut d = Divisor::zero();
    d.add_point(CurvePoint::Infinity, ord_at(c, func, &CurvePoint::Infinity)?);
    for x0 in xs {
        for p in c.points_over(x0)? {
            d.add_point(p, ord_at(c, func, &p)?);
        }
    }
    let residual = -d.degree();
    Ok((d, residual))
}

/// `l_{S,R} / v_{S+R}`, whose divisor is `(S) + (R) - (S+R) - (O)`.
fn line_ratio(c: &Curve, s: &CurvePoint, r: &CurvePoint) -> CurveFunction {
    let f = c.field();
    let (x1, y1, x2, y2) = match (*s, *r) {
        (CurvePoint::Affine(x1, y1), CurvePoint::Affine(x2, y2)) => (x1, y1, x2, y2),
        _ => return CurveFunction::one(),
    };
    let sum = c.add_unchecked(s, r);
    let CurvePoint::Affine(x3, _) = sum else {
        return CurveFunction::from_polys(Poly::linear(f, x1), Poly::zero());
    };
    let lambda = if x1 != x2 {
        f.div(f.sub(y2, y1), f.sub(x2, x1)).expect("distinct x")
    } else {
        f.div(f.neg(c.partial_x(x1, y1)), c.partial_y(x1, y1)).expect("not 2-torsion")
    };
    let nu = f.sub(y1, f.mul(lambda, x1));
    // y - lambda x - nu
    let line = CurveFunction::from_polys(Poly::new(vec![f.neg(nu), f.neg(lambda)]), Poly::one());
    let vert = RatFunc::from_poly(Poly::linear(f, x3)).inv(f).expect("nonzero");
    CurveFunction::from_parts(line.u.mul(&vert, f), line.v.mul(&vert, f))
}

/// Leading coefficient of the expansion at `O` in `t = x/y`.
fn leading_at_infinity(func: &CurveFunction) -> Fq {
    let du = func.u.degree().map(|d| -2 * d);
    let dv = func.v.degree().map(|d| -2 * d - 3);
    // den is monic, so the leading coefficient is that of the numerator;
    // x = t^-2 (1 + ...), y = t^-3 (1 + ...) contribute 1
    match (du, dv) {
        (Some(a), Some(b)) if a < b => func.u.num().lc(),
        (Some(_), None) => func.u.num().lc(),
        (_, Some(_)) => func.v.num().lc(),
        (None, None) => Fq(0),
    }
}

/// A function with divisor exactly `D`, normalized to leading coefficient 1 at `O`.
pub fn miller_build(c: &Curve, d: &Divisor) -> Result<CurveFunction> {
    if !c.is_principal(d)? {
        return Err(Error::NotPrincipal);
    }
    let f = c.field();
    let mut acc = CurveFunction::one();
    let mut s = CurvePoint::Infinity;
    for (p, n) in d.iter() {
        if p.is_infinity() {
            continue;
        }
        for _ in 0..n.unsigned_abs() {
            if n > 0 {
                acc = acc.mul(&line_ratio(c, &s, p), c);
                s = c.add_unchecked(&s, p);
            } else {
                let np = c.neg_point(p)?;
                acc = acc.mul(&line_ratio(c, &s, &np), c);
                s = c.add_unchecked(&s, &np);
                let CurvePoint::Affine(xp, _) = *p else { unreachable!() };
                let vert = CurveFunction::from_polys(Poly::linear(f, xp), Poly::zero());
                acc = acc.div(&vert, c)?;
            }
        }
    }
    debug_assert!(s.is_infinity());
    let lc = leading_at_infinity(&acc);
    Ok(acc.scale(f.inv(lc)?, c))
}
