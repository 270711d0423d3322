//! Long-Weierstrass elliptic curves
//! `y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6` and their rational
//! points. The point at infinity `O` is the group identity and the
//! distinguished point `Q` of the bundle constructions.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement, FieldSpec, Fq};
use crate::poly::Poly;

/// A rational point. The derived order puts `O` first and affine points
/// in code order on `(x, y)`, which is the enumeration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CurvePoint {
    Infinity,
    Affine(Fq, Fq),
}

impl CurvePoint {
    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }
}

#[derive(Clone)]
pub struct Curve {
    field: Field,
    a: [Fq; 5],
    points: Arc<OnceLock<Vec<CurvePoint>>>,
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["a1", "a2", "a3", "a4", "a6"];
        write!(f, "Curve over {:?} [", self.field)?;
        for (i, (n, c)) in names.iter().zip(self.a.iter()).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}={}", self.field.display(*c))?;
        }
        write!(f, "]")
    }
}

impl PartialEq for Curve {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.a == other.a
    }
}

impl Eq for Curve {}

/// Checked constructor from field elements `[a1, a2, a3, a4, a6]`.
pub fn curve_make(spec: &FieldSpec, coeffs: &[FieldElement; 5]) -> Result<Curve> {
    let field = Field::new(spec.clone())?;
    if coeffs.iter().any(|c| c.field() != &field) {
        return Err(Error::FieldMismatch);
    }
    Curve::new(&field, [0, 1, 2, 3, 4].map(|i| coeffs[i].raw()))
}

impl Curve {
    pub fn new(field: &Field, a: [Fq; 5]) -> Result<Self> {
        let c = Curve { field: field.clone(), a, points: Arc::new(OnceLock::new()) };
        if c.discriminant() == Fq(0) {
            return Err(Error::SingularCurve);
        }
        Ok(c)
    }

    /// Convenience constructor from integer coefficients (prime subfield).
    pub fn from_ints(field: &Field, a: [i64; 5]) -> Result<Self> {
        Curve::new(field, a.map(|v| field.from_int(v)))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// `[a1, a2, a3, a4, a6]`.
    pub fn coefficients(&self) -> [Fq; 5] {
        self.a
    }

    pub fn a1(&self) -> Fq {
        self.a[0]
    }
    pub fn a2(&self) -> Fq {
        self.a[1]
    }
    pub fn a3(&self) -> Fq {
        self.a[2]
    }
    pub fn a4(&self) -> Fq {
        self.a[3]
    }
    pub fn a6(&self) -> Fq {
        self.a[4]
    }

    /// `h(x) = a1 x + a3`, so the curve reads `y^2 + h y = f`.
    pub fn h_poly(&self) -> Poly {
        Poly::new(vec![self.a3(), self.a1()])
    }

    /// `f(x) = x^3 + a2 x^2 + a4 x + a6`.
    pub fn f_poly(&self) -> Poly {
        Poly::new(vec![self.a6(), self.a4(), self.a2(), Fq(1)])
    }

    pub fn b_invariants(&self) -> [Fq; 4] {
        let f = &self.field;
        let [a1, a2, a3, a4, a6] = self.a;
        let n = |v| f.from_int(v);
        let b2 = f.add(f.mul(a1, a1), f.mul(n(4), a2));
        let b4 = f.add(f.mul(n(2), a4), f.mul(a1, a3));
        let b6 = f.add(f.mul(a3, a3), f.mul(n(4), a6));
        let b8 = {
            let t1 = f.mul(f.mul(a1, a1), a6);
            let t2 = f.mul(n(4), f.mul(a2, a6));
            let t3 = f.mul(a1, f.mul(a3, a4));
            let t4 = f.mul(a2, f.mul(a3, a3));
            let t5 = f.mul(a4, a4);
            f.sub(f.add(f.sub(f.add(t1, t2), t3), t4), t5)
        };
        [b2, b4, b6, b8]
    }

    pub fn discriminant(&self) -> Fq {
        let f = &self.field;
        let [b2, b4, b6, b8] = self.b_invariants();
        let n = |v| f.from_int(v);
        let t1 = f.neg(f.mul(f.mul(b2, b2), b8));
        let t2 = f.mul(n(8), f.pow(b4, 3));
        let t3 = f.mul(n(27), f.mul(b6, b6));
        let t4 = f.mul(n(9), f.mul(b2, f.mul(b4, b6)));
        f.add(f.sub(f.sub(t1, t2), t3), t4)
    }

    /// `F(x, y) = y^2 + a1 x y + a3 y - x^3 - a2 x^2 - a4 x - a6`.
    pub fn equation(&self, x: Fq, y: Fq) -> Fq {
        let f = &self.field;
        let lhs = f.add(f.mul(y, y), f.mul(y, f.add(f.mul(self.a1(), x), self.a3())));
        f.sub(lhs, self.f_poly().eval(x, f))
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        match *p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine(x, y) => self.equation(x, y) == Fq(0),
        }
    }

    fn check(&self, p: &CurvePoint) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::not_on_curve(p))
        }
    }

    /// Affine point from coordinates, validated.
    pub fn point(&self, x: Fq, y: Fq) -> Result<CurvePoint> {
        let p = CurvePoint::Affine(x, y);
        self.check(&p)?;
        Ok(p)
    }

    /// `2y + a1 x + a3`; vanishes exactly at the affine 2-torsion points.
    pub fn partial_y(&self, x: Fq, y: Fq) -> Fq {
        let f = &self.field;
        f.add(f.add(f.mul(f.from_int(2), y), f.mul(self.a1(), x)), self.a3())
    }

    /// `a1 y - 3x^2 - 2 a2 x - a4`.
    pub fn partial_x(&self, x: Fq, y: Fq) -> Fq {
        let f = &self.field;
        let d = f.add(
            f.add(f.mul(f.from_int(3), f.mul(x, x)), f.mul(f.from_int(2), f.mul(self.a2(), x))),
            self.a4(),
        );
        f.sub(f.mul(self.a1(), y), d)
    }

    pub fn is_two_torsion(&self, p: &CurvePoint) -> bool {
        match *p {
            CurvePoint::Infinity => false,
            CurvePoint::Affine(x, y) => self.partial_y(x, y) == Fq(0),
        }
    }

    fn neg_unchecked(&self, p: &CurvePoint) -> CurvePoint {
        let f = &self.field;
        match *p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => {
                CurvePoint::Affine(x, f.sub(f.neg(y), f.add(f.mul(self.a1(), x), self.a3())))
            }
        }
    }

    /// `-(x, y) = (x, -y - a1 x - a3)`.
    pub fn neg_point(&self, p: &CurvePoint) -> Result<CurvePoint> {
        self.check(p)?;
        Ok(self.neg_unchecked(p))
    }

    pub(crate) fn add_unchecked(&self, p: &CurvePoint, r: &CurvePoint) -> CurvePoint {
        let f = &self.field;
        let (x1, y1, x2, y2) = match (*p, *r) {
            (CurvePoint::Infinity, _) => return *r,
            (_, CurvePoint::Infinity) => return *p,
            (CurvePoint::Affine(x1, y1), CurvePoint::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let lambda = if x1 != x2 {
            f.div(f.sub(y2, y1), f.sub(x2, x1)).expect("distinct x")
        } else {
            if f.add(f.add(y1, y2), f.add(f.mul(self.a1(), x2), self.a3())) == Fq(0) {
                return CurvePoint::Infinity;
            }
            let den = self.partial_y(x1, y1);
            let num = f.neg(self.partial_x(x1, y1));
            f.div(num, den).expect("not 2-torsion")
        };
        let nu = f.sub(y1, f.mul(lambda, x1));
        let x3 = f.sub(
            f.sub(f.add(f.mul(lambda, lambda), f.mul(self.a1(), lambda)), self.a2()),
            f.add(x1, x2),
        );
        let y3 = f.sub(f.neg(f.mul(f.add(lambda, self.a1()), x3)), f.add(nu, self.a3()));
        CurvePoint::Affine(x3, y3)
    }

    /// Chord-tangent group law.
    pub fn add_points(&self, p: &CurvePoint, r: &CurvePoint) -> Result<CurvePoint> {
        self.check(p)?;
        self.check(r)?;
        Ok(self.add_unchecked(p, r))
    }

    pub(crate) fn scalar_mul_unchecked(&self, n: i64, p: &CurvePoint) -> CurvePoint {
        let base = if n < 0 { self.neg_unchecked(p) } else { *p };
        let mut e = n.unsigned_abs();
        let mut acc = CurvePoint::Infinity;
        let mut dbl = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.add_unchecked(&acc, &dbl);
            }
            dbl = self.add_unchecked(&dbl, &dbl);
            e >>= 1;
        }
        acc
    }

    /// `[n]P`, negative `n` allowed.
    pub fn scalar_mul(&self, n: i64, p: &CurvePoint) -> Result<CurvePoint> {
        self.check(p)?;
        Ok(self.scalar_mul_unchecked(n, p))
    }

    /// The rational points over `x = x0`, in code order of `y`.
    pub fn points_over(&self, x0: Fq) -> Result<Vec<CurvePoint>> {
        let f = &self.field;
        let h = f.add(f.mul(self.a1(), x0), self.a3());
        let c = self.f_poly().eval(x0, f);
        Ok(f.quadratic_roots(h, c)?.into_iter().map(|y| CurvePoint::Affine(x0, y)).collect())
    }

    /// All rational points, `O` first, then affine points in code order.
    pub fn enumerate_points(&self, cap: u64) -> Result<Vec<CurvePoint>> {
        let q = self.field.q();
        if q > cap {
            return Err(Error::FieldTooLarge { size: q, cap });
        }
        if let Some(p) = self.points.get() {
            return Ok(p.clone());
        }
        let mut pts = vec![CurvePoint::Infinity];
        for x in self.field.elements() {
            pts.extend(self.points_over(x)?);
        }
        let _ = self.points.set(pts.clone());
        Ok(pts)
    }

    pub fn group_order(&self, cap: u64) -> Result<u64> {
        Ok(self.enumerate_points(cap)?.len() as u64)
    }

    /// Order of `P`; the smallest divisor `d` of the group order with `[d]P = O`.
    pub fn point_order(&self, p: &CurvePoint, cap: u64) -> Result<u64> {
        self.check(p)?;
        let n = self.group_order(cap)?;
        (1..=n)
            .filter(|d| n % d == 0)
            .find(|&d| self.scalar_mul_unchecked(d as i64, p).is_infinity())
            .ok_or_else(|| unreachable!("Lagrange"))
    }

    /// The criterion for rational divisors: `deg D = 0` and the weighted
    /// point sum is `O`.
    pub fn is_principal(&self, d: &Divisor) -> Result<bool> {
        for (p, _) in d.iter() {
            self.check(p)?;
        }
        Ok(d.degree() == 0 && self.divisor_sum(d).is_infinity())
    }

    /// `sum [n_i] P_i` under the group law.
    pub fn divisor_sum(&self, d: &Divisor) -> CurvePoint {
        d.iter().fold(CurvePoint::Infinity, |acc, (p, n)| {
            self.add_unchecked(&acc, &self.scalar_mul_unchecked(n, p))
        })
    }

    /// Sum of a list of points.
    pub fn sum_points(&self, pts: &[CurvePoint]) -> CurvePoint {
        pts.iter().fold(CurvePoint::Infinity, |acc, p| self.add_unchecked(&acc, p))
    }
}

/// Integer-weighted formal sum of rational points; zero weights never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Divisor(BTreeMap<CurvePoint, i64>);

impl Divisor {
    pub fn zero() -> Self {
        Divisor(BTreeMap::new())
    }

    pub fn from_pairs<I: IntoIterator<Item = (CurvePoint, i64)>>(pairs: I) -> Self {
        let mut d = Divisor::zero();
        for (p, n) in pairs {
            d.add_point(p, n);
        }
        d
    }

    pub fn point(p: CurvePoint) -> Self {
        Divisor::from_pairs([(p, 1)])
    }

    pub fn add_point(&mut self, p: CurvePoint, n: i64) {
        let e = self.0.entry(p).or_insert(0);
        *e += n;
        if *e == 0 {
            self.0.remove(&p);
        }
    }

    pub fn multiplicity(&self, p: &CurvePoint) -> i64 {
        self.0.get(p).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.0.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CurvePoint, i64)> {
        self.0.iter().map(|(p, &n)| (p, n))
    }

    pub fn plus(&self, o: &Divisor) -> Divisor {
        let mut d = self.clone();
        for (p, n) in o.iter() {
            d.add_point(*p, n);
        }
        d
    }

    pub fn negated(&self) -> Divisor {
        Divisor(self.0.iter().map(|(p, &n)| (*p, -n)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use crate::field::{field_make, DEFAULT_FIELD_CAP};

    fn f5_curve() -> Curve {
        Curve::from_ints(&Field::prime(5).unwrap(), [0, 0, 0, 1, 1]).unwrap()
    }

    /// A cubic's singular point is unique, hence rational: brute force it.
    fn has_rational_singular_point(c: &Curve) -> bool {
        let f = c.field();
        f.elements().any(|x| {
            f.elements().any(|y| {
                c.equation(x, y) == Fq(0)
                    && c.partial_x(x, y) == Fq(0)
                    && c.partial_y(x, y) == Fq(0)
            })
        })
    }

    #[test]
    fn discriminant_examples() {
        let f5 = Field::prime(5).unwrap();
        let c = f5_curve();
        // short-form oracle: -16 (4 a^3 + 27 b^2)
        assert_eq!(c.discriminant(), f5.from_int(-16 * (4 + 27)));
        assert!(!has_rational_singular_point(&c));
        assert_eq!(Curve::from_ints(&f5, [0, 0, 0, 0, 0]), Err(Error::SingularCurve));
        let f2 = Field::prime(2).unwrap();
        let c2 = Curve::from_ints(&f2, [0, 0, 1, 0, 0]).unwrap();
        assert!(!has_rational_singular_point(&c2));
        // node y^2 + xy = x^3 over F_2
        assert_eq!(Curve::from_ints(&f2, [1, 0, 0, 0, 0]), Err(Error::SingularCurve));
    }

    #[test]
    fn discriminant_matches_singular_point_search() {
        for p in [2u64, 3, 5, 7] {
            let f = Field::prime(p).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(p);
            for _ in 0..60 {
                let a: [i64; 5] = std::array::from_fn(|_| rng.gen_range(0..p as i64));
                let probe = Curve {
                    field: f.clone(),
                    a: a.map(|v| f.from_int(v)),
                    points: Arc::new(OnceLock::new()),
                };
                assert_eq!(probe.discriminant() == Fq(0), has_rational_singular_point(&probe));
            }
        }
    }

    #[test]
    fn curve_make_checks_fields() {
        let spec = field_make(5, 1, None).unwrap();
        let f5 = Field::new(spec.clone()).unwrap();
        let f7 = Field::prime(7).unwrap();
        let coeffs = [0, 0, 0, 1, 1].map(|v| f5.element(f5.from_int(v)));
        assert!(curve_make(&spec, &coeffs).is_ok());
        let bad = [0, 0, 0, 1, 1].map(|v| f7.element(f7.from_int(v)));
        assert_eq!(curve_make(&spec, &bad), Err(Error::FieldMismatch));
    }

    #[test]
    fn group_law_examples() {
        let c = f5_curve();
        let p = c.point(Fq(0), Fq(1)).unwrap();
        let np = c.point(Fq(0), Fq(4)).unwrap();
        assert_eq!(c.add_points(&p, &CurvePoint::Infinity).unwrap(), p);
        assert_eq!(c.add_points(&p, &np).unwrap(), CurvePoint::Infinity);
        let two_p = c.add_points(&p, &p).unwrap();
        assert_eq!(two_p, CurvePoint::Affine(Fq(4), Fq(2)));
        assert!(c.add_points(&p, &CurvePoint::Affine(Fq(1), Fq(1))).is_err());
    }

    #[test]
    fn tangent_doubling_oracle() {
        // third intersection of the tangent at (0,1), found by scanning all
        // points on the line, then reflected.
        let c = f5_curve();
        let f = c.field();
        let slope = f.div(f.from_int(1), f.from_int(2)).unwrap(); // (3x^2 + a4) / 2y
        let on_tangent: Vec<CurvePoint> = c
            .enumerate_points(DEFAULT_FIELD_CAP)
            .unwrap()
            .into_iter()
            .filter(|pt| match *pt {
                CurvePoint::Affine(x, y) => y == f.add(f.from_int(1), f.mul(slope, x)),
                _ => false,
            })
            .collect();
        let third = on_tangent
            .iter()
            .find(|pt| **pt != CurvePoint::Affine(Fq(0), Fq(1)))
            .expect("tangent meets the curve again");
        let reflected = c.neg_point(third).unwrap();
        assert!(c.contains(&reflected));
        assert_eq!(reflected, CurvePoint::Affine(Fq(4), Fq(2)));
    }

    #[test]
    fn enumeration_oracle() {
        let c = f5_curve();
        let f = c.field();
        let mut brute = vec![CurvePoint::Infinity];
        for x in f.elements() {
            for y in f.elements() {
                if c.equation(x, y) == Fq(0) {
                    brute.push(CurvePoint::Affine(x, y));
                }
            }
        }
        assert_eq!(brute.len(), 9);
        assert_eq!(c.enumerate_points(DEFAULT_FIELD_CAP).unwrap(), brute);
        assert_eq!(c.group_order(DEFAULT_FIELD_CAP).unwrap(), 9);
        assert_eq!(c.point_order(&CurvePoint::Infinity, DEFAULT_FIELD_CAP).unwrap(), 1);
        assert!(matches!(c.enumerate_points(4), Err(Error::FieldTooLarge { .. })));
    }

    #[test]
    fn principal_examples() {
        let c = f5_curve();
        let p = CurvePoint::Affine(Fq(0), Fq(1));
        let np = CurvePoint::Affine(Fq(0), Fq(4));
        let o = CurvePoint::Infinity;
        let vertical = Divisor::from_pairs([(p, 1), (np, 1), (o, -2)]);
        assert!(c.is_principal(&vertical).unwrap());
        let doubled = Divisor::from_pairs([(p, 2), (o, -2)]);
        assert!(!c.is_principal(&doubled).unwrap());
        let single = Divisor::from_pairs([(p, 1), (o, -1)]);
        assert!(!c.is_principal(&single).unwrap());
        let off = Divisor::from_pairs([(CurvePoint::Affine(Fq(1), Fq(1)), 1)]);
        assert!(c.is_principal(&off).is_err());
    }

    #[test]
    fn divisor_bookkeeping() {
        let p = CurvePoint::Affine(Fq(0), Fq(1));
        let mut d = Divisor::from_pairs([(p, 2), (CurvePoint::Infinity, -2)]);
        assert_eq!(d.degree(), 0);
        d.add_point(p, -2);
        assert_eq!(d, Divisor::from_pairs([(CurvePoint::Infinity, -2)]));
        assert!(d.plus(&d.negated()).is_zero());
    }
}
