//! Univariate polynomials and rational functions over `F_q`.

use crate::error::{Error, Result};
use crate::field::{Field, Fq};

/// Dense polynomial, coefficients from the constant term up; never has
/// trailing zeros, so the zero polynomial is the empty vector.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly(Vec<Fq>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one() -> Self {
        Poly(vec![Fq(1)])
    }

    pub fn constant(c: Fq) -> Self {
        Poly::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Poly(vec![Fq(0), Fq(1)])
    }

    /// `x - a`.
    pub fn linear(f: &Field, a: Fq) -> Self {
        Poly(vec![f.neg(a), Fq(1)])
    }

    pub fn new(mut c: Vec<Fq>) -> Self {
        while c.last() == Some(&Fq(0)) {
            c.pop();
        }
        Poly(c)
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> Fq {
        self.0.get(i).copied().unwrap_or(Fq(0))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn deg(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lc(&self) -> Fq {
        self.0.last().copied().unwrap_or(Fq(0))
    }

    pub fn is_monic(&self) -> bool {
        self.lc() == Fq(1)
    }

    pub fn add(&self, o: &Poly, f: &Field) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Poly, f: &Field) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|i| f.sub(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn neg(&self, f: &Field) -> Poly {
        Poly(self.0.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn scale(&self, c: Fq, f: &Field) -> Poly {
        Poly::new(self.0.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, o: &Poly, f: &Field) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Fq(0); self.0.len() + o.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a == Fq(0) {
                continue;
            }
            for (j, &b) in o.0.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(out)
    }

    pub fn divrem(&self, d: &Poly, f: &Field) -> Result<(Poly, Poly)> {
        let dd = d.deg().ok_or(Error::DivisionByZero)?;
        let inv = f.inv(d.lc())?;
        let mut r = self.0.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quo = vec![Fq(0); r.len() - dd];
        for top in (dd..r.len()).rev() {
            let c = f.mul(r[top], inv);
            if c == Fq(0) {
                continue;
            }
            quo[top - dd] = c;
            for (i, &dc) in d.0.iter().enumerate() {
                let idx = top - dd + i;
                r[idx] = f.sub(r[idx], f.mul(c, dc));
            }
        }
        Ok((Poly::new(quo), Poly::new(r)))
    }

    /// Exact division; the caller guarantees `d | self`.
    pub fn div_exact(&self, d: &Poly, f: &Field) -> Poly {
        let (q, r) = self.divrem(d, f).expect("nonzero divisor");
        debug_assert!(r.is_zero());
        q
    }

    pub fn monic(&self, f: &Field) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = f.inv(self.lc()).expect("nonzero leading coefficient");
        self.scale(inv, f)
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, o: &Poly, f: &Field) -> Poly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b, f).expect("nonzero");
            a = b;
            b = r;
        }
        a.monic(f)
    }

    pub fn eval(&self, x: Fq, f: &Field) -> Fq {
        self.0
            .iter()
            .rev()
            .fold(Fq(0), |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Multiplicity of `a` as a root.
    pub fn root_multiplicity(&self, a: Fq, f: &Field) -> usize {
        assert!(!self.is_zero(), "zero polynomial has every root");
        let mut m = 0;
        let mut cur = self.clone();
        loop {
            // synthetic division by (x - a)
            let n = cur.0.len();
            let mut quo = vec![Fq(0); n.saturating_sub(1)];
            let mut acc = Fq(0);
            for i in (0..n).rev() {
                acc = f.add(f.mul(acc, a), cur.0[i]);
                if i > 0 {
                    quo[i - 1] = acc;
                }
            }
            if acc != Fq(0) {
                return m;
            }
            m += 1;
            cur = Poly::new(quo);
        }
    }

    /// Distinct roots in `F_q`, in code order. Brute force over the field.
    pub fn roots(&self, f: &Field) -> Vec<Fq> {
        match self.deg() {
            None | Some(0) => Vec::new(),
            Some(_) => f.elements().filter(|&a| self.eval(a, f) == Fq(0)).collect(),
        }
    }
}

/// Rational function `num / den` in lowest terms with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatFunc { num: Poly::one(), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn new(num: Poly, den: Poly, f: &Field) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc::zero());
        }
        let g = num.gcd(&den, f);
        let num = num.div_exact(&g, f);
        let den = den.div_exact(&g, f);
        let c = f.inv(den.lc())?;
        Ok(RatFunc { num: num.scale(c, f), den: den.scale(c, f) })
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `deg num - deg den`; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        let dn = self.num.deg()? as i64;
        Some(dn - self.den.deg().unwrap_or(0) as i64)
    }

    pub fn add(&self, o: &RatFunc, f: &Field) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let num = self.num.mul(&o.den, f).add(&o.num.mul(&self.den, f), f);
        RatFunc::new(num, self.den.mul(&o.den, f), f).expect("nonzero denominator")
    }

    pub fn neg(&self, f: &Field) -> RatFunc {
        RatFunc { num: self.num.neg(f), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFunc, f: &Field) -> RatFunc {
        self.add(&o.neg(f), f)
    }

    pub fn mul(&self, o: &RatFunc, f: &Field) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::new(self.num.mul(&o.num, f), self.den.mul(&o.den, f), f)
            .expect("nonzero denominator")
    }

    pub fn mul_poly(&self, p: &Poly, f: &Field) -> RatFunc {
        self.mul(&RatFunc::from_poly(p.clone()), f)
    }

    pub fn inv(&self, f: &Field) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFunc::new(self.den.clone(), self.num.clone(), f)
    }

    pub fn div(&self, o: &RatFunc, f: &Field) -> Result<RatFunc> {
        Ok(self.mul(&o.inv(f)?, f))
    }

    pub fn scale(&self, c: Fq, f: &Field) -> RatFunc {
        RatFunc::new(self.num.scale(c, f), self.den.clone(), f).expect("nonzero denominator")
    }

    /// Value at `x = a`, `None` at a pole.
    pub fn eval(&self, a: Fq, f: &Field) -> Option<Fq> {
        let d = self.den.eval(a, f);
        if d == Fq(0) {
            return None;
        }
        Some(f.div(self.num.eval(a, f), d).expect("nonzero"))
    }
}
