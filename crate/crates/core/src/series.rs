//! Truncated Laurent series `sum_{e >= val} c_e t^e + O(t^prec)` with
//! absolute-precision bookkeeping.

use crate::field::{Field, Fq};
use crate::poly::Poly;

/// `coeffs[i]` is the coefficient of `t^(val + i)`; known exactly for
/// exponents below `prec`. A nonzero leading coefficient is kept whenever
/// any nonzero coefficient is known; otherwise `val == prec`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    val: i64,
    coeffs: Vec<Fq>,
    prec: i64,
}

impl Series {
    /// `O(t^prec)`.
    pub fn zero(prec: i64) -> Self {
        Series { val: prec, coeffs: Vec::new(), prec }
    }

    pub fn from_coeffs(val: i64, coeffs: Vec<Fq>, prec: i64) -> Self {
        let n = (prec - val).max(0) as usize;
        let mut c = coeffs;
        c.resize(n, Fq(0));
        let lead = c.iter().position(|&a| a != Fq(0));
        match lead {
            None => Series::zero(prec),
            Some(k) => Series { val: val + k as i64, coeffs: c.split_off(k), prec },
        }
    }

    pub fn constant(c: Fq, prec: i64) -> Self {
        Series::monomial(c, 0, prec)
    }

    /// `c t^e + O(t^prec)`.
    pub fn monomial(c: Fq, e: i64, prec: i64) -> Self {
        if e >= prec {
            return Series::zero(prec);
        }
        let mut v = vec![Fq(0); (prec - e) as usize];
        v[0] = c;
        Series::from_coeffs(e, v, prec)
    }

    /// A polynomial in `t`, truncated at `prec`.
    pub fn from_poly(p: &Poly, prec: i64) -> Self {
        Series::from_coeffs(0, p.coeffs().to_vec(), prec)
    }

    /// Valuation of the known part (`prec` when nothing nonzero is known).
    pub fn val(&self) -> i64 {
        self.val
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// True when no nonzero coefficient is known.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `t^e`, `None` beyond the known precision.
    pub fn coeff(&self, e: i64) -> Option<Fq> {
        if e >= self.prec {
            None
        } else if e < self.val {
            Some(Fq(0))
        } else {
            Some(self.coeffs[(e - self.val) as usize])
        }
    }

    pub fn leading(&self) -> Option<(i64, Fq)> {
        self.coeffs.first().map(|&c| (self.val, c))
    }

    /// Known coefficients from the valuation up.
    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn truncate(&self, prec: i64) -> Series {
        if prec >= self.prec {
            return self.clone();
        }
        Series::from_coeffs(self.val, self.coeffs.clone(), prec)
    }

    fn combine(&self, o: &Series, op: impl Fn(Fq, Fq) -> Fq) -> Series {
        let prec = self.prec.min(o.prec);
        let lo = self.val.min(o.val).min(prec);
        let c = (lo..prec)
            .map(|e| op(self.coeff(e).unwrap(), o.coeff(e).unwrap()))
            .collect();
        Series::from_coeffs(lo, c, prec)
    }

    pub fn add(&self, o: &Series, f: &Field) -> Series {
        self.combine(o, |a, b| f.add(a, b))
    }

    pub fn sub(&self, o: &Series, f: &Field) -> Series {
        self.combine(o, |a, b| f.sub(a, b))
    }

    /// `self + c`, the constant taken as exact.
    pub fn add_const(&self, c: Fq, f: &Field) -> Series {
        if self.prec <= 0 || c == Fq(0) {
            return self.clone();
        }
        self.add(&Series::constant(c, self.prec), f)
    }

    pub fn neg(&self, f: &Field) -> Series {
        Series {
            val: self.val,
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
            prec: self.prec,
        }
    }

    pub fn scale(&self, c: Fq, f: &Field) -> Series {
        Series::from_coeffs(self.val, self.coeffs.iter().map(|&a| f.mul(a, c)).collect(), self.prec)
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: i64) -> Series {
        Series { val: self.val + k, coeffs: self.coeffs.clone(), prec: self.prec + k }
    }

    pub fn mul(&self, o: &Series, f: &Field) -> Series {
        let prec = (self.val + o.prec).min(self.prec + o.val);
        let val = self.val + o.val;
        if self.is_zero() || o.is_zero() || prec <= val {
            return Series::zero(prec);
        }
        let n = (prec - val) as usize;
        let mut out = vec![Fq(0); n];
        for (i, &a) in self.coeffs.iter().enumerate().take(n) {
            if a == Fq(0) {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate().take(n - i) {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Series::from_coeffs(val, out, prec)
    }

    /// Inverse; `None` when no nonzero coefficient is known.
    pub fn inv(&self, f: &Field) -> Option<Series> {
        let a = &self.coeffs;
        let b0 = f.inv(*a.first()?).expect("nonzero leading coefficient");
        let n = a.len();
        let mut b = vec![Fq(0); n];
        b[0] = b0;
        for i in 1..n {
            let mut s = Fq(0);
            for j in 1..=i {
                s = f.add(s, f.mul(a[j], b[i - j]));
            }
            b[i] = f.neg(f.mul(b0, s));
        }
        Some(Series::from_coeffs(-self.val, b, -self.val + n as i64))
    }

    /// `p(self)` by Horner's rule; the polynomial is exact.
    pub fn compose_poly(&self, p: &Poly, f: &Field) -> Series {
        let rel = (self.prec - self.val).max(1);
        let Some((&top, rest)) = p.coeffs().split_last() else {
            return Series::zero(rel.max(self.prec));
        };
        let mut acc = Series::constant(top, rel);
        for &c in rest.iter().rev() {
            acc = acc.mul(self, f).add_const(c, f);
        }
        acc
    }
}
