//! Finite fields `F_q`, `q = p^k`, in polynomial basis.
//!
//! Elements are stored as a compact integer code `sum c_i p^i` where
//! `c_0 + c_1 w + ... + c_{k-1} w^{k-1}` is the polynomial-basis
//! representative modulo the defining polynomial. The code order is the
//! enumeration order used everywhere else in the crate: `0, 1, ..., p-1, w,
//! w+1, ...`.
//!
//! Hot loops work with the raw [`Fq`] handle and a borrowed [`Field`];
//! [`FieldElement`] is the checked, self-describing value type.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on `q` for anything that enumerates the field.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 20;

/// Largest field for which lookup tables (logarithms, square roots) are built.
const TABLE_LIMIT: u64 = 1 << 24;

/// Fields up to this size get full addition and multiplication tables.
const SMALL_TABLE_LIMIT: u64 = 256;

/// Raw element handle. Meaningful only together with the [`Field`] it came from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fq(pub u32);

/// Parameters of `F_{p^k}`. `modulus` lists the coefficients of the monic
/// defining polynomial from the constant term up to the leading 1; it is
/// empty for prime fields.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub k: u32,
    pub modulus: Vec<u64>,
}

impl FieldSpec {
    pub fn q(&self) -> u64 {
        self.p.pow(self.k)
    }
}

/// Validates parameters and picks the smallest monic irreducible modulus
/// when none is given.
pub fn field_make(p: u64, k: u32, modulus: Option<&[u64]>) -> Result<FieldSpec> {
    if !is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    if k == 0 {
        return Err(Error::InvalidModulus("extension degree must be at least 1".into()));
    }
    let q = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
    if q > u32::MAX as u128 {
        return Err(Error::FieldTooLarge {
            size: q.min(u64::MAX as u128) as u64,
            cap: u32::MAX as u64,
        });
    }
    if k == 1 {
        // a linear modulus carries no information
        if let Some(m) = modulus {
            if !m.is_empty() && !(m.len() == 2 && m[1] == 1 && m[0] < p) {
                return Err(Error::InvalidModulus(format!("{m:?} is not monic of degree 1")));
            }
        }
        return Ok(FieldSpec { p, k, modulus: Vec::new() });
    }
    let modulus = match modulus {
        Some(m) => {
            if m.len() != k as usize + 1 || m[k as usize] != 1 || m.iter().any(|&c| c >= p) {
                return Err(Error::InvalidModulus(format!(
                    "{m:?} is not a monic degree-{k} polynomial over F_{p}"
                )));
            }
            if !is_irreducible(p, m) {
                return Err(Error::ReducibleModulus(p));
            }
            m.to_vec()
        }
        None => smallest_irreducible(p, k as usize),
    };
    Ok(FieldSpec { p, k, modulus })
}

/// All `q` elements in code order. Refuses fields above `cap`.
pub fn field_enumerate(spec: &FieldSpec, cap: u64) -> Result<Vec<FieldElement>> {
    let q = spec.q();
    if q > cap {
        return Err(Error::FieldTooLarge { size: q, cap });
    }
    let field = Field::new(spec.clone())?;
    Ok(field.elements().map(|a| field.element(a)).collect())
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Dense polynomials over F_p, low to high, used only for modulus handling
// and the slow multiplication path.

fn fp_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn fp_inv(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn fp_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    fp_rem(prod, m, p)
}

fn fp_rem(mut a: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
    fp_trim(&mut a);
    let dm = m.len() - 1;
    let lead_inv = fp_inv(m[dm], p);
    while a.len() > dm {
        let top = a.len() - 1;
        let c = a[top] * lead_inv % p;
        if c != 0 {
            for (i, &mi) in m.iter().enumerate() {
                let idx = top - dm + i;
                a[idx] = (a[idx] + p - c * mi % p) % p;
            }
        }
        fp_trim(&mut a);
    }
    a
}

fn fp_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    fp_trim(&mut out);
    out
}

fn fp_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    fp_trim(&mut a);
    fp_trim(&mut b);
    while !b.is_empty() {
        let r = fp_rem(a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `x^(p^e) mod m`.
fn fp_frobenius_power(m: &[u64], p: u64, e: u32) -> Vec<u64> {
    let mut cur = fp_rem(vec![0, 1], m, p);
    for _ in 0..e {
        // raise to the p-th power by square-and-multiply
        let mut acc = vec![1u64];
        let mut base = cur.clone();
        let mut n = p;
        while n > 0 {
            if n & 1 == 1 {
                acc = fp_mulmod(&acc, &base, m, p);
            }
            base = fp_mulmod(&base, &base, m, p);
            n >>= 1;
        }
        cur = acc;
    }
    cur
}

/// Rabin's irreducibility test.
fn is_irreducible(p: u64, m: &[u64]) -> bool {
    let k = (m.len() - 1) as u32;
    if m[0] == 0 {
        return k == 1;
    }
    let x = vec![0u64, 1];
    if fp_sub(&fp_frobenius_power(m, p, k), &x, p).iter().any(|&c| c != 0) {
        return false;
    }
    for d in prime_factors(k as u64) {
        let h = fp_sub(&fp_frobenius_power(m, p, k / d as u32), &x, p);
        let g = fp_gcd(m.to_vec(), h, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn smallest_irreducible(p: u64, k: usize) -> Vec<u64> {
    let count = p.pow(k as u32);
    for code in 0..count {
        let mut m = Vec::with_capacity(k + 1);
        let mut c = code;
        for _ in 0..k {
            m.push(c % p);
            c /= p;
        }
        m.push(1);
        if is_irreducible(p, &m) {
            return m;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

struct LogTables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

enum RootTable {
    /// `sqrt[a]` is some square root of `a`, or `u32::MAX`.
    Odd { sqrt: Vec<u32> },
    /// `artin[b]` solves `z^2 + z = b`, or `u32::MAX`.
    Even { artin: Vec<u32> },
}

struct Inner {
    spec: FieldSpec,
    p: u32,
    k: u32,
    q: u32,
    /// `p^i` for digit extraction.
    pow_p: Vec<u32>,
    small: Option<(Vec<u32>, Vec<u32>)>,
    logs: OnceLock<LogTables>,
    roots: OnceLock<RootTable>,
}

/// Arithmetic context for one finite field. Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.k == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{} mod {:?}", self.0.p, self.0.k, self.0.spec.modulus)
        }
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Self> {
        // revalidate: specs can arrive from deserialization
        let spec = field_make(
            spec.p,
            spec.k,
            if spec.k == 1 { None } else { Some(&spec.modulus) },
        )?;
        let p = spec.p as u32;
        let k = spec.k;
        let q = spec.q() as u32;
        let pow_p = (0..=k).map(|i| (spec.p.pow(i)) as u32).collect();
        let mut inner = Inner {
            spec,
            p,
            k,
            q,
            pow_p,
            small: None,
            logs: OnceLock::new(),
            roots: OnceLock::new(),
        };
        if (q as u64) <= SMALL_TABLE_LIMIT {
            let tmp = Field(Arc::new(inner));
            let n = q as usize;
            let mut add = vec![0u32; n * n];
            let mut mul = vec![0u32; n * n];
            for a in 0..q {
                for b in 0..q {
                    add[a as usize * n + b as usize] = tmp.add_slow(Fq(a), Fq(b)).0;
                    mul[a as usize * n + b as usize] = tmp.mul_slow(Fq(a), Fq(b)).0;
                }
            }
            inner = Arc::try_unwrap(tmp.0).ok().expect("sole owner");
            inner.small = Some((add, mul));
        }
        Ok(Field(Arc::new(inner)))
    }

    /// Prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self> {
        Field::new(field_make(p, 1, None)?)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn p(&self) -> u64 {
        self.0.p as u64
    }

    pub fn k(&self) -> u32 {
        self.0.k
    }

    pub fn q(&self) -> u64 {
        self.0.q as u64
    }

    pub fn characteristic(&self) -> u64 {
        self.p()
    }

    #[inline]
    pub fn zero(&self) -> Fq {
        Fq(0)
    }

    #[inline]
    pub fn one(&self) -> Fq {
        Fq(1)
    }

    /// All elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.0.q).map(Fq)
    }

    /// Checked wrapper around a raw handle.
    pub fn element(&self, a: Fq) -> FieldElement {
        FieldElement { field: self.clone(), value: a }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Fq> {
        if coeffs.len() > self.0.k as usize {
            return Err(Error::InvalidInput(format!(
                "element {coeffs:?} has more than {} coordinates",
                self.0.k
            )));
        }
        let mut code = 0u64;
        for (i, &c) in coeffs.iter().enumerate() {
            if c >= self.p() {
                return Err(Error::InvalidInput(format!(
                    "coordinate {c} is not a residue mod {}",
                    self.p()
                )));
            }
            code += c * self.0.pow_p[i] as u64;
        }
        Ok(Fq(code as u32))
    }

    /// Length-`k` polynomial-basis coordinates.
    pub fn coeffs(&self, a: Fq) -> Vec<u64> {
        let mut c = a.0;
        (0..self.0.k)
            .map(|_| {
                let d = c % self.0.p;
                c /= self.0.p;
                d as u64
            })
            .collect()
    }

    #[inline]
    pub fn is_zero(&self, a: Fq) -> bool {
        a.0 == 0
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        if let Some((add, _)) = &self.0.small {
            return Fq(add[(a.0 * self.0.q + b.0) as usize]);
        }
        self.add_slow(a, b)
    }

    fn add_slow(&self, a: Fq, b: Fq) -> Fq {
        let p = self.0.p;
        if self.0.k == 1 {
            let s = a.0 + b.0;
            return Fq(if s >= p { s - p } else { s });
        }
        if p == 2 {
            return Fq(a.0 ^ b.0);
        }
        let (mut x, mut y, mut out) = (a.0, b.0, 0u32);
        for i in 0..self.0.k as usize {
            let d = (x % p + y % p) % p;
            out += d * self.0.pow_p[i];
            x /= p;
            y /= p;
        }
        Fq(out)
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        let p = self.0.p;
        if self.0.k == 1 {
            return Fq(if a.0 == 0 { 0 } else { p - a.0 });
        }
        if p == 2 {
            return a;
        }
        let (mut x, mut out) = (a.0, 0u32);
        for i in 0..self.0.k as usize {
            let d = (p - x % p) % p;
            out += d * self.0.pow_p[i];
            x /= p;
        }
        Fq(out)
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if let Some((_, mul)) = &self.0.small {
            return Fq(mul[(a.0 * self.0.q + b.0) as usize]);
        }
        if self.0.k == 1 {
            return Fq(((a.0 as u64 * b.0 as u64) % self.0.p as u64) as u32);
        }
        if a.0 == 0 || b.0 == 0 {
            return Fq(0);
        }
        match self.logs() {
            Some(t) => {
                let s = t.log[a.0 as usize] as u64 + t.log[b.0 as usize] as u64;
                Fq(t.exp[(s % (self.0.q as u64 - 1)) as usize])
            }
            None => self.mul_slow(a, b),
        }
    }

    fn mul_slow(&self, a: Fq, b: Fq) -> Fq {
        let p = self.0.p as u64;
        if self.0.k == 1 {
            return Fq(((a.0 as u64 * b.0 as u64) % p) as u32);
        }
        let x = self.coeffs(a);
        let y = self.coeffs(b);
        let r = fp_mulmod(&x, &y, &self.0.spec.modulus, p);
        self.from_coeffs(&r).expect("reduced product")
    }

    fn logs(&self) -> Option<&LogTables> {
        if self.0.q as u64 > TABLE_LIMIT {
            return None;
        }
        Some(self.0.logs.get_or_init(|| self.build_logs()))
    }

    fn build_logs(&self) -> LogTables {
        let q = self.0.q as u64;
        let order = q - 1;
        let factors = prime_factors(order);
        let g = (2..q as u32)
            .map(Fq)
            .chain(std::iter::once(Fq(1)))
            .find(|&g| {
                factors
                    .iter()
                    .all(|&l| self.pow_slow(g, order / l) != Fq(1))
            })
            .expect("a primitive element exists");
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![0u32; q as usize];
        let mut cur = Fq(1);
        for (i, e) in exp.iter_mut().enumerate() {
            *e = cur.0;
            log[cur.0 as usize] = i as u32;
            cur = self.mul_slow(cur, g);
        }
        LogTables { exp, log }
    }

    fn pow_slow(&self, a: Fq, mut e: u64) -> Fq {
        let mut base = a;
        let mut acc = Fq(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    /// Square-and-multiply exponentiation. `pow(0, 0) = 1`.
    pub fn pow(&self, a: Fq, mut e: u64) -> Fq {
        let mut base = a;
        let mut acc = Fq(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Fq) -> Result<Fq> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        if self.0.k > 1 {
            if let Some(t) = self.logs() {
                let l = t.log[a.0 as usize] as u64;
                let order = self.0.q as u64 - 1;
                return Ok(Fq(t.exp[((order - l) % order) as usize]));
            }
        }
        Ok(self.pow(a, self.0.q as u64 - 2))
    }

    pub fn div(&self, a: Fq, b: Fq) -> Result<Fq> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Roots of `y^2 + h*y - c` in the field, in code order.
    pub fn quadratic_roots(&self, h: Fq, c: Fq) -> Result<Vec<Fq>> {
        let q = self.0.q as u64;
        if q > TABLE_LIMIT {
            return Err(Error::FieldTooLarge { size: q, cap: TABLE_LIMIT });
        }
        let table = self.0.roots.get_or_init(|| self.build_roots());
        let mut out = match table {
            RootTable::Odd { sqrt } => {
                // y = (-h +- sqrt(h^2 + 4c)) / 2
                let disc = self.add(self.mul(h, h), self.mul(self.from_int(4), c));
                let s = sqrt[disc.0 as usize];
                if s == u32::MAX {
                    Vec::new()
                } else {
                    let half = self.inv(self.from_int(2))?;
                    let nh = self.neg(h);
                    let r1 = self.mul(self.add(nh, Fq(s)), half);
                    let r2 = self.mul(self.sub(nh, Fq(s)), half);
                    if r1 == r2 {
                        vec![r1]
                    } else {
                        vec![r1, r2]
                    }
                }
            }
            RootTable::Even { artin } => {
                if h.0 == 0 {
                    // Frobenius is bijective: y = c^(q/2)
                    vec![self.pow(c, q / 2)]
                } else {
                    let h2 = self.mul(h, h);
                    let beta = self.div(c, h2)?;
                    let z = artin[beta.0 as usize];
                    if z == u32::MAX {
                        Vec::new()
                    } else {
                        let z0 = Fq(z);
                        let z1 = self.add(z0, Fq(1));
                        vec![self.mul(h, z0), self.mul(h, z1)]
                    }
                }
            }
        };
        out.sort();
        Ok(out)
    }

    fn build_roots(&self) -> RootTable {
        let q = self.0.q as usize;
        let mut t = vec![u32::MAX; q];
        if self.0.p == 2 {
            for z in self.elements() {
                let b = self.add(self.mul(z, z), z);
                if t[b.0 as usize] == u32::MAX {
                    t[b.0 as usize] = z.0;
                }
            }
            RootTable::Even { artin: t }
        } else {
            for z in self.elements() {
                let s = self.mul(z, z);
                if t[s.0 as usize] == u32::MAX {
                    t[s.0 as usize] = z.0;
                }
            }
            RootTable::Odd { sqrt: t }
        }
    }

    /// Human-readable form: integers for prime fields, polynomials in `w` otherwise.
    pub fn display(&self, a: Fq) -> String {
        if self.0.k == 1 {
            return a.0.to_string();
        }
        let c = self.coeffs(a);
        let terms: Vec<String> = c
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &v)| v != 0)
            .map(|(i, &v)| match (i, v) {
                (0, v) => v.to_string(),
                (1, 1) => "w".to_string(),
                (1, v) => format!("{v}w"),
                (i, 1) => format!("w^{i}"),
                (i, v) => format!("{v}w^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

/// Checked field element that remembers its field.
#[derive(Clone, Debug)]
pub struct FieldElement {
    field: Field,
    value: Fq,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.value == other.value
    }
}

impl Eq for FieldElement {}

#[allow(clippy::should_implement_trait)]
impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn raw(&self) -> Fq {
        self.value
    }

    pub fn coeffs(&self) -> Vec<u64> {
        self.field.coeffs(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value.0 == 0
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn wrap(&self, v: Fq) -> Self {
        FieldElement { field: self.field.clone(), value: v }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.mul(self.value, other.value)))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.div(self.value, other.value)?))
    }

    pub fn neg(&self) -> Self {
        self.wrap(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(self.wrap(self.field.inv(self.value)?))
    }

    pub fn pow(&self, e: u64) -> Self {
        self.wrap(self.field.pow(self.value, e))
    }

    /// Equality that reports a field mismatch instead of returning `false`.
    pub fn eq_checked(&self, other: &Self) -> Result<bool> {
        self.same_field(other)?;
        Ok(self.value == other.value)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.display(self.value))
    }
}
