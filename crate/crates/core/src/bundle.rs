//! Atiyah bundles `I_r(mQ)` with `Q = O`: local representatives at `Q`,
//! extension classes, and global sections cut out by local pole conditions.
//!
//! A section is `(f_r, ..., f_1)` with `f_1 in L(mO)` and
//! `ord_O(f_j + t^{-1} f_{j-1}) >= -m` for `j >= 2`, where `t = x/y`.
//! Each `f_j` then lies in `L((m + j - 1)O)`, so the space is the kernel
//! of a finite F_q-linear system in the monomial coefficients.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::curve::{Curve, CurvePoint};
use crate::error::{Error, Result};
use crate::field::{Field, Fq};
use crate::funcs::{expand_at, CurveFunction};
use crate::linalg::Matrix;
use crate::poly::Poly;
use crate::series::Series;
use crate::Limits;

/// Laurent polynomial in `t` with integer coefficients (entries of local
/// representatives; exact and field independent).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly(BTreeMap<i64, i64>);

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly(BTreeMap::new())
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(1, 0)
    }

    /// `t^{-1}`.
    pub fn t_inv() -> Self {
        LaurentPoly::monomial(1, -1)
    }

    pub fn monomial(c: i64, e: i64) -> Self {
        let mut m = BTreeMap::new();
        if c != 0 {
            m.insert(e, c);
        }
        LaurentPoly(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `(exponent, coefficient)` pairs, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.0.iter().map(|(&e, &c)| (e, c))
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut m = self.0.clone();
        for (e, c) in o.terms() {
            let v = m.entry(e).or_insert(0);
            *v += c;
            if *v == 0 {
                m.remove(&e);
            }
        }
        LaurentPoly(m)
    }

    pub fn neg(&self) -> Self {
        LaurentPoly(self.0.iter().map(|(&e, &c)| (e, -c)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut acc = LaurentPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in o.terms() {
                acc = acc.add(&LaurentPoly::monomial(c1 * c2, e1 + e2));
            }
        }
        acc
    }

    /// Image in `F_q((t))`, truncated at `prec`.
    pub fn to_series(&self, f: &Field, prec: i64) -> Series {
        self.terms().fold(Series::zero(prec), |acc, (e, c)| {
            acc.add(&Series::monomial(f.from_int(c), e, prec), f)
        })
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(e, c)| match (e, c) {
                (0, c) => c.to_string(),
                (e, 1) => format!("t^{e}"),
                (e, c) => format!("{c}*t^{e}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// The local factor at `Q` of an adelic representative; identity elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalMatrix {
    entries: Vec<Vec<LaurentPoly>>,
}

impl LocalMatrix {
    pub fn new(entries: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        let r = entries.len();
        if entries.iter().any(|row| row.len() != r) {
            return Err(Error::ShapeMismatch("local matrix must be square".into()));
        }
        Ok(LocalMatrix { entries })
    }

    pub fn identity(r: usize) -> Self {
        let entries = (0..r)
            .map(|i| {
                (0..r).map(|j| if i == j { LaurentPoly::one() } else { LaurentPoly::zero() }).collect()
            })
            .collect();
        LocalMatrix { entries }
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<LaurentPoly>] {
        &self.entries
    }

    /// Exact determinant by cofactor expansion (ranks here are at most 16).
    pub fn det(&self) -> LaurentPoly {
        fn go(m: &[Vec<LaurentPoly>], cols: &[usize]) -> LaurentPoly {
            let row = m.len() - cols.len();
            if cols.is_empty() {
                return LaurentPoly::one();
            }
            let mut acc = LaurentPoly::zero();
            for (k, &c) in cols.iter().enumerate() {
                let e = &m[row][c];
                if e.is_zero() {
                    continue;
                }
                let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let term = e.mul(&go(m, &rest));
                acc = if k % 2 == 0 { acc.add(&term) } else { acc.add(&term.neg()) };
            }
            acc
        }
        let cols: Vec<usize> = (0..self.rank()).collect();
        go(&self.entries, &cols)
    }

    /// `g v` for a vector of local expansions.
    pub fn apply(&self, v: &[Series], f: &Field) -> Result<Vec<Series>> {
        if v.len() != self.rank() {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} against rank {}",
                v.len(),
                self.rank()
            )));
        }
        let term = |e: &LaurentPoly, s: &Series| {
            let lo = e.terms().next().map_or(0, |(x, _)| x);
            let hi = e.terms().last().map_or(0, |(x, _)| x);
            // enough precision that only `s` limits the product
            let p = (hi + 1).max(lo + s.prec() - s.val());
            e.to_series(f, p).mul(s, f)
        };
        Ok(self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .filter(|(e, _)| !e.is_zero())
                    .map(|(e, s)| term(e, s))
                    .reduce(|a, b| a.add(&b, f))
                    .unwrap_or_else(|| Series::zero(v.iter().map(|s| s.prec()).min().unwrap_or(0)))
            })
            .collect())
    }
}

impl fmt::Display for LocalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// The class of `0 -> I_{r-1} -> I_r -> O_X -> 0`: a principal part at `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionClass {
    pub kappa: Vec<LaurentPoly>,
}

impl ExtensionClass {
    /// Right-upper block of `block_extend(I_{r-1}, [1], .)`: the class
    /// read bottom-up, since the new `t^{-1}` couples the two last rows.
    pub fn as_column(&self) -> Vec<Vec<LaurentPoly>> {
        self.kappa.iter().rev().map(|e| vec![e.clone()]).collect()
    }

    /// Right-upper block of `block_extend([1], I_{r-1}, .)` for the dual
    /// sequence `0 -> O_X -> I_r -> I_{r-1} -> 0`; no reversal needed.
    pub fn as_row(&self) -> Vec<Vec<LaurentPoly>> {
        vec![self.kappa.clone()]
    }
}

pub fn extension_class(r: usize) -> Result<ExtensionClass> {
    if r < 2 {
        return Err(Error::RankTooSmall(r));
    }
    let mut kappa = vec![LaurentPoly::zero(); r - 1];
    kappa[0] = LaurentPoly::t_inv();
    Ok(ExtensionClass { kappa })
}

/// Identity plus `t^{-1}` on the superdiagonal.
pub fn atiyah_local_matrix(r: usize) -> LocalMatrix {
    let mut g = LocalMatrix::identity(r);
    for i in 1..r {
        g.entries[i - 1][i] = LaurentPoly::t_inv();
    }
    g
}

/// `[[g1, kappa], [0, g3]]`.
pub fn block_extend(g1: &LocalMatrix, g3: &LocalMatrix, kappa: &[Vec<LaurentPoly>]) -> Result<LocalMatrix> {
    let (r1, r3) = (g1.rank(), g3.rank());
    if kappa.len() != r1 || kappa.iter().any(|row| row.len() != r3) {
        return Err(Error::ShapeMismatch(format!("extension block must be {r1}x{r3}")));
    }
    let mut entries = vec![vec![LaurentPoly::zero(); r1 + r3]; r1 + r3];
    for i in 0..r1 {
        entries[i][..r1].clone_from_slice(&g1.entries[i]);
        entries[i][r1..].clone_from_slice(&kappa[i]);
    }
    for i in 0..r3 {
        entries[r1 + i][r1..].clone_from_slice(&g3.entries[i]);
    }
    Ok(LocalMatrix { entries })
}

/// The monomial with pole order `n` at `O`: `1`, `x^{n/2}` or `x^{(n-3)/2} y`.
pub fn monomial_of_pole(n: u32) -> CurveFunction {
    match n {
        0 => CurveFunction::one(),
        1 => panic!("no function has a simple pole only at O"),
        n if n % 2 == 0 => CurveFunction::monomial(n as usize / 2, 0),
        n => CurveFunction::monomial((n as usize - 3) / 2, 1),
    }
}

/// Pole orders of the monomial basis of `L(kO)`, descending.
pub fn lbasis_poles(k: i64) -> Vec<u32> {
    if k < 0 {
        return Vec::new();
    }
    (0..=k as u32).rev().filter(|&n| n != 1).collect()
}

/// Monomial basis of `L(mO)` in increasing pole order: `1, x, y, x^2, xy, ...`.
pub fn lbasis_mo(m: i64) -> Vec<CurveFunction> {
    lbasis_poles(m).into_iter().rev().map(monomial_of_pole).collect()
}

pub(crate) fn check_caps(r: usize, m: i64, limits: &Limits) -> Result<()> {
    if r == 0 {
        return Err(Error::RankTooSmall(0));
    }
    if r > limits.max_r || m.abs() > limits.max_m {
        return Err(Error::RankOrTwistTooLarge { r, m, max_r: limits.max_r, max_m: limits.max_m });
    }
    Ok(())
}

/// Layout of the unknowns: block `j` (0-based, `f_{j+1}`) holds the
/// monomials of `L((m + j)O)` by descending pole order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    pub blocks: Vec<Vec<u32>>,
    offsets: Vec<usize>,
}

impl Layout {
    fn new(r: usize, m: i64) -> Self {
        let blocks: Vec<Vec<u32>> = (0..r).map(|j| lbasis_poles(m + j as i64)).collect();
        let mut offsets = Vec::with_capacity(r);
        let mut acc = 0;
        for b in &blocks {
            offsets.push(acc);
            acc += b.len();
        }
        Layout { blocks, offsets }
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Columns of block `j`.
    pub fn range(&self, j: usize) -> std::ops::Range<usize> {
        self.offsets[j]..self.offsets[j] + self.blocks[j].len()
    }

    /// `ord_O(f_{j+1})` of a coordinate vector; `None` when the component is zero.
    pub fn order(&self, coords: &[Fq], j: usize) -> Option<i64> {
        let r = self.range(j);
        coords[r.clone()]
            .iter()
            .zip(&self.blocks[j])
            .find(|(c, _)| **c != Fq(0))
            .map(|(_, &n)| -(n as i64))
    }

    /// Columns of block `j` whose monomials have ord < `bound`.
    fn cols_below(&self, j: usize, bound: Option<i64>) -> Vec<usize> {
        self.range(j)
            .zip(&self.blocks[j])
            .filter(|(_, &n)| bound.is_none_or(|b| -(n as i64) < b))
            .map(|(c, _)| c)
            .collect()
    }

    fn component(&self, coords: &[Fq], j: usize, c: &Curve) -> CurveFunction {
        let f = c.field();
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (&coef, &n) in coords[self.range(j)].iter().zip(&self.blocks[j]) {
            if coef == Fq(0) {
                continue;
            }
            let (deg, with_y) = match n {
                0 => (0, false),
                n if n % 2 == 0 => (n as usize / 2, false),
                n => ((n as usize - 3) / 2, true),
            };
            let v = if with_y { &mut b } else { &mut a };
            if v.len() <= deg {
                v.resize(deg + 1, Fq(0));
            }
            v[deg] = f.add(v[deg], coef);
        }
        CurveFunction::from_polys(Poly::new(a), Poly::new(b))
    }
}

/// Coefficients of `t^lo .. t^(hi-1)` of the monomial with pole order `n`.
fn monomial_window(c: &Curve, n: u32, lo: i64, hi: i64) -> Result<Vec<Fq>> {
    let ord = -(n as i64);
    if ord >= hi {
        return Ok(vec![Fq(0); (hi - lo).max(0) as usize]);
    }
    let s = expand_at(c, &monomial_of_pole(n), &CurvePoint::Infinity, hi)?;
    Ok((lo..hi).map(|e| s.coeff(e).expect("within precision")).collect())
}

/// Global sections of `I_r(mQ)` for any integer `m`.
#[derive(Clone, Debug)]
pub struct SectionSpace {
    pub r: usize,
    pub m: i64,
    pub layout: Layout,
    /// Canonical (RREF) basis of the kernel, one row per section.
    pub coords: Vec<Vec<Fq>>,
}

impl SectionSpace {
    pub fn compute(c: &Curve, r: usize, m: i64, limits: &Limits) -> Result<Self> {
        check_caps(r, m, limits)?;
        let layout = Layout::new(r, m);
        let nvars = layout.len();
        if nvars == 0 {
            return Ok(SectionSpace { r, m, layout, coords: Vec::new() });
        }
        // exponents that must vanish: t^lo .. t^(-m-1)
        let lo = -(m + r as i64) - 1;
        let hi = -m + 1;
        let windows: Vec<Vec<Vec<Fq>>> = layout
            .blocks
            .par_iter()
            .map(|b| b.iter().map(|&n| monomial_window(c, n, lo, hi)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let rows: Vec<Vec<Fq>> = (0..r)
            .into_par_iter()
            .flat_map_iter(|j| {
                let layout = &layout;
                let windows = &windows;
                (lo..-m).map(move |e| {
                    let mut row = vec![Fq(0); nvars];
                    let at = |w: &Vec<Fq>, e: i64| w[(e - lo) as usize];
                    for (k, col) in layout.range(j).enumerate() {
                        row[col] = at(&windows[j][k], e);
                    }
                    if j > 0 {
                        // t^{-1} f_{j-1} contributes its t^{e+1} coefficient
                        for (k, col) in layout.range(j - 1).enumerate() {
                            row[col] = at(&windows[j - 1][k], e + 1);
                        }
                    }
                    row
                })
            })
            .filter(|row| row.iter().any(|&v| v != Fq(0)))
            .collect();
        let coords = if rows.is_empty() {
            Matrix::from_rows(nvars, &identity_rows(nvars)).row_space(c.field())
        } else {
            Matrix::from_rows(nvars, &rows).nullspace(c.field())
        };
        Ok(SectionSpace { r, m, layout, coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// A coordinate vector as a section `(f_r, ..., f_1)`.
    pub fn section(&self, coords: &[Fq], c: &Curve) -> Section {
        Section { comps: (0..self.r).rev().map(|j| self.layout.component(coords, j, c)).collect() }
    }

    /// `(ord f_r, ..., ord f_1)`.
    pub fn orders(&self, coords: &[Fq]) -> Vec<Option<i64>> {
        (0..self.r).rev().map(|j| self.layout.order(coords, j)).collect()
    }

    fn restricted_dim(&self, c: &Curve, zero_cols: &[usize]) -> usize {
        if self.coords.is_empty() || zero_cols.is_empty() {
            return self.dim();
        }
        let b = Matrix::from_rows(self.layout.len(), &self.coords);
        self.dim() - b.select_cols(zero_cols).rank(c.field())
    }
}

fn identity_rows(n: usize) -> Vec<Vec<Fq>> {
    (0..n)
        .map(|i| {
            let mut v = vec![Fq(0); n];
            v[i] = Fq(1);
            v
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    /// `(f_r, ..., f_1)`.
    pub comps: Vec<CurveFunction>,
}

#[derive(Clone, Debug)]
pub struct SectionBasis {
    pub r: usize,
    pub m: i64,
    pub uniformizer: String,
    pub sections: Vec<Section>,
    pub space: SectionSpace,
}

/// Echelonized basis of `H^0(I_r(mO))`, `m >= 1`; pivots run from the most
/// negative `ord_O(f_1)` up, then through `f_2, ..., f_r`.
pub fn section_basis(c: &Curve, r: usize, m: i64, limits: &Limits) -> Result<SectionBasis> {
    check_caps(r, m, limits)?;
    if m < 1 {
        return Err(Error::InvalidInput(format!("section_basis needs m >= 1, got {m}")));
    }
    let space = SectionSpace::compute(c, r, m, limits)?;
    let sections = space.coords.iter().map(|v| space.section(v, c)).collect();
    Ok(SectionBasis { r, m, uniformizer: "x/y".into(), sections, space })
}

/// `(h^0, h^1)` of `I_r(mO)`; `h^1 = h^0 - rm` by Riemann-Roch in genus 1.
pub fn h0_h1(c: &Curve, r: usize, m: i64, limits: &Limits) -> Result<(i64, i64)> {
    let h0 = SectionSpace::compute(c, r, m, limits)?.dim() as i64;
    Ok((h0, h0 - r as i64 * m))
}

/// Realized pole-order pairs `(ord f_{r-1}, ord f_r)`; `None` stands for a
/// component that vanishes identically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleTable {
    pub r: usize,
    pub m: i64,
    /// `ord f_{r-1}`: `0, -1, ..., -(m + r - 2)`, then `None`.
    pub row_orders: Vec<Option<i64>>,
    /// `ord f_r`: `0, -1, ..., -(m + r - 1)`, then `None`.
    pub col_orders: Vec<Option<i64>>,
    pub realized: Vec<Vec<bool>>,
    /// Dimension of the cell's quotient `V(a,b) / (V(a+,b) + V(a,b+))`.
    pub family_dim: Vec<Vec<usize>>,
}

fn order_axis(k: i64) -> Vec<Option<i64>> {
    let mut v: Vec<Option<i64>> = (0..=k.max(-1)).map(|i| Some(-i)).collect();
    v.push(None);
    v
}

fn succ(a: Option<i64>) -> Option<Option<i64>> {
    match a {
        None => None,
        Some(0) => Some(None),
        Some(v) => Some(Some(v + 1)),
    }
}

impl PoleTable {
    pub fn is_realized(&self, a: Option<i64>, b: Option<i64>) -> bool {
        match (self.row_orders.iter().position(|&x| x == a), self.col_orders.iter().position(|&x| x == b)) {
            (Some(i), Some(j)) => self.realized[i][j],
            _ => false,
        }
    }

    /// Finite realized cells.
    pub fn finite_cells(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for (i, a) in self.row_orders.iter().enumerate() {
            for (j, b) in self.col_orders.iter().enumerate() {
                if let (Some(a), Some(b)) = (a, b) {
                    if self.realized[i][j] {
                        out.push((*a, *b));
                    }
                }
            }
        }
        out
    }

    /// Rows `ord f_{r-1}`, columns `ord f_r`; `O` marks a realized pair.
    pub fn render(&self) -> String {
        let label = |o: &Option<i64>| o.map_or("inf".to_string(), |v| v.to_string());
        let mut s = format!("{:>5} |", "");
        for b in &self.col_orders {
            s += &format!("{:>4}", label(b));
        }
        s.push('\n');
        for (i, a) in self.row_orders.iter().enumerate() {
            s += &format!("{:>5} |", label(a));
            for j in 0..self.col_orders.len() {
                s += &format!("{:>4}", if self.realized[i][j] { "O" } else { "X" });
            }
            s.push('\n');
        }
        s
    }
}

/// Pole-order table from subspace dimensions, exact for any field size.
pub fn pole_table(c: &Curve, r: usize, m: i64, limits: &Limits) -> Result<PoleTable> {
    let space = pole_space(c, r, m, limits)?;
    let (jr, jp) = (r - 1, r - 2);
    let dim = |a: Option<i64>, b: Option<i64>| {
        let mut cols = space.layout.cols_below(jp, a);
        cols.extend(space.layout.cols_below(jr, b));
        space.restricted_dim(c, &cols)
    };
    let row_orders = order_axis(m + r as i64 - 2);
    let col_orders = order_axis(m + r as i64 - 1);
    let mut realized = vec![vec![false; col_orders.len()]; row_orders.len()];
    let mut family_dim = vec![vec![0; col_orders.len()]; row_orders.len()];
    for (i, &a) in row_orders.iter().enumerate() {
        for (j, &b) in col_orders.iter().enumerate() {
            let v = dim(a, b);
            let va = succ(a).map(|a2| dim(a2, b));
            let vb = succ(b).map(|b2| dim(a, b2));
            let vab = match (succ(a), succ(b)) {
                (Some(a2), Some(b2)) => Some(dim(a2, b2)),
                _ => None,
            };
            realized[i][j] = va.is_none_or(|x| x < v) && vb.is_none_or(|x| x < v) && v > 0;
            family_dim[i][j] = match (va, vb, vab) {
                (Some(x), Some(y), Some(z)) => v + z - x - y,
                (Some(x), None, _) | (None, Some(x), _) => v - x,
                _ => v,
            };
        }
    }
    Ok(PoleTable { r, m, row_orders, col_orders, realized, family_dim })
}

fn pole_space(c: &Curve, r: usize, m: i64, limits: &Limits) -> Result<SectionSpace> {
    check_caps(r, m, limits)?;
    if r < 2 {
        return Err(Error::RankTooSmall(r));
    }
    if m < 1 {
        return Err(Error::InvalidInput(format!("pole tables need m >= 1, got {m}")));
    }
    SectionSpace::compute(c, r, m, limits)
}

/// Occupancy by running over every section; `SpaceTooLarge` past the cap.
/// Same axes as [`pole_table`].
pub fn pole_table_scan(c: &Curve, r: usize, m: i64, limits: &Limits) -> Result<Vec<Vec<bool>>> {
    let space = pole_space(c, r, m, limits)?;
    let f = c.field();
    let q = f.q() as u128;
    let size = q.checked_pow(space.dim() as u32).unwrap_or(u128::MAX);
    if size > limits.enum_cap as u128 {
        return Err(Error::SpaceTooLarge { size, cap: limits.enum_cap });
    }
    let rows = order_axis(m + r as i64 - 2);
    let cols = order_axis(m + r as i64 - 1);
    let mut seen = vec![vec![false; cols.len()]; rows.len()];
    let n = space.layout.len();
    let mut digits = vec![0u32; space.dim()];
    let mut vec = vec![Fq(0); n];
    loop {
        // odometer step; the all-zero vector is skipped
        let mut i = 0;
        loop {
            if i == digits.len() {
                return Ok(seen);
            }
            // vec += basis[i]; wrap when the digit overflows
            for (acc, &b) in vec.iter_mut().zip(&space.coords[i]) {
                *acc = f.add(*acc, b);
            }
            digits[i] += 1;
            if digits[i] as u64 == f.q() {
                digits[i] = 0;
                i += 1;
            } else {
                break;
            }
        }
        let a = space.layout.order(&vec, r - 2);
        let b = space.layout.order(&vec, r - 1);
        let ia = rows.iter().position(|&x| x == a).expect("axis covers orders");
        let ib = cols.iter().position(|&x| x == b).expect("axis covers orders");
        seen[ia][ib] = true;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::funcs::ord_at;

    fn curve() -> Curve {
        Curve::from_ints(&Field::prime(5).unwrap(), [0, 0, 0, 1, 1]).unwrap()
    }

    #[test]
    fn local_matrices() {
        let t = LaurentPoly::t_inv;
        let (o, z) = (LaurentPoly::one, LaurentPoly::zero);
        assert_eq!(atiyah_local_matrix(1), LocalMatrix::identity(1));
        assert_eq!(atiyah_local_matrix(2).entries(), &[vec![o(), t()], vec![z(), o()]]);
        assert_eq!(
            atiyah_local_matrix(3).entries(),
            &[vec![o(), t(), z()], vec![z(), o(), t()], vec![z(), z(), o()]]
        );
        for r in 1..=8 {
            assert_eq!(atiyah_local_matrix(r).det(), LaurentPoly::one());
        }
        let m = LocalMatrix::new(vec![vec![t(), o()], vec![o(), t()]]).unwrap();
        // t^-2 - 1
        assert_eq!(m.det(), LaurentPoly::monomial(1, -2).add(&LaurentPoly::monomial(-1, 0)));
        assert_eq!(atiyah_local_matrix(2).to_string(), "[[1, t^-1], [0, 1]]");
    }

    #[test]
    fn extension_classes() {
        assert_eq!(extension_class(1), Err(Error::RankTooSmall(1)));
        assert_eq!(extension_class(2).unwrap().kappa, vec![LaurentPoly::t_inv()]);
        assert_eq!(extension_class(3).unwrap().kappa, vec![LaurentPoly::t_inv(), LaurentPoly::zero()]);
        assert_eq!(extension_class(5).unwrap().kappa.len(), 4);
    }

    #[test]
    fn block_extension_orderings() {
        let one = LocalMatrix::identity(1);
        let g2 = block_extend(&one, &one, &[vec![LaurentPoly::t_inv()]]).unwrap();
        assert_eq!(g2, atiyah_local_matrix(2));
        for r in 2..=8 {
            let k = extension_class(r).unwrap();
            let prev = atiyah_local_matrix(r - 1);
            assert_eq!(block_extend(&prev, &one, &k.as_column()).unwrap(), atiyah_local_matrix(r));
            assert_eq!(block_extend(&one, &prev, &k.as_row()).unwrap(), atiyah_local_matrix(r));
            if r >= 3 {
                // the unreversed vector as a column is a different matrix
                let raw: Vec<Vec<LaurentPoly>> = k.kappa.iter().map(|e| vec![e.clone()]).collect();
                assert_ne!(block_extend(&prev, &one, &raw).unwrap(), atiyah_local_matrix(r));
            }
        }
        // split extension
        let zero = vec![vec![LaurentPoly::zero()]];
        let g = block_extend(&atiyah_local_matrix(1), &one, &zero).unwrap();
        assert_eq!(g, LocalMatrix::identity(2));
        assert!(matches!(block_extend(&one, &one, &[]), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn riemann_roch_spaces() {
        let c = curve();
        assert_eq!(lbasis_mo(0), vec![CurveFunction::one()]);
        assert_eq!(lbasis_mo(3), vec![CurveFunction::one(), CurveFunction::x(), CurveFunction::y()]);
        assert_eq!(lbasis_mo(5).len(), 5);
        assert!(lbasis_mo(-1).is_empty());
        for (k, g) in lbasis_mo(9).iter().enumerate() {
            let want = if k == 0 { 0 } else { -(k as i64) - 1 };
            assert_eq!(ord_at(&c, g, &CurvePoint::Infinity).unwrap(), want);
        }
    }

    #[test]
    fn small_section_spaces() {
        let c = curve();
        let lim = Limits::default();
        let b = section_basis(&c, 1, 2, &lim).unwrap();
        assert_eq!(b.sections.len(), 2);
        let mut comps: Vec<CurveFunction> = b.sections.iter().map(|s| s.comps[0].clone()).collect();
        comps.sort_by_key(|g| g.u().num().deg());
        assert_eq!(comps, vec![CurveFunction::one(), CurveFunction::x()]);
        let b = section_basis(&c, 2, 1, &lim).unwrap();
        assert_eq!(b.sections.len(), 2);
        for s in &b.sections {
            for g in &s.comps {
                assert!(g.is_zero() || ord_at(&c, g, &CurvePoint::Infinity).unwrap() == 0);
            }
        }
        assert_eq!(section_basis(&c, 2, 2, &lim).unwrap().sections.len(), 4);
        assert!(matches!(section_basis(&c, 9, 2, &lim), Err(Error::RankOrTwistTooLarge { .. })));
        assert!(matches!(section_basis(&c, 2, 17, &lim), Err(Error::RankOrTwistTooLarge { .. })));
    }

    #[test]
    fn cohomology() {
        let c = curve();
        let lim = Limits::default();
        assert_eq!(h0_h1(&c, 2, 0, &lim).unwrap(), (1, 1));
        assert_eq!(h0_h1(&c, 3, 2, &lim).unwrap(), (6, 0));
        assert_eq!(h0_h1(&c, 1, 0, &lim).unwrap(), (1, 1));
        assert_eq!(h0_h1(&c, 3, -1, &lim).unwrap(), (0, 3));
        assert_eq!(h0_h1(&c, 4, 0, &lim).unwrap(), (1, 1));
    }

    #[test]
    fn pole_tables_match_scan() {
        let c = curve();
        let lim = Limits::default();
        for (r, m) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (2, 4)] {
            let t = pole_table(&c, r, m, &lim).unwrap();
            assert_eq!(t.realized, pole_table_scan(&c, r, m, &lim).unwrap(), "r={r} m={m}");
        }
        let t = pole_table(&c, 2, 1, &lim).unwrap();
        assert_eq!(t.finite_cells(), vec![(0, 0)]);
        let t = pole_table(&c, 2, 2, &lim).unwrap();
        assert!(t.is_realized(Some(-2), Some(-3)));
        let i = t.row_orders.iter().position(|&a| a == Some(-2)).unwrap();
        let j = t.col_orders.iter().position(|&b| b == Some(-3)).unwrap();
        assert_eq!(t.family_dim[i][j], 1);
        let tight = Limits { enum_cap: 10, ..Limits::default() };
        assert!(matches!(pole_table_scan(&c, 2, 2, &tight), Err(Error::SpaceTooLarge { .. })));
    }
}
