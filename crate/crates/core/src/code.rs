//! Rank-r evaluation codes `C(D, I_r(mO))`: codewords are the values
//! `(f_r(p_1), ..., f_1(p_1); ...; f_r(p_n), ..., f_1(p_n))` of global sections.

use rayon::prelude::*;

use crate::bundle::{section_basis, Section, SectionBasis};
use crate::curve::{Curve, CurvePoint};
use crate::error::{Error, Result};
use crate::field::{Field, Fq};
use crate::funcs::func_eval;
use crate::linalg::Matrix;
use crate::Limits;

#[derive(Clone, Debug)]
pub struct EvalConfig {
    pub curve: Curve,
    pub r: usize,
    pub m: i64,
    pub points: Vec<CurvePoint>,
}

impl EvalConfig {
    pub fn new(curve: &Curve, r: usize, m: i64, points: Vec<CurvePoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("at least one evaluation point is required".into()));
        }
        for p in &points {
            if !curve.contains(p) {
                return Err(Error::not_on_curve(p));
            }
            if p.is_infinity() {
                return Err(Error::PointAtQ);
            }
        }
        let mut sorted = points.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != points.len() {
            return Err(Error::DuplicatePoints);
        }
        Ok(EvalConfig { curve: curve.clone(), r, m, points })
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn ell(&self) -> usize {
        self.r * self.points.len()
    }
}

#[derive(Clone, Debug)]
pub struct LinearCode {
    pub config: EvalConfig,
    pub basis: SectionBasis,
    /// `rm x rn`: every basis section evaluated.
    pub evaluations: Matrix,
    /// Basis-section index behind each generator row.
    pub rows: Vec<usize>,
    pub generator: Matrix,
}

impl LinearCode {
    pub fn k(&self) -> usize {
        self.generator.rows()
    }

    pub fn ell(&self) -> usize {
        self.generator.cols()
    }

    pub fn field(&self) -> &Field {
        self.config.curve.field()
    }

    /// The section behind a combination of generator rows.
    pub fn section_of(&self, coeffs: &[Fq]) -> Section {
        let f = self.field();
        let space = &self.basis.space;
        let mut v = vec![Fq(0); space.layout.len()];
        for (&c, &row) in coeffs.iter().zip(&self.rows) {
            for (acc, &b) in v.iter_mut().zip(&space.coords[row]) {
                *acc = f.add(*acc, f.mul(c, b));
            }
        }
        space.section(&v, &self.config.curve)
    }
}

/// Evaluate a section at the points, point-major with `(f_r, ..., f_1)` per point.
pub fn evaluate_section(c: &Curve, s: &Section, points: &[CurvePoint]) -> Result<Vec<Fq>> {
    let mut out = Vec::with_capacity(points.len() * s.comps.len());
    for p in points {
        for g in &s.comps {
            out.push(func_eval(c, g, p)?);
        }
    }
    Ok(out)
}

pub fn code_build(cfg: &EvalConfig, limits: &Limits) -> Result<LinearCode> {
    let c = &cfg.curve;
    let basis = section_basis(c, cfg.r, cfg.m, limits)?;
    let evals: Vec<Vec<Fq>> = basis
        .sections
        .par_iter()
        .map(|s| evaluate_section(c, s, &cfg.points))
        .collect::<Result<_>>()?;
    let evaluations = Matrix::from_rows(cfg.ell(), &evals);
    let rows = evaluations.independent_rows(c.field());
    let kept: Vec<Vec<Fq>> = rows.iter().map(|&i| evals[i].clone()).collect();
    let generator = Matrix::from_rows(cfg.ell(), &kept);
    Ok(LinearCode { config: cfg.clone(), basis, evaluations, rows, generator })
}

fn space_size(q: u64, k: usize) -> u128 {
    (q as u128).checked_pow(k as u32).unwrap_or(u128::MAX)
}

fn check_space(q: u64, k: usize, limits: &Limits) -> Result<()> {
    let size = space_size(q, k);
    if size > limits.enum_cap as u128 {
        return Err(Error::SpaceTooLarge { size, cap: limits.enum_cap });
    }
    Ok(())
}

/// Minimum of `score` over the nonzero span of `rows`, taken over
/// coefficient vectors normalized to a leading 1 (scores must be scale
/// invariant). Ties go to the lexicographically first vector, so the result
/// does not depend on how the work is split.
fn best_over_span<S>(rows: &[Vec<Fq>], f: &Field, score: S) -> Option<(i64, Vec<Fq>, Vec<Fq>)>
where
    S: Fn(&[Fq]) -> i64 + Sync,
{
    let k = rows.len();
    let len = rows.first()?.len();
    let q = f.q();
    let mut tasks = Vec::new();
    for lead in 0..k {
        let tail = k - 1 - lead;
        let total = q.pow(tail as u32);
        let chunk = (total / 512).max(1);
        let mut a = 0;
        while a < total {
            tasks.push((lead, a, (a + chunk).min(total)));
            a += chunk;
        }
    }
    tasks
        .into_par_iter()
        .map(|(lead, a, b)| {
            let tail = k - 1 - lead;
            let mut coeffs = vec![Fq(0); k];
            coeffs[lead] = Fq(1);
            let mut rem = a;
            for i in (0..tail).rev() {
                coeffs[lead + 1 + i] = Fq((rem % q) as u32);
                rem /= q;
            }
            let mut word = vec![Fq(0); len];
            for (c, row) in coeffs.iter().zip(rows) {
                if *c != Fq(0) {
                    for (w, &x) in word.iter_mut().zip(row) {
                        *w = f.add(*w, f.mul(*c, x));
                    }
                }
            }
            let mut best: Option<(i64, Vec<Fq>, Vec<Fq>)> = None;
            for idx in a..b {
                let s = score(&word);
                if best.as_ref().is_none_or(|(bs, _, _)| s < *bs) {
                    best = Some((s, coeffs.clone(), word.clone()));
                }
                if idx + 1 == b {
                    break;
                }
                // odometer on the least significant coefficient
                let mut pos = k - 1;
                loop {
                    let old = coeffs[pos];
                    let new = if old.0 as u64 + 1 == q { Fq(0) } else { Fq(old.0 + 1) };
                    let delta = f.sub(new, old);
                    for (w, &x) in word.iter_mut().zip(&rows[pos]) {
                        *w = f.add(*w, f.mul(delta, x));
                    }
                    coeffs[pos] = new;
                    if new != Fq(0) {
                        break;
                    }
                    pos -= 1;
                }
            }
            best
        })
        .reduce(
            || None,
            |x, y| match (x, y) {
                (None, b) => b,
                (a, None) => a,
                (Some(a), Some(b)) => Some(if (b.0, &b.1) < (a.0, &a.1) { b } else { a }),
            },
        )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distance {
    pub d: usize,
    /// Coefficients over the generator rows of the first minimum-weight codeword.
    pub witness: Vec<Fq>,
    pub codeword: Vec<Fq>,
}

/// Exhaustive minimum distance; `SpaceTooLarge` when `q^k` exceeds the cap.
pub fn min_distance_exact(code: &LinearCode, limits: &Limits) -> Result<Distance> {
    let f = code.field();
    check_space(f.q(), code.k(), limits)?;
    if code.k() == 0 {
        return Err(Error::InvalidInput("zero-dimensional code has no minimum distance".into()));
    }
    let rows = code.generator.to_rows();
    let (w, witness, codeword) =
        best_over_span(&rows, f, |w| w.iter().filter(|&&x| x != Fq(0)).count() as i64)
            .expect("nonempty");
    Ok(Distance { d: w as usize, witness, codeword })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroCount {
    pub max: usize,
    /// Coefficients over the basis sections of the first maximizer.
    pub witness: Vec<Fq>,
}

/// Largest number of vanishing slots `f_j(p_i) = 0` over nonzero sections.
pub fn zero_count_max(code: &LinearCode, limits: &Limits) -> Result<ZeroCount> {
    let f = code.field();
    let rows = code.evaluations.to_rows();
    check_space(f.q(), rows.len(), limits)?;
    if rows.is_empty() {
        return Err(Error::InvalidInput("no nonzero sections".into()));
    }
    let (neg, witness, _) =
        best_over_span(&rows, f, |w| -(w.iter().filter(|&&x| x == Fq(0)).count() as i64))
            .expect("nonempty");
    Ok(ZeroCount { max: (-neg) as usize, witness })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodeParams {
    pub ell: usize,
    pub k: usize,
    pub d: usize,
}

impl CodeParams {
    /// `ell + 1 - k - d`; zero exactly for MDS codes.
    pub fn singleton_defect(&self) -> i64 {
        self.ell as i64 + 1 - self.k as i64 - self.d as i64
    }
}

pub fn code_params(code: &LinearCode, limits: &Limits) -> Result<CodeParams> {
    let d = min_distance_exact(code, limits)?.d;
    Ok(CodeParams { ell: code.ell(), k: code.k(), d })
}

pub fn singleton_defect(code: &LinearCode, limits: &Limits) -> Result<i64> {
    Ok(code_params(code, limits)?.singleton_defect())
}

/// Header `q r m n k`, then the generator rows. Prime-field entries are
/// integers; extension entries are coefficient tuples `(c0,c1,...)`.
pub fn export_generator(code: &LinearCode) -> String {
    let f = code.field();
    let cfg = &code.config;
    let mut s = format!("{} {} {} {} {}\n", f.q(), cfg.r, cfg.m, cfg.n(), code.k());
    for i in 0..code.k() {
        let row: Vec<String> = code
            .generator
            .row(i)
            .iter()
            .map(|&a| {
                if f.k() == 1 {
                    a.0.to_string()
                } else {
                    let c: Vec<String> = f.coeffs(a).iter().map(|x| x.to_string()).collect();
                    format!("({})", c.join(","))
                }
            })
            .collect();
        s += &row.join(" ");
        s.push('\n');
    }
    s
}

/// Group-law hypotheses of the rank-r dimension/distance theorem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem9Conditions {
    /// (1) `Q` is the group zero. Always true here: `Q = O` by construction.
    pub q_is_zero: bool,
    /// (2) `p_1 + ... + p_{m+r-1} = O`.
    pub sum_is_zero: bool,
    /// (3) each `p_j + ... + p_{m+r-1}`, `j = m..m+r-2`, lies in `{p_{m+r}, ..., p_n}`.
    pub partial_sums_in_tail: bool,
    /// The `j` (1-based) whose partial sum is missing from the tail.
    pub missing: Vec<usize>,
}

impl Theorem9Conditions {
    pub fn all(&self) -> bool {
        self.q_is_zero && self.sum_is_zero && self.partial_sums_in_tail
    }
}

pub fn theorem9_conditions(c: &Curve, r: usize, m: i64, points: &[CurvePoint]) -> Theorem9Conditions {
    let s = m + r as i64 - 1;
    let n = points.len() as i64;
    if m < 1 || s > n {
        let missing = (m.max(1)..s).map(|j| j as usize).collect();
        return Theorem9Conditions { q_is_zero: true, sum_is_zero: false, partial_sums_in_tail: false, missing };
    }
    let s = s as usize;
    let m = m as usize;
    let sum_is_zero = c.sum_points(&points[..s]).is_infinity();
    let tail = &points[s..];
    let missing: Vec<usize> =
        (m..s).filter(|&j| !tail.contains(&c.sum_points(&points[j - 1..s]))).collect();
    Theorem9Conditions { q_is_zero: true, sum_is_zero, partial_sums_in_tail: missing.is_empty(), missing }
}

#[derive(Clone, Debug)]
pub struct Theorem9Report {
    pub r: usize,
    pub m: i64,
    pub n: usize,
    pub conditions: Theorem9Conditions,
    pub predicted_k: usize,
    pub predicted_d: i64,
    pub params: CodeParams,
    pub witness: Section,
    /// Hypotheses taken on faith rather than checked.
    pub assumptions: Vec<String>,
}

impl Theorem9Report {
    pub fn k_matches(&self) -> bool {
        self.params.k == self.predicted_k
    }

    pub fn d_matches(&self) -> bool {
        self.params.d as i64 == self.predicted_d
    }

    pub fn pass(&self) -> bool {
        self.conditions.all() && self.k_matches() && self.d_matches()
    }
}

pub const D_BALANCED_ASSUMPTION: &str =
    "D-balanced semi-stability of the representative is assumed, not checked";

/// Check the hypotheses, then compare `(k, d)` with `k = rm`,
/// `d = r(n - m) - r(r - 1)/2`.
pub fn verify_theorem9(cfg: &EvalConfig, limits: &Limits) -> Result<Theorem9Report> {
    let (r, m, n) = (cfg.r, cfg.m, cfg.n());
    if (n as i64) < m + 2 * r as i64 - 2 {
        return Err(Error::HypothesisViolated(format!("n = {n} < m + 2r - 2 = {}", m + 2 * r as i64 - 2)));
    }
    let conditions = theorem9_conditions(&cfg.curve, r, m, &cfg.points);
    let code = code_build(cfg, limits)?;
    let dist = min_distance_exact(&code, limits)?;
    let params = CodeParams { ell: code.ell(), k: code.k(), d: dist.d };
    let ri = r as i64;
    Ok(Theorem9Report {
        r,
        m,
        n,
        conditions,
        predicted_k: r * m.max(0) as usize,
        predicted_d: ri * (n as i64 - m) - ri * (ri - 1) / 2,
        params,
        witness: code.section_of(&dist.witness),
        assumptions: vec![D_BALANCED_ASSUMPTION.to_string()],
    })
}

/// Conditions (3)-(4) of the rank-2 MDS recipe with `A = p_1 + ... + p_{m-2}`:
/// `p_{m-1} = [2]p_m` and `A + [2]p_{m-1} = A + p_{m-1} + [2]p_m = O`, the
/// latter being `A = -[4]p_m` once the former holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mds2Conditions {
    pub doubling: bool,
    pub sum_condition: bool,
    /// `p_m` has order 4 and `A = O`: the special case singled out as a recipe.
    pub order4_recipe: bool,
}

impl Mds2Conditions {
    pub fn all(&self) -> bool {
        self.doubling && self.sum_condition
    }
}

pub fn mds2_conditions(c: &Curve, m: i64, points: &[CurvePoint]) -> Mds2Conditions {
    if m < 2 || (points.len() as i64) < m {
        return Mds2Conditions { doubling: false, sum_condition: false, order4_recipe: false };
    }
    let m = m as usize;
    let pm = points[m - 1];
    let pm1 = points[m - 2];
    let a = c.sum_points(&points[..m - 2]);
    let doubling = c.add_unchecked(&pm, &pm) == pm1;
    let lhs1 = c.add_unchecked(&a, &c.scalar_mul_unchecked(2, &pm1));
    let lhs2 = c.add_unchecked(&c.add_unchecked(&a, &pm1), &c.scalar_mul_unchecked(2, &pm));
    let sum_condition = lhs1.is_infinity() && lhs2.is_infinity();
    let order4 = c.scalar_mul_unchecked(4, &pm).is_infinity() && !c.scalar_mul_unchecked(2, &pm).is_infinity();
    Mds2Conditions { doubling, sum_condition, order4_recipe: order4 && a.is_infinity() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DEFAULT_FIELD_CAP;

    fn curve() -> Curve {
        Curve::from_ints(&Field::prime(5).unwrap(), [0, 0, 0, 1, 1]).unwrap()
    }

    fn affine(c: &Curve) -> Vec<CurvePoint> {
        c.enumerate_points(DEFAULT_FIELD_CAP).unwrap().into_iter().skip(1).collect()
    }

    #[test]
    fn config_validation() {
        let c = curve();
        let pts = affine(&c);
        assert!(matches!(
            EvalConfig::new(&c, 1, 1, vec![CurvePoint::Infinity]),
            Err(Error::PointAtQ)
        ));
        assert!(matches!(EvalConfig::new(&c, 1, 1, vec![pts[0], pts[0]]), Err(Error::DuplicatePoints)));
        assert!(EvalConfig::new(&c, 1, 1, vec![CurvePoint::Affine(Fq(1), Fq(1))]).is_err());
    }

    #[test]
    fn repetition_code() {
        let c = curve();
        let lim = Limits::default();
        let cfg = EvalConfig::new(&c, 1, 1, affine(&c)[..5].to_vec()).unwrap();
        let code = code_build(&cfg, &lim).unwrap();
        assert_eq!(code.generator.to_rows(), vec![vec![Fq(1); 5]]);
        assert_eq!(min_distance_exact(&code, &lim).unwrap().d, 5);
        assert_eq!(zero_count_max(&code, &lim).unwrap().max, 0);
    }

    #[test]
    fn constant_pair_code() {
        let c = curve();
        let lim = Limits::default();
        let cfg = EvalConfig::new(&c, 2, 1, affine(&c)[..3].to_vec()).unwrap();
        let code = code_build(&cfg, &lim).unwrap();
        assert_eq!((code.k(), code.ell()), (2, 6));
        // oracle: all q^2 - 1 nonzero pairs (c2, c1) repeated over the points
        let f = c.field();
        let mut best = usize::MAX;
        for c2 in f.elements() {
            for c1 in f.elements() {
                if (c2, c1) != (Fq(0), Fq(0)) {
                    let w = 3 * ((c2 != Fq(0)) as usize + (c1 != Fq(0)) as usize);
                    best = best.min(w);
                }
            }
        }
        let d = min_distance_exact(&code, &lim).unwrap();
        assert_eq!(d.d, best);
        assert_eq!(d.d, 3);
        let z = zero_count_max(&code, &lim).unwrap();
        assert_eq!(6 - z.max, d.d);
        let params = code_params(&code, &lim).unwrap();
        assert!(params.singleton_defect() >= 0);
    }

    #[test]
    fn distance_is_deterministic_across_pools() {
        let c = curve();
        let lim = Limits::default();
        let cfg = EvalConfig::new(&c, 2, 2, affine(&c)[..5].to_vec()).unwrap();
        let code = code_build(&cfg, &lim).unwrap();
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let a = one.install(|| min_distance_exact(&code, &lim).unwrap());
        let b = min_distance_exact(&code, &lim).unwrap();
        assert_eq!(a, b);
        // witness really has that weight
        let f = c.field();
        let word = code.generator.to_rows().iter().zip(&a.witness).fold(
            vec![Fq(0); code.ell()],
            |acc, (row, &k)| acc.iter().zip(row).map(|(&x, &y)| f.add(x, f.mul(k, y))).collect(),
        );
        assert_eq!(word, a.codeword);
        assert_eq!(word.iter().filter(|&&x| x != Fq(0)).count(), a.d);
        let witness = code.section_of(&a.witness);
        assert_eq!(evaluate_section(&c, &witness, &cfg.points).unwrap(), a.codeword);
    }

    #[test]
    fn caps_and_export() {
        let c = curve();
        let lim = Limits { enum_cap: 100, ..Limits::default() };
        let cfg = EvalConfig::new(&c, 2, 2, affine(&c)[..5].to_vec()).unwrap();
        let code = code_build(&cfg, &lim).unwrap();
        assert!(matches!(min_distance_exact(&code, &lim), Err(Error::SpaceTooLarge { .. })));
        let text = export_generator(&code);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("5 2 2 5 4"));
        assert_eq!(lines.count(), 4);
    }

    #[test]
    fn theorem9_condition_checker() {
        let c = curve();
        let pts = affine(&c);
        let p = pts[0];
        let np = c.neg_point(&p).unwrap();
        // r = 2, m = 1: the required partial sum p_1 + p_2 = O can never lie in the tail
        let cond = theorem9_conditions(&c, 2, 1, &[p, np, pts[2], pts[3]]);
        assert!(cond.sum_is_zero);
        assert!(!cond.partial_sums_in_tail);
        assert_eq!(cond.missing, vec![1]);
        let bad = theorem9_conditions(&c, 2, 1, &[pts[0], pts[2], pts[3], pts[4]]);
        assert!(!bad.sum_is_zero);
        let cfg = EvalConfig::new(&c, 2, 2, pts[..3].to_vec()).unwrap();
        assert!(matches!(verify_theorem9(&cfg, &Limits::default()), Err(Error::HypothesisViolated(_))));
    }
}
