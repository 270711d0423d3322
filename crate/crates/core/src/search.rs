//! Searches for evaluation sets meeting the group-law hypotheses.
//!
//! Points are taken in enumeration order and tuples explored
//! lexicographically, so a query always returns the same configuration.

use crate::code::{mds2_conditions, theorem9_conditions};
use crate::curve::{Curve, CurvePoint};
use crate::error::{Error, Result};
use crate::Limits;

/// One search strategy and how it went.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathRecord {
    pub name: String,
    pub explored: u64,
    pub found: bool,
    pub exhaustive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Found {
    pub points: Vec<CurvePoint>,
    pub paths: Vec<PathRecord>,
}

/// Lexicographic walk over tuples of distinct indices into `pool`.
struct Tuples {
    len: usize,
    pool: usize,
    idx: Vec<usize>,
    started: bool,
}

impl Tuples {
    fn new(len: usize, pool: usize) -> Self {
        Tuples { len, pool, idx: Vec::new(), started: false }
    }

    fn first_free(&self, from: usize, upto: usize) -> Option<usize> {
        (from..self.pool).find(|v| !self.idx[..upto].contains(v))
    }

    /// Fill positions `from..len` with the smallest unused values.
    fn fill(&mut self, from: usize) -> bool {
        self.idx.truncate(from);
        for i in from..self.len {
            match self.first_free(0, i) {
                Some(v) => self.idx.push(v),
                None => return false,
            }
        }
        true
    }

    fn advance(&mut self) -> Option<&[usize]> {
        if !self.started {
            self.started = true;
            self.idx = Vec::new();
            return if self.fill(0) { Some(&self.idx) } else { None };
        }
        let mut pos = self.len;
        while pos > 0 {
            pos -= 1;
            let cur = self.idx[pos];
            if let Some(v) = self.first_free(cur + 1, pos) {
                self.idx[pos] = v;
                if self.fill(pos + 1) {
                    return Some(&self.idx);
                }
                // not enough values to finish; keep bumping this slot
                pos += 1;
                continue;
            }
        }
        None
    }
}

fn not_found(paths: &[PathRecord], limits: &Limits) -> Error {
    Error::NotFound {
        explored: paths.iter().map(|p| p.explored).sum(),
        exhaustive: paths.iter().all(|p| p.exhaustive),
        depth_cap: limits.search_depth,
    }
}

/// Extend `head` to `n` distinct points: `required` first, then fresh points.
fn complete(head: &[CurvePoint], required: &[CurvePoint], pool: &[CurvePoint], n: usize) -> Option<Vec<CurvePoint>> {
    let mut out = head.to_vec();
    for p in required {
        if p.is_infinity() || head.contains(p) {
            return None;
        }
        if !out.contains(p) {
            out.push(*p);
        }
    }
    for p in pool {
        if out.len() >= n {
            break;
        }
        if !out.contains(p) {
            out.push(*p);
        }
    }
    (out.len() == n).then_some(out)
}

/// First configuration with `p_1 + ... + p_{m+r-1} = O` whose required
/// partial sums sit in the tail. `p_{m+r-1}` is solved for, not searched.
pub fn find_config(c: &Curve, r: usize, m: i64, n: usize, limits: &Limits) -> Result<Found> {
    if r < 1 || m < 1 {
        return Err(Error::InvalidInput(format!("need r >= 1 and m >= 1, got r = {r}, m = {m}")));
    }
    if (n as i64) < m + 2 * r as i64 - 2 {
        return Err(Error::HypothesisViolated(format!("n = {n} < m + 2r - 2 = {}", m + 2 * r as i64 - 2)));
    }
    let pool: Vec<CurvePoint> = c.enumerate_points(limits.field_cap)?.into_iter().skip(1).collect();
    let s = (m as usize) + r - 1;
    let mut rec = PathRecord { name: "prefix-solve".into(), explored: 0, found: false, exhaustive: true };
    if n > pool.len() || s > n {
        return Err(not_found(&[rec], limits));
    }
    let mut walk = Tuples::new(s - 1, pool.len());
    while let Some(idx) = walk.advance() {
        if rec.explored >= limits.search_depth {
            rec.exhaustive = false;
            return Err(not_found(&[rec], limits));
        }
        rec.explored += 1;
        let mut head: Vec<CurvePoint> = idx.iter().map(|&i| pool[i]).collect();
        let last = c.neg_point(&c.sum_points(&head))?;
        if last.is_infinity() || head.contains(&last) {
            continue;
        }
        head.push(last);
        let required: Vec<CurvePoint> = (m as usize..s).map(|j| c.sum_points(&head[j - 1..s])).collect();
        if let Some(points) = complete(&head, &required, &pool, n) {
            debug_assert!(theorem9_conditions(c, r, m, &points).all());
            rec.found = true;
            return Ok(Found { points, paths: vec![rec] });
        }
    }
    Err(not_found(&[rec], limits))
}

/// Rank-2 MDS configuration: `p_{m-1} = [2]p_m` and
/// `p_1 + ... + p_{m-2} = -[4]p_m`. The order-4 recipe (`[4]p_m = O`,
/// `p_1 + ... + p_{m-2} = O`) is tried before the general search.
pub fn find_mds2(c: &Curve, m: i64, n: usize, limits: &Limits) -> Result<Found> {
    if m < 2 {
        return Err(Error::InvalidInput(format!("the rank-2 MDS search needs m >= 2, got {m}")));
    }
    if (n as i64) < m {
        return Err(Error::HypothesisViolated(format!("n = {n} < m = {m}")));
    }
    let pts: Vec<CurvePoint> = c.enumerate_points(limits.field_cap)?.into_iter().skip(1).collect();
    let m = m as usize;
    let mut paths = Vec::new();
    let mut budget = limits.search_depth;
    for recipe in [true, false] {
        let mut rec = PathRecord {
            name: if recipe { "order-4 recipe".into() } else { "general".into() },
            explored: 0,
            found: false,
            exhaustive: true,
        };
        let result = mds2_path(c, &pts, m, n, recipe, &mut rec, &mut budget);
        paths.push(rec);
        if let Some(points) = result {
            debug_assert!(mds2_conditions(c, m as i64, &points).all());
            return Ok(Found { points, paths });
        }
    }
    Err(not_found(&paths, limits))
}

fn mds2_path(
    c: &Curve,
    pool: &[CurvePoint],
    m: usize,
    n: usize,
    recipe: bool,
    rec: &mut PathRecord,
    budget: &mut u64,
) -> Option<Vec<CurvePoint>> {
    if n > pool.len() {
        return None;
    }
    for &pm in pool {
        let pm1 = c.add_unchecked(&pm, &pm);
        if pm1.is_infinity() || pm1 == pm {
            continue;
        }
        let four = c.scalar_mul_unchecked(4, &pm);
        if recipe && !four.is_infinity() {
            continue;
        }
        // A = p_1 + ... + p_{m-2} must equal -[4]p_m
        let target = c.neg_point(&four).expect("on curve");
        let used = [pm, pm1];
        let head = if m == 2 {
            *budget = budget.checked_sub(1).or_else(|| {
                rec.exhaustive = false;
                None
            })?;
            rec.explored += 1;
            target.is_infinity().then(Vec::new)
        } else {
            solve_sum(c, pool, m - 2, &target, &used, rec, budget)?
        };
        let Some(head) = head else { continue };
        let mut prefix = head;
        prefix.push(pm1);
        prefix.push(pm);
        if let Some(points) = complete(&prefix, &[], pool, n) {
            rec.found = true;
            return Some(points);
        }
    }
    None
}

/// First `len` distinct points outside `avoid`, none `O`, summing to `target`.
/// `None` means the budget ran out; `Some(None)` that no tuple exists.
fn solve_sum(
    c: &Curve,
    pool: &[CurvePoint],
    len: usize,
    target: &CurvePoint,
    avoid: &[CurvePoint],
    rec: &mut PathRecord,
    budget: &mut u64,
) -> Option<Option<Vec<CurvePoint>>> {
    let free: Vec<CurvePoint> = pool.iter().copied().filter(|p| !avoid.contains(p)).collect();
    let mut walk = Tuples::new(len - 1, free.len());
    while let Some(idx) = walk.advance() {
        if *budget == 0 {
            rec.exhaustive = false;
            return None;
        }
        *budget -= 1;
        rec.explored += 1;
        let mut head: Vec<CurvePoint> = idx.iter().map(|&i| free[i]).collect();
        let last = c.add_unchecked(target, &c.neg_point(&c.sum_points(&head)).expect("on curve"));
        if last.is_infinity() || head.contains(&last) || avoid.contains(&last) {
            continue;
        }
        head.push(last);
        return Some(Some(head));
    }
    Some(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Field, DEFAULT_FIELD_CAP};

    #[test]
    fn tuple_walk_is_lexicographic() {
        let mut w = Tuples::new(2, 3);
        let mut seen = Vec::new();
        while let Some(t) = w.advance() {
            seen.push(t.to_vec());
        }
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![1, 0], vec![1, 2], vec![2, 0], vec![2, 1]]);
        let mut empty = Tuples::new(0, 3);
        assert_eq!(empty.advance(), Some(&[][..]));
        assert_eq!(empty.advance(), None);
        assert_eq!(Tuples::new(4, 3).advance(), None);
    }

    /// Brute force over every ordered tuple of distinct points.
    fn oracle_exists(c: &Curve, r: usize, m: i64, n: usize) -> bool {
        let pts: Vec<CurvePoint> = c.enumerate_points(DEFAULT_FIELD_CAP).unwrap().into_iter().skip(1).collect();
        let mut w = Tuples::new(n, pts.len());
        while let Some(idx) = w.advance() {
            let tuple: Vec<CurvePoint> = idx.iter().map(|&i| pts[i]).collect();
            if theorem9_conditions(c, r, m, &tuple).all() {
                return true;
            }
        }
        false
    }

    #[test]
    fn theorem9_search_against_oracle() {
        let c = Curve::from_ints(&Field::prime(5).unwrap(), [0, 0, 0, 1, 1]).unwrap();
        let lim = Limits::default();
        for (r, m, n) in [(2, 1, 3), (2, 2, 4), (2, 3, 5), (3, 1, 4), (1, 2, 3)] {
            let got = find_config(&c, r, m, n, &lim);
            assert_eq!(got.is_ok(), oracle_exists(&c, r, m, n), "r={r} m={m} n={n}");
            if let Ok(found) = got {
                assert!(theorem9_conditions(&c, r, m, &found.points).all());
                assert_eq!(found.points.len(), n);
            }
        }
        assert!(matches!(find_config(&c, 2, 2, 3, &lim), Err(Error::HypothesisViolated(_))));
        assert!(matches!(
            find_config(&c, 2, 2, 9, &lim),
            Err(Error::NotFound { exhaustive: true, .. })
        ));
    }

    #[test]
    fn mds2_search() {
        let lim = Limits::default();
        // Z/2 x Z/4: order-4 points exist
        let c = Curve::from_ints(&Field::prime(7).unwrap(), [0, 0, 0, 3, 0]).unwrap();
        let found = find_mds2(&c, 2, 5, &lim).unwrap();
        assert_eq!(found.paths[0].name, "order-4 recipe");
        assert!(found.paths[0].found);
        let cond = mds2_conditions(&c, 2, &found.points);
        assert!(cond.all() && cond.order4_recipe);
        assert_eq!(c.point_order(&found.points[1], DEFAULT_FIELD_CAP).unwrap(), 4);
        assert_eq!(c.point_order(&found.points[0], DEFAULT_FIELD_CAP).unwrap(), 2);
        // odd order group: recipe impossible, general search decides
        let c9 = Curve::from_ints(&Field::prime(5).unwrap(), [0, 0, 0, 1, 1]).unwrap();
        match find_mds2(&c9, 3, 4, &lim) {
            Ok(f) => {
                assert!(!f.paths[0].found);
                assert!(mds2_conditions(&c9, 3, &f.points).all());
            }
            Err(e) => assert!(matches!(e, Error::NotFound { .. })),
        }
        assert!(matches!(find_mds2(&c9, 2, 4, &lim), Err(Error::NotFound { exhaustive: true, .. })));
    }

    #[test]
    fn searches_are_deterministic() {
        let c = Curve::from_ints(&Field::prime(11).unwrap(), [0, 0, 0, 1, 0]).unwrap();
        let lim = Limits::default();
        assert_eq!(find_config(&c, 2, 2, 6, &lim).unwrap(), find_config(&c, 2, 2, 6, &lim).unwrap());
        assert_eq!(find_mds2(&c, 3, 6, &lim).unwrap(), find_mds2(&c, 3, 6, &lim).unwrap());
        let tiny = Limits { search_depth: 1, ..lim };
        assert!(matches!(
            find_config(&c, 3, 3, 9, &tiny),
            Err(Error::NotFound { exhaustive: false, depth_cap: 1, .. })
        ));
    }
}
