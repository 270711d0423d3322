mod common;

use atiyah::bundle::{atiyah_local_matrix, section_basis, LaurentPoly, SectionSpace};
use atiyah::code::{code_build, min_distance_exact, mds2_conditions, zero_count_max, EvalConfig};
use atiyah::funcs::{divisor_of, expand_at, func_eval, ord_at};
use atiyah::search::find_mds2;
use atiyah::series::Series;
use atiyah::{CurvePoint, Fq, Limits};
use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn group_law(i in any::<u32>(), j in any::<u32>(), k in any::<u32>()) {
        for n in corpus() {
            let c = &n.curve;
            let pts = points(c);
            let pick = |s: u32| pts[s as usize % pts.len()];
            let (p, q, r) = (pick(i), pick(j), pick(k));
            let add = |a: &CurvePoint, b: &CurvePoint| c.add_points(a, b).unwrap();
            prop_assert_eq!(add(&add(&p, &q), &r), add(&p, &add(&q, &r)), "{}", n.name);
            prop_assert_eq!(add(&p, &q), add(&q, &p));
            prop_assert_eq!(add(&p, &c.neg_point(&p).unwrap()), CurvePoint::Infinity);
            prop_assert_eq!(add(&p, &CurvePoint::Infinity), p);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn scalar_mul_is_additive(i in any::<u32>(), a in 0i64..=50, b in 0i64..=50) {
        for n in corpus() {
            let c = &n.curve;
            let pts = points(c);
            let p = pts[i as usize % pts.len()];
            let lhs = c.scalar_mul(a + b, &p).unwrap();
            let rhs = c.add_points(&c.scalar_mul(a, &p).unwrap(), &c.scalar_mul(b, &p).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs, "{}", n.name);
            prop_assert_eq!(c.scalar_mul(-a, &p).unwrap(), c.neg_point(&c.scalar_mul(a, &p).unwrap()).unwrap());
        }
    }

    #[test]
    fn valuations_multiply(seed in any::<u64>(), i in any::<u32>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for n in corpus() {
            let c = &n.curve;
            let pts = points(c);
            let p = pts[i as usize % pts.len()];
            let (g, h) = (random_function(&mut rng, c), random_function(&mut rng, c));
            let gh = g.mul(&h, c);
            prop_assert_eq!(
                ord_at(c, &gh, &p).unwrap(),
                ord_at(c, &g, &p).unwrap() + ord_at(c, &h, &p).unwrap()
            );
            let (dg, rg) = divisor_of(c, &g).unwrap();
            let (dh, rh) = divisor_of(c, &h).unwrap();
            let (dgh, rgh) = divisor_of(c, &gh).unwrap();
            prop_assert_eq!(dgh, dg.plus(&dh));
            prop_assert_eq!(rgh, rg + rh);
            prop_assert_eq!(dg.degree() + rg, 0);
        }
    }

    #[test]
    fn expansion_agrees_with_valuation(seed in any::<u64>(), i in any::<u32>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for n in corpus() {
            let c = &n.curve;
            let pts = points(c);
            let p = pts[i as usize % pts.len()];
            let g = random_function(&mut rng, c);
            let ord = ord_at(c, &g, &p).unwrap();
            let s = expand_at(c, &g, &p, ord + 3).unwrap();
            prop_assert_eq!(s.leading_exponent, ord, "{} at {:?}", n.name, p);
            prop_assert_ne!(s.coeffs[0], Fq(0));
            if ord >= 0 {
                let v = func_eval(c, &g, &p).unwrap();
                prop_assert_eq!(s.coeff(0).unwrap(), v);
            }
        }
    }

    #[test]
    fn miller_functions_have_principal_divisors(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for n in corpus() {
            let c = &n.curve;
            let (d, g) = random_miller(&mut rng, c);
            let (got, res) = divisor_of(c, &g).unwrap();
            prop_assert_eq!(res, 0);
            prop_assert_eq!(&got, &d);
            // forward direction: degree zero and the point sum vanishes
            prop_assert_eq!(got.degree(), 0);
            prop_assert!(c.divisor_sum(&got).is_infinity());
            let (d2, g2) = random_miller(&mut rng, c);
            let (prod, res) = divisor_of(c, &g.mul(&g2, c)).unwrap();
            prop_assert_eq!(res, 0);
            prop_assert_eq!(prod, d.plus(&d2));
        }
    }
}

#[test]
fn hasse_bound() {
    for n in corpus() {
        let c = &n.curve;
        let q = c.field().q() as f64;
        let count = c.group_order(Limits::default().field_cap).unwrap() as f64;
        assert!((count - (q + 1.0)).abs() <= 2.0 * q.sqrt(), "{}: {count}", n.name);
    }
}

fn series_at_infinity(s: &atiyah::funcs::LaurentSeries) -> Series {
    Series::from_coeffs(s.leading_exponent, s.coeffs.clone(), s.precision)
}

#[test]
fn section_spaces() {
    let lim = Limits::default();
    for n in corpus() {
        let c = &n.curve;
        let aff = affine(c);
        for r in 1..=5 {
            for m in 1..=4i64 {
                let b = section_basis(c, r, m, &lim).unwrap();
                assert_eq!(b.sections.len(), r * m as usize, "{} r={r} m={m}", n.name);
                for s in &b.sections {
                    let comps = &s.comps;
                    for p in &aff {
                        for g in comps.iter().filter(|g| !g.is_zero()) {
                            assert!(ord_at(c, g, p).unwrap() >= 0);
                        }
                    }
                    let f1 = &comps[r - 1];
                    if !f1.is_zero() {
                        assert_ne!(ord_at(c, f1, &CurvePoint::Infinity).unwrap(), -1);
                    }
                    // g_{I_r}(mO) f is integral after the twist by t^m
                    let prec = 2;
                    let v: Vec<Series> = comps
                        .iter()
                        .map(|g| {
                            if g.is_zero() {
                                Series::zero(prec)
                            } else {
                                series_at_infinity(&expand_at(c, g, &CurvePoint::Infinity, prec).unwrap())
                            }
                        })
                        .collect();
                    let out = atiyah_local_matrix(r).apply(&v, c.field()).unwrap();
                    for e in &out {
                        assert!(e.is_zero() || e.val() >= -m, "{} r={r} m={m}: {e:?}", n.name);
                    }
                }
                if r >= 2 {
                    // forgetting f_r lands onto H^0(I_{r-1}(mO))
                    let big = SectionSpace::compute(c, r, m, &lim).unwrap();
                    let small = SectionSpace::compute(c, r - 1, m, &lim).unwrap();
                    let cut = small.layout.len();
                    let f = c.field();
                    let proj: Vec<Vec<Fq>> = big.coords.iter().map(|v| v[..cut].to_vec()).collect();
                    let mat = atiyah::linalg::Matrix::from_rows(cut, &proj);
                    assert_eq!(mat.rank(f), (r - 1) * m as usize);
                    let mut both = small.coords.clone();
                    both.extend(proj);
                    assert_eq!(atiyah::linalg::Matrix::from_rows(cut, &both).rank(f), small.dim());
                }
            }
        }
    }
}

#[test]
fn atiyah_matrices_are_unimodular() {
    for r in 1..=8 {
        assert_eq!(atiyah_local_matrix(r).det(), LaurentPoly::one());
    }
}

fn dense_configs(rng: &mut ChaCha8Rng, count: usize) -> Vec<EvalConfig> {
    use rand::seq::SliceRandom;
    use rand::Rng;
    let lim = Limits::default();
    let curves = corpus();
    let mut out = Vec::new();
    while out.len() < count {
        let c = &curves[rng.gen_range(0..curves.len())].curve;
        let q = c.field().q();
        let (r, m) = (rng.gen_range(1..=3usize), rng.gen_range(1..=3i64));
        if (q as f64).powi((r as i64 * m) as i32) > lim.enum_cap as f64 {
            continue;
        }
        let mut pts = affine(c);
        if pts.len() <= m as usize {
            continue;
        }
        pts.shuffle(rng);
        let n = rng.gen_range(m as usize + 1..=pts.len().min(12));
        pts.truncate(n);
        out.push(EvalConfig::new(c, r, m, pts).unwrap());
    }
    out
}

#[test]
fn code_invariants() {
    use rand::seq::SliceRandom;
    let lim = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for cfg in dense_configs(&mut rng, 30) {
        let code = code_build(&cfg, &lim).unwrap();
        assert_eq!(code.k(), cfg.r * cfg.m as usize, "n > m gives k = rm");
        let d = min_distance_exact(&code, &lim).unwrap().d;
        let z = zero_count_max(&code, &lim).unwrap().max;
        assert_eq!(cfg.ell() - z, d);
        // permuting the points permutes the column blocks
        let mut perm: Vec<usize> = (0..cfg.n()).collect();
        perm.shuffle(&mut rng);
        let pts: Vec<CurvePoint> = perm.iter().map(|&i| cfg.points[i]).collect();
        let permuted = code_build(&EvalConfig::new(&cfg.curve, cfg.r, cfg.m, pts).unwrap(), &lim).unwrap();
        for row in 0..code.evaluations.rows() {
            for (new, &old) in perm.iter().enumerate() {
                for j in 0..cfg.r {
                    assert_eq!(
                        permuted.evaluations.get(row, new * cfg.r + j),
                        code.evaluations.get(row, old * cfg.r + j)
                    );
                }
            }
        }
    }
}

/// Some section vanishes on exactly `m - 1` points in `f_1` and `m` in `f_2`.
#[test]
fn mds_configs_carry_the_zero_pattern() {
    let lim = Limits::default();
    let mut checked = 0;
    for n in corpus() {
        let c = &n.curve;
        for (m, npts) in [(2i64, 4usize), (3, 5), (4, 6)] {
            let Ok(found) = find_mds2(c, m, npts, &lim) else { continue };
            assert!(mds2_conditions(c, m, &found.points).all());
            let q = c.field().q();
            if q.pow(2 * m as u32) > lim.enum_cap {
                continue;
            }
            let code = code_build(&EvalConfig::new(c, 2, m, found.points.clone()).unwrap(), &lim).unwrap();
            let f = c.field();
            let k = code.evaluations.rows();
            let mut digits = vec![0u32; k];
            let mut hit = false;
            'outer: loop {
                let mut i = 0;
                loop {
                    if i == k {
                        break 'outer;
                    }
                    digits[i] += 1;
                    if digits[i] as u64 == q {
                        digits[i] = 0;
                        i += 1;
                    } else {
                        break;
                    }
                }
                let word: Vec<Fq> = (0..code.evaluations.cols())
                    .map(|col| {
                        (0..k).fold(Fq(0), |acc, row| {
                            f.add(acc, f.mul(Fq(digits[row]), code.evaluations.get(row, col)))
                        })
                    })
                    .collect();
                let z2 = (0..npts).filter(|&i| word[2 * i] == Fq(0)).count();
                let z1 = (0..npts).filter(|&i| word[2 * i + 1] == Fq(0)).count();
                if z1 == m as usize - 1 && z2 == m as usize {
                    hit = true;
                    break;
                }
            }
            assert!(hit, "{} m={m}", n.name);
            checked += 1;
        }
    }
    assert!(checked >= 2, "only {checked} configurations checked");
}
