//! JSON forms of curves, points, functions, section bases and reports.
//!
//! Keys are emitted in a fixed order. Prime-field elements are integers;
//! extension elements are coefficient lists, constant term first.

use serde_json::{json, Map, Value};

use crate::bundle::{PoleTable, Section, SectionBasis};
use crate::code::{CodeParams, Mds2Conditions, Theorem9Report};
use crate::curve::{Curve, CurvePoint};
use crate::error::{Error, Result};
use crate::field::{field_make, Field, Fq};
use crate::funcs::CurveFunction;
use crate::poly::{Poly, RatFunc};
use crate::search::{Found, PathRecord};

pub fn element(f: &Field, a: Fq) -> Value {
    if f.k() == 1 {
        json!(a.0)
    } else {
        json!(f.coeffs(a))
    }
}

pub fn point(f: &Field, p: &CurvePoint) -> Value {
    match p {
        CurvePoint::Infinity => json!("O"),
        CurvePoint::Affine(x, y) => json!([element(f, *x), element(f, *y)]),
    }
}

pub fn points(f: &Field, pts: &[CurvePoint]) -> Value {
    Value::Array(pts.iter().map(|p| point(f, p)).collect())
}

pub fn curve(c: &Curve) -> Value {
    let f = c.field();
    let spec = f.spec();
    let a: Vec<Value> = c.coefficients().iter().map(|&x| element(f, x)).collect();
    json!({ "p": spec.p, "k": spec.k, "modulus": spec.modulus, "a": a })
}

pub fn poly(f: &Field, p: &Poly) -> Value {
    Value::Array(p.coeffs().iter().map(|&c| element(f, c)).collect())
}

fn ratfunc(f: &Field, r: &RatFunc) -> Value {
    json!({ "num": poly(f, r.num()), "den": poly(f, r.den()) })
}

/// `{u, v, text}` for `u(x) + v(x) y`.
pub fn function(f: &Field, g: &CurveFunction) -> Value {
    json!({ "u": ratfunc(f, g.u()), "v": ratfunc(f, g.v()), "text": g.display(f) })
}

/// Components in the `(f_r, ..., f_1)` order.
pub fn section(f: &Field, s: &Section) -> Value {
    Value::Array(s.comps.iter().map(|g| function(f, g)).collect())
}

fn order_label(o: &Option<i64>) -> Value {
    o.map_or(Value::Null, |v| json!(v))
}

pub fn pole_table(t: &PoleTable) -> Value {
    json!({
        "r": t.r,
        "m": t.m,
        "rows": t.row_orders.iter().map(order_label).collect::<Vec<_>>(),
        "cols": t.col_orders.iter().map(order_label).collect::<Vec<_>>(),
        "realized": t.realized,
        "family_dim": t.family_dim,
        "cells": t.finite_cells(),
    })
}

pub fn section_basis(c: &Curve, b: &SectionBasis, table: Option<&PoleTable>) -> Value {
    let f = c.field();
    let mut out = Map::new();
    out.insert("curve".into(), curve(c));
    out.insert("r".into(), json!(b.r));
    out.insert("m".into(), json!(b.m));
    out.insert("uniformizer".into(), json!(b.uniformizer));
    out.insert("dim".into(), json!(b.sections.len()));
    out.insert("sections".into(), Value::Array(b.sections.iter().map(|s| section(f, s)).collect()));
    if let Some(t) = table {
        out.insert("pole_table".into(), pole_table(t));
    }
    Value::Object(out)
}

/// `{ell, k, d?, defect?, witness_section?}`.
pub fn code_report(f: &Field, ell: usize, k: usize, dist: Option<(&CodeParams, &Section)>) -> Value {
    let mut out = Map::new();
    out.insert("ell".into(), json!(ell));
    out.insert("k".into(), json!(k));
    if let Some((p, w)) = dist {
        out.insert("d".into(), json!(p.d));
        out.insert("defect".into(), json!(p.singleton_defect()));
        out.insert("witness_section".into(), section(f, w));
    }
    Value::Object(out)
}

pub fn config(c: &Curve, r: usize, m: i64, pts: &[CurvePoint]) -> Value {
    json!({ "curve": curve(c), "r": r, "m": m, "points": points(c.field(), pts) })
}

fn path(p: &PathRecord) -> Value {
    json!({ "name": p.name, "explored": p.explored, "found": p.found, "exhaustive": p.exhaustive })
}

pub fn search_result(mode: &str, c: &Curve, r: usize, m: i64, found: &Found) -> Value {
    json!({
        "mode": mode,
        "config": config(c, r, m, &found.points),
        "paths": found.paths.iter().map(path).collect::<Vec<_>>(),
    })
}

pub fn theorem9_report(f: &Field, t: &Theorem9Report) -> Value {
    json!({
        "r": t.r,
        "m": t.m,
        "n": t.n,
        "conditions": {
            "q_is_zero": t.conditions.q_is_zero,
            "sum_is_zero": t.conditions.sum_is_zero,
            "partial_sums_in_tail": t.conditions.partial_sums_in_tail,
            "missing": t.conditions.missing,
        },
        "predicted": { "k": t.predicted_k, "d": t.predicted_d },
        "computed": { "ell": t.params.ell, "k": t.params.k, "d": t.params.d, "defect": t.params.singleton_defect() },
        "k_matches": t.k_matches(),
        "d_matches": t.d_matches(),
        "pass": t.pass(),
        "witness_section": section(f, &t.witness),
        "assumptions": t.assumptions,
    })
}

pub fn mds2_report(f: &Field, cond: &Mds2Conditions, p: &CodeParams, witness: &Section) -> Value {
    json!({
        "conditions": {
            "doubling": cond.doubling,
            "sum_condition": cond.sum_condition,
            "order4_recipe": cond.order4_recipe,
        },
        "computed": { "ell": p.ell, "k": p.k, "d": p.d, "defect": p.singleton_defect() },
        "mds": p.singleton_defect() == 0,
        "witness_section": section(f, witness),
    })
}

fn bad(at: &str, msg: impl std::fmt::Display) -> Error {
    Error::InvalidInput(format!("{at}: {msg}"))
}

fn uint(v: &Value, at: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| bad(at, format!("expected a non-negative integer, found {v}")))
}

/// Integer (any sign, reduced mod p) or list of at most `k` coordinates.
pub fn parse_element(f: &Field, v: &Value, at: &str) -> Result<Fq> {
    match v {
        Value::Number(n) => {
            let i = n.as_i64().ok_or_else(|| bad(at, format!("expected an integer, found {n}")))?;
            if f.k() == 1 {
                Ok(f.from_int(i))
            } else if (0..f.p() as i64).contains(&i) {
                // a bare residue is the constant polynomial
                f.from_coeffs(&[i as u64])
            } else {
                Err(bad(at, format!("{i} is not a residue mod {}", f.p())))
            }
        }
        Value::Array(items) => {
            let mut cs = Vec::with_capacity(items.len());
            for (i, c) in items.iter().enumerate() {
                cs.push(uint(c, &format!("{at}[{i}]"))?);
            }
            f.from_coeffs(&cs).map_err(|e| bad(at, e))
        }
        other => Err(bad(at, format!("expected an integer or a coefficient list, found {other}"))),
    }
}

/// `{p, k?, modulus?, a: [a1, a2, a3, a4, a6]}`.
pub fn parse_curve(v: &Value) -> Result<Curve> {
    let obj = v.as_object().ok_or_else(|| bad("$", "expected an object"))?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "p" | "k" | "modulus" | "a") {
            return Err(bad(&format!("$.{key}"), "unknown field"));
        }
    }
    let p = uint(obj.get("p").ok_or_else(|| bad("$.p", "missing"))?, "$.p")?;
    let k = match obj.get("k") {
        None => 1,
        Some(v) => u32::try_from(uint(v, "$.k")?).map_err(|_| bad("$.k", "too large"))?,
    };
    let modulus = match obj.get("modulus") {
        None | Some(Value::Null) => None,
        Some(Value::Array(items)) if items.is_empty() => None,
        Some(Value::Array(items)) => {
            let mut cs = Vec::new();
            for (i, c) in items.iter().enumerate() {
                cs.push(uint(c, &format!("$.modulus[{i}]"))?);
            }
            Some(cs)
        }
        Some(other) => return Err(bad("$.modulus", format!("expected a list, found {other}"))),
    };
    let spec = field_make(p, k, modulus.as_deref())?;
    let field = Field::new(spec)?;
    let a = obj.get("a").ok_or_else(|| bad("$.a", "missing"))?;
    let items = a.as_array().ok_or_else(|| bad("$.a", "expected a list of five coefficients"))?;
    if items.len() != 5 {
        return Err(bad("$.a", format!("expected five coefficients [a1, a2, a3, a4, a6], found {}", items.len())));
    }
    let mut coeffs = [Fq(0); 5];
    for (i, item) in items.iter().enumerate() {
        coeffs[i] = parse_element(&field, item, &format!("$.a[{i}]"))?;
    }
    Curve::new(&field, coeffs)
}

pub fn parse_point(c: &Curve, v: &Value, at: &str) -> Result<CurvePoint> {
    match v {
        Value::String(s) if s == "O" => Ok(CurvePoint::Infinity),
        Value::Array(xy) if xy.len() == 2 => {
            let f = c.field();
            let x = parse_element(f, &xy[0], &format!("{at}[0]"))?;
            let y = parse_element(f, &xy[1], &format!("{at}[1]"))?;
            c.point(x, y).map_err(|e| bad(at, e))
        }
        other => Err(bad(at, format!("expected \"O\" or [x, y], found {other}"))),
    }
}

/// A bare list of points or `{"points": [...]}`.
pub fn parse_points(c: &Curve, v: &Value) -> Result<Vec<CurvePoint>> {
    let (items, base) = match v {
        Value::Array(a) => (a, "$".to_string()),
        Value::Object(o) => match o.get("points") {
            Some(Value::Array(a)) => (a, "$.points".to_string()),
            _ => return Err(bad("$.points", "expected a list of points")),
        },
        _ => return Err(bad("$", "expected a list of points")),
    };
    items.iter().enumerate().map(|(i, p)| parse_point(c, p, &format!("{base}[{i}]"))).collect()
}
