//! Text and JSON input formats, and the JSON encodings of results.
//!
//! Exact quantities are always written as decimal or `p/q` strings. On
//! input, JSON numbers are accepted too and read from their literal text.

use std::fs;

use hk_core::bbform::{FujikiData, IntersectionTable};
use hk_core::exact::{self, Integer, Rational};
use hk_core::hrr::IntegerSeries;
use hk_core::lattice::{IntegralLattice, StandardLattice};
use hk_core::period::PeriodPoint;
use hk_core::riemann::{Metric, Polynomial, Polyline};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};

/// JSON given inline (starting with `{` or `[`) or the contents of a file.
pub fn load_json(arg: &str) -> CliResult<Value> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| CliError::input(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("invalid JSON in {arg}: {e}")))
}

pub fn parse_rational(s: &str) -> CliResult<Rational> {
    let s = s.trim();
    if let Some(q) = exact::parse_rational(s) {
        return Ok(q);
    }
    parse_decimal(s).ok_or_else(|| CliError::input(format!("not a rational number: {s:?}")))
}

// Terminating decimals such as "-0.125" or "2.5e-3", read exactly.
fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("0{int_part}{frac_part}").parse().ok()?;
    let shift = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut q = Rational::from_integer(digits);
    if shift >= 0 {
        q *= Rational::from_integer(num_traits::pow(ten, shift as usize));
    } else {
        q /= Rational::from_integer(num_traits::pow(ten, (-shift) as usize));
    }
    Some(if neg { -q } else { q })
}

pub fn parse_integer(s: &str) -> CliResult<Integer> {
    exact::parse_integer(s).ok_or_else(|| CliError::input(format!("not an integer: {s:?}")))
}

/// Comma-separated rationals, e.g. `1,-1/2,0`.
pub fn parse_rational_list(s: &str) -> CliResult<Vec<Rational>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_rational).collect()
}

pub fn parse_integer_list(s: &str) -> CliResult<Vec<Integer>> {
    s.split(',').map(parse_integer).collect()
}

pub fn parse_f64_list(s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| CliError::input(format!("not a number: {t:?}"))))
        .collect()
}

/// Semicolon-separated list of comma-separated rows.
pub fn parse_rational_rows(s: &str) -> CliResult<Vec<Vec<Rational>>> {
    s.split(';').map(parse_rational_list).collect()
}

pub fn parse_f64_rows(s: &str) -> CliResult<Vec<Vec<f64>>> {
    s.split(';').map(parse_f64_list).collect()
}

fn json_rational(v: &Value) -> CliResult<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        other => Err(CliError::input(format!("expected a rational, found {other}"))),
    }
}

fn json_integer(v: &Value) -> CliResult<Integer> {
    let q = json_rational(v)?;
    if !q.is_integer() {
        return Err(CliError::input(format!("expected an integer, found {q}")));
    }
    Ok(q.to_integer())
}

fn json_f64(v: &Value) -> CliResult<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| CliError::input(format!("number out of range: {n}"))),
        Value::String(s) => s.trim().parse().map_err(|_| CliError::input(format!("not a number: {s:?}"))),
        other => Err(CliError::input(format!("expected a number, found {other}"))),
    }
}

fn json_usize(v: &Value, what: &str) -> CliResult<usize> {
    let n = json_integer(v)?;
    usize::try_from(&n).map_err(|_| CliError::input(format!("{what} must be a nonnegative integer, got {n}")))
}

fn field<'a>(v: &'a Value, key: &str) -> CliResult<&'a Value> {
    v.get(key).ok_or_else(|| CliError::input(format!("missing field {key:?}")))
}

fn array<'a>(v: &'a Value, what: &str) -> CliResult<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| CliError::input(format!("{what} must be an array")))
}

fn matrix<T>(v: &Value, what: &str, entry: impl Fn(&Value) -> CliResult<T>) -> CliResult<Vec<Vec<T>>> {
    array(v, what)?.iter().map(|row| array(row, what)?.iter().map(&entry).collect()).collect()
}

fn vector<T>(v: &Value, what: &str, entry: impl Fn(&Value) -> CliResult<T>) -> CliResult<Vec<T>> {
    array(v, what)?.iter().map(entry).collect()
}

pub fn rational_str(q: &Rational) -> Value {
    Value::String(exact::format_rational(q))
}

pub fn rational_array(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_str).collect())
}

pub fn rational_matrix(m: &[Vec<Rational>]) -> Value {
    Value::Array(m.iter().map(|r| rational_array(r)).collect())
}

pub fn integer_str(n: &Integer) -> Value {
    Value::String(n.to_string())
}

/// Shortest round-trip decimal text, switching to exponent form for very
/// small or very large magnitudes.
pub fn f64_str(x: f64) -> Value {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) || !x.is_finite() {
        Value::String(format!("{x}"))
    } else {
        Value::String(format!("{x:e}"))
    }
}

pub fn f64_array(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|x| f64_str(*x)).collect())
}

pub fn f64_matrix(m: &[Vec<f64>]) -> Value {
    Value::Array(m.iter().map(|r| f64_array(r)).collect())
}

/// `diag:a,b,…`, `name:U|E8_minus|K3`, inline JSON, or a JSON file
/// `{"rank": r, "gram": [[…]]}`.
pub fn parse_lattice(spec: &str) -> CliResult<IntegralLattice> {
    if let Some(list) = spec.strip_prefix("diag:") {
        let entries = parse_integer_list(list)?;
        let mut gram = vec![vec![Integer::zero(); entries.len()]; entries.len()];
        for (i, e) in entries.into_iter().enumerate() {
            gram[i][i] = e;
        }
        return Ok(IntegralLattice::new(gram)?);
    }
    if let Some(name) = spec.strip_prefix("name:") {
        return Ok(IntegralLattice::standard(name.parse::<StandardLattice>()?));
    }
    lattice_from_json(&load_json(spec)?)
}

pub fn lattice_from_json(v: &Value) -> CliResult<IntegralLattice> {
    let gram = matrix(field(v, "gram")?, "gram", json_integer)?;
    if let Some(rank) = v.get("rank") {
        let rank = json_usize(rank, "rank")?;
        if rank != gram.len() {
            return Err(CliError::input(format!("rank {rank} does not match a {}-row Gram matrix", gram.len())));
        }
    }
    Ok(IntegralLattice::new(gram)?)
}

pub fn lattice_json(l: &IntegralLattice) -> Value {
    json!({
        "rank": l.rank().to_string(),
        "gram": l.gram().iter().map(|r| r.iter().map(integer_str).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

/// `{"n": n, "c": "p/q", "gram": [[…]]}`.
pub fn fujiki_from_json(v: &Value) -> CliResult<FujikiData> {
    let n = json_usize(field(v, "n")?, "n")?;
    let n = u32::try_from(n).map_err(|_| CliError::input("n is too large"))?;
    let c = json_rational(field(v, "c")?)?;
    let gram = matrix(field(v, "gram")?, "gram", json_rational)?;
    Ok(FujikiData::new(n, gram, c)?)
}

pub fn fujiki_json(fd: &FujikiData) -> Value {
    json!({ "n": fd.n().to_string(), "c": rational_str(fd.c()), "gram": rational_matrix(fd.form()) })
}

/// `{"dim": d, "order": k, "values": […]}` with `d^k` row-major entries.
pub fn table_from_json(v: &Value) -> CliResult<IntersectionTable> {
    let dim = json_usize(field(v, "dim")?, "dim")?;
    let order = json_usize(field(v, "order")?, "order")?;
    let values = vector(field(v, "values")?, "values", json_rational)?;
    Ok(IntersectionTable::new(dim, order, values)?)
}

/// `{"re": […], "im": […], "im_scale": "s"}`, the last field optional.
pub fn point_from_json(v: &Value) -> CliResult<PeriodPoint> {
    let re = vector(field(v, "re")?, "re", json_rational)?;
    let im = vector(field(v, "im")?, "im", json_rational)?;
    let scale = match v.get("im_scale") {
        Some(s) => json_rational(s)?,
        None => Rational::one(),
    };
    Ok(PeriodPoint::with_im_scale(re, im, scale)?)
}

pub fn point_json(p: &PeriodPoint) -> Value {
    let mut v = json!({ "re": rational_array(p.re()), "im": rational_array(p.im()) });
    if !p.is_rational() {
        v["im_scale"] = rational_str(p.im_scale());
    }
    v
}

pub fn series_json(s: &IntegerSeries) -> Value {
    json!({
        "truncation": s.truncation().to_string(),
        "coeffs": s.coeffs().iter().map(integer_str).collect::<Vec<_>>(),
    })
}

/// Metric specifications:
///
/// * `{"dim": n, "catalog": "euclidean" | "torus" | "sphere" | "fubini_study", "params": {…}}`
///   with `params.period` for the torus and `params.r` for the sphere;
/// * `{"catalog": "product", "factors": [spec, spec]}` and
///   `{"catalog": "scaled", "params": {"c": c}, "base": spec}`;
/// * `{"dim": n, "poly_entries": [[entry, …], …]}` where each entry maps a
///   comma-separated exponent vector to a coefficient, e.g. `{"0,0": 1, "2,0": 0.5}`.
pub fn metric_from_json(v: &Value) -> CliResult<Metric> {
    if let Some(entries) = v.get("poly_entries") {
        let rows = matrix(entries, "poly_entries", polynomial_from_json)?;
        if let Some(d) = v.get("dim") {
            let d = json_usize(d, "dim")?;
            if d != rows.len() {
                return Err(CliError::input(format!("dim {d} does not match {} rows", rows.len())));
            }
        }
        return Ok(Metric::Polynomial(rows));
    }
    let catalog = field(v, "catalog")?.as_str().ok_or_else(|| CliError::input("catalog must be a string"))?;
    let param = |key: &str| -> CliResult<Option<f64>> {
        v.get("params").and_then(|p| p.get(key)).map(json_f64).transpose()
    };
    let dim = || -> CliResult<usize> { json_usize(field(v, "dim")?, "dim") };
    match catalog {
        "euclidean" => Ok(Metric::Euclidean { dim: dim()? }),
        "torus" => Ok(Metric::FlatTorus { dim: dim()?, period: param("period")?.unwrap_or(1.0) }),
        "sphere" => Ok(Metric::Sphere { dim: dim()?, radius: param("r")?.unwrap_or(1.0) }),
        "fubini_study" => {
            let d = dim()?;
            if d % 2 != 0 {
                return Err(CliError::input("Fubini–Study needs an even real dimension"));
            }
            Ok(Metric::FubiniStudy { complex_dim: d / 2 })
        }
        "product" => {
            let factors = array(field(v, "factors")?, "factors")?;
            let mut it = factors.iter().map(metric_from_json);
            let first = it.next().ok_or_else(|| CliError::input("product needs factors"))??;
            it.try_fold(first, |acc, m| Ok(Metric::Product(Box::new(acc), Box::new(m?))))
        }
        "scaled" => {
            let c = param("c")?.ok_or_else(|| CliError::input("scaled metric needs params.c"))?;
            Ok(Metric::Scaled(c, Box::new(metric_from_json(field(v, "base")?)?)))
        }
        other => Err(CliError::input(format!("unknown metric catalog entry {other:?}"))),
    }
}

fn polynomial_from_json(v: &Value) -> CliResult<Polynomial> {
    match v {
        Value::Object(m) => {
            let mut terms = Vec::with_capacity(m.len());
            for (exps, coeff) in m {
                let e = exps
                    .split(',')
                    .map(|t| t.trim().parse::<u32>().map_err(|_| CliError::input(format!("bad exponent vector {exps:?}"))))
                    .collect::<CliResult<Vec<u32>>>()?;
                terms.push((json_f64(coeff)?, e));
            }
            Ok(Polynomial::new(terms))
        }
        other => Err(CliError::input(format!("polynomial entry must be an object, found {other}"))),
    }
}

/// `{"vertices": [[…], …]}` or a bare array of vertices.
pub fn polyline_from_json(v: &Value) -> CliResult<Polyline> {
    let vertices = match v.get("vertices") {
        Some(vs) => vs,
        None => v,
    };
    Ok(Polyline::new(matrix(vertices, "vertices", json_f64)?)?)
}
