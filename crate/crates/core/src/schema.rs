//! JSON input parsing and output rendering. Rationals travel as `"p/q"` strings (integers may
//! also be plain JSON numbers on input); integers are emitted as numbers when they fit in 64
//! bits and as decimal strings otherwise.

use num::{BigInt, BigRational, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::algebra::{FiniteDimAlgebra, Involution, InvolutiveOrder};
use crate::error::{Error, Result};
use crate::hermitian::HermitianModule;
use crate::hodge::{HodgeDecomposition, PolarisedComplexStructure};
use crate::lattice::{OrthoDecomposition, ZLattice};
use crate::linalg::matrix::{IntMatrix, RatMatrix};

fn schema(field: &str, reason: impl Into<String>) -> Error {
    Error::schema(field, reason)
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value> {
    v.as_object()
        .ok_or_else(|| schema("<root>", "expected a JSON object"))?
        .get(name)
        .ok_or_else(|| schema(name, "missing field"))
}

pub fn parse_integer(v: &Value, at: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| schema(at, format!("expected an integer, got {n}"))),
        Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|_| schema(at, format!("expected an integer, got {s:?}"))),
        other => Err(schema(at, format!("expected an integer, got {other}"))),
    }
}

pub fn parse_rational(v: &Value, at: &str) -> Result<BigRational> {
    let Value::String(s) = v else {
        return parse_integer(v, at).map(BigRational::from_integer);
    };
    let bad = || schema(at, format!("expected a rational \"p/q\", got {s:?}"));
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(s.trim().parse().map_err(|_| bad())?)),
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(schema(at, "zero denominator"));
            }
            Ok(BigRational::new(p, q))
        }
    }
}

fn array<'a>(v: &'a Value, at: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| schema(at, "expected an array"))
}

fn parse_vec<T>(v: &Value, at: &str, f: impl Fn(&Value, &str) -> Result<T>) -> Result<Vec<T>> {
    array(v, at)?
        .iter()
        .enumerate()
        .map(|(i, x)| f(x, &format!("{at}[{i}]")))
        .collect()
}

fn parse_matrix<T: Clone>(
    v: &Value,
    at: &str,
    f: impl Fn(&Value, &str) -> Result<T> + Copy,
) -> Result<Vec<Vec<T>>> {
    let rows = parse_vec(v, at, |r, p| parse_vec(r, p, f))?;
    if let Some(first) = rows.first() {
        if let Some(i) = rows.iter().position(|r| r.len() != first.len()) {
            return Err(schema(&format!("{at}[{i}]"), "rows have different lengths"));
        }
    }
    Ok(rows)
}

pub fn parse_rat_matrix(v: &Value, at: &str) -> Result<RatMatrix> {
    let rows = parse_matrix(v, at, parse_rational)?;
    let cols = rows.first().map_or(0, Vec::len);
    Ok(RatMatrix::from_rows(rows, cols))
}

pub fn parse_int_matrix(v: &Value, at: &str) -> Result<IntMatrix> {
    let rows = parse_matrix(v, at, parse_integer)?;
    let cols = rows.first().map_or(0, Vec::len);
    Ok(IntMatrix::from_rows(rows, cols))
}

fn parse_square(v: &Value, at: &str) -> Result<RatMatrix> {
    let m = parse_rat_matrix(v, at)?;
    if m.rows() == 0 || !m.is_square() {
        return Err(schema(at, "expected a non-empty square matrix"));
    }
    Ok(m)
}

/// `{"gram": [[q, ...], ...]}`.
pub fn parse_lattice(v: &Value) -> Result<ZLattice> {
    ZLattice::from_matrix(parse_square(field(v, "gram")?, "gram")?)
}

fn parse_dim(v: &Value) -> Result<usize> {
    let d = parse_integer(field(v, "dim")?, "dim")?;
    d.to_usize()
        .filter(|&d| d > 0)
        .ok_or_else(|| schema("dim", "expected a positive integer"))
}

/// `{"dim", "structure_constants", "one", "involution"}` as a rational algebra with involution.
pub fn parse_algebra(v: &Value) -> Result<(FiniteDimAlgebra, Involution)> {
    let d = parse_dim(v)?;
    let c = parse_vec(
        field(v, "structure_constants")?,
        "structure_constants",
        |m, at| parse_matrix(m, at, parse_rational),
    )?;
    let one = parse_vec(field(v, "one")?, "one", parse_rational)?;
    let s = parse_rat_matrix(field(v, "involution")?, "involution")?;
    if c.len() != d || c.iter().any(|m| m.len() != d || m.iter().any(|r| r.len() != d)) {
        return Err(schema(
            "structure_constants",
            format!("expected shape {d}x{d}x{d}"),
        ));
    }
    if one.len() != d {
        return Err(schema("one", format!("expected length {d}")));
    }
    if s.rows() != d || s.cols() != d {
        return Err(schema("involution", format!("expected a {d}x{d} matrix")));
    }
    let alg = FiniteDimAlgebra::new(d, c, one)?;
    let inv = Involution::new(&alg, s)?;
    Ok((alg, inv))
}

pub fn parse_order(v: &Value) -> Result<InvolutiveOrder> {
    let (alg, inv) = parse_algebra(v)?;
    InvolutiveOrder::new(alg, inv)
}

/// The algebra schema plus `"action"` (one `N x N` matrix per basis element) and `"form"`
/// (`N x N` array of algebra coordinate vectors).
pub fn parse_hermitian(v: &Value) -> Result<HermitianModule> {
    let order = parse_order(v)?;
    let action = parse_vec(field(v, "action")?, "action", parse_rat_matrix)?;
    let form = parse_vec(field(v, "form")?, "form", |row, at| {
        parse_vec(row, at, |x, at| parse_vec(x, at, parse_rational))
    })?;
    if form.is_empty() {
        return Err(schema("form", "expected a non-empty array"));
    }
    HermitianModule::new(order, action, form)
}

/// `{"g": g, "J": [[q, ...]], "psi": [[int, ...]]}`.
pub fn parse_hodge(v: &Value) -> Result<PolarisedComplexStructure> {
    let g = parse_integer(field(v, "g")?, "g")?
        .to_usize()
        .filter(|&g| g > 0)
        .ok_or_else(|| schema("g", "expected a positive integer"))?;
    let j = parse_rat_matrix(field(v, "J")?, "J")?;
    let psi = parse_int_matrix(field(v, "psi")?, "psi")?;
    if j.rows() != 2 * g || j.cols() != 2 * g {
        return Err(schema("J", format!("expected a {0}x{0} matrix", 2 * g)));
    }
    if psi.rows() != 2 * g || psi.cols() != 2 * g {
        return Err(schema("psi", format!("expected a {0}x{0} matrix", 2 * g)));
    }
    PolarisedComplexStructure::new(j, psi)
}

pub fn int_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn rat_json(x: &BigRational) -> Value {
    json!(x.to_string())
}

pub fn int_vec_json(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int_json).collect())
}

pub fn int_matrix_json(m: &IntMatrix) -> Value {
    Value::Array(m.row_iter().map(int_vec_json).collect())
}

pub fn rat_matrix_json(m: &RatMatrix) -> Value {
    Value::Array(
        m.row_iter()
            .map(|r| Value::Array(r.iter().map(rat_json).collect()))
            .collect(),
    )
}

pub fn decomposition_json(d: &OrthoDecomposition) -> Value {
    let blocks = d
        .blocks
        .iter()
        .map(|b| json!({"basis": int_matrix_json(&b.basis), "gram": rat_matrix_json(&b.gram)}))
        .collect::<Vec<_>>();
    json!({ "blocks": blocks })
}

pub fn hodge_json(d: &HodgeDecomposition) -> Value {
    let blocks = d
        .blocks
        .iter()
        .map(|b| {
            json!({
                "basis": int_matrix_json(&b.basis),
                "J": rat_matrix_json(&b.j),
                "psi": int_matrix_json(&b.psi),
            })
        })
        .collect::<Vec<_>>();
    json!({ "blocks": blocks })
}

/// `{"error": kind, "message": text, "witness": ...}`; the witness is the offending vector for
/// a non-positive involution and the 1-based minor index for a non-definite Gram matrix.
pub fn error_json(e: &Error) -> Value {
    let witness = match e {
        Error::NotPositiveInvolution { witness } => int_vec_json(witness),
        Error::NotPositiveDefinite { minor } => json!(minor),
        Error::NotSymmetric { row, col } => json!([row, col]),
        Error::Schema { field, .. } => json!(field),
        _ => Value::Null,
    };
    let mut m = Map::new();
    m.insert("error".into(), json!(e.kind()));
    m.insert("message".into(), json!(e.to_string()));
    m.insert("witness".into(), witness);
    Value::Object(m)
}
