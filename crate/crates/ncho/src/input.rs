//! Input files and inline arguments.
//!
//! Matrix pairs are JSON objects `{"A": [[..],[..]], "B": [[..],[..]]}` whose
//! entries are either bare numbers or `[re, im]`. Coefficient vectors are
//! `{"parity": "even"|"odd", "alpha": α, "blocks": [[v0, v1], ...]}` with the
//! same entry syntax.

use std::path::Path;

use ncho_core::matrix::{validate_pair, Mat2};
use ncho_core::region::{Axis, Tetrad};
use ncho_core::{CoeffVector, Complex64, HermitianPair, Parity, C2};
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn parse_json(text: &str, origin: &str) -> CliResult<Value> {
    serde_json::from_str(text).map_err(|e| CliError::Syntax {
        path: origin.to_owned(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn schema(origin: &str, field: &str, message: impl Into<String>) -> CliError {
    CliError::Schema { path: origin.to_owned(), field: field.to_owned(), message: message.into() }
}

fn object<'a>(v: &'a Value, origin: &str, allowed: &[&str]) -> CliResult<&'a Map<String, Value>> {
    let map = v.as_object().ok_or_else(|| schema(origin, "$", "expected an object"))?;
    if let Some(k) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(schema(origin, k, format!("unknown field (expected one of {})", allowed.join(", "))));
    }
    Ok(map)
}

fn field<'a>(map: &'a Map<String, Value>, key: &str, origin: &str) -> CliResult<&'a Value> {
    map.get(key).ok_or_else(|| schema(origin, key, "missing"))
}

fn finite(v: &Value, origin: &str, field: &str) -> CliResult<f64> {
    match v.as_f64() {
        Some(x) if x.is_finite() => Ok(x),
        _ => Err(schema(origin, field, "expected a finite number")),
    }
}

fn complex(v: &Value, origin: &str, field: &str) -> CliResult<Complex64> {
    match v {
        Value::Number(_) => Ok(Complex64::new(finite(v, origin, field)?, 0.0)),
        Value::Array(parts) if parts.len() == 2 => {
            Ok(Complex64::new(finite(&parts[0], origin, field)?, finite(&parts[1], origin, field)?))
        }
        _ => Err(schema(origin, field, "expected a number or [re, im]")),
    }
}

fn matrix(v: &Value, origin: &str, name: &str) -> CliResult<Mat2> {
    let rows = v.as_array().filter(|r| r.len() == 2).ok_or_else(|| schema(origin, name, "expected a 2x2 array"))?;
    let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .filter(|r| r.len() == 2)
            .ok_or_else(|| schema(origin, &format!("{name}[{i}]"), "expected a row of 2 entries"))?;
        for (j, x) in row.iter().enumerate() {
            m[i][j] = complex(x, origin, &format!("{name}[{i}][{j}]"))?;
        }
    }
    Ok(m)
}

/// Parses and validates a pair; `origin` names the source in diagnostics.
pub fn parse_pair(text: &str, origin: &str) -> CliResult<HermitianPair> {
    let v = parse_json(text, origin)?;
    let map = object(&v, origin, &["A", "B"])?;
    let a = matrix(field(map, "A", origin)?, origin, "A")?;
    let b = matrix(field(map, "B", origin)?, origin, "B")?;
    Ok(validate_pair(&a, &b)?)
}

pub fn parse_pair_file(path: &Path) -> CliResult<HermitianPair> {
    parse_pair(&read_text(path)?, &path.display().to_string())
}

fn parse_parity(s: &str) -> Option<Parity> {
    match s {
        "even" => Some(Parity::Even),
        "odd" => Some(Parity::Odd),
        _ => None,
    }
}

/// A coefficient vector together with the basis scale it is expanded in.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffFile {
    pub alpha: f64,
    pub vector: CoeffVector,
}

pub fn parse_coeffs(text: &str, origin: &str) -> CliResult<CoeffFile> {
    let v = parse_json(text, origin)?;
    let map = object(&v, origin, &["parity", "alpha", "blocks"])?;
    let parity = field(map, "parity", origin)?
        .as_str()
        .and_then(parse_parity)
        .ok_or_else(|| schema(origin, "parity", "expected \"even\" or \"odd\""))?;
    let alpha = finite(field(map, "alpha", origin)?, origin, "alpha")?;
    let blocks = field(map, "blocks", origin)?
        .as_array()
        .filter(|b| !b.is_empty())
        .ok_or_else(|| schema(origin, "blocks", "expected a non-empty array"))?;
    let mut out: Vec<C2> = Vec::with_capacity(blocks.len());
    for (k, blk) in blocks.iter().enumerate() {
        let name = format!("blocks[{k}]");
        let pair = blk.as_array().filter(|p| p.len() == 2).ok_or_else(|| schema(origin, &name, "expected 2 entries"))?;
        out.push([complex(&pair[0], origin, &format!("{name}[0]"))?, complex(&pair[1], origin, &format!("{name}[1]"))?]);
    }
    Ok(CoeffFile { alpha, vector: CoeffVector::new(parity, out) })
}

pub fn parse_coeffs_file(path: &Path) -> CliResult<CoeffFile> {
    parse_coeffs(&read_text(path)?, &path.display().to_string())
}

fn number(what: &'static str, input: &str, s: &str) -> CliResult<f64> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| CliError::argument(what, input, format!("`{s}` is not a finite number")))
}

/// `b,a,c,|ξ|`.
pub fn parse_tetrad(s: &str) -> CliResult<Tetrad> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(CliError::argument("tetrad", s, "expected four comma-separated numbers b,a,c,xi"));
    }
    let v: Vec<f64> = parts.iter().map(|p| number("tetrad", s, p)).collect::<CliResult<_>>()?;
    Ok(Tetrad::new(v[0], v[1], v[2], v[3]))
}

/// `lo:hi:n`.
pub fn parse_axis(s: &str) -> CliResult<Axis> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::argument("range", s, "expected lo:hi:n"));
    }
    let lo = number("range", s, parts[0])?;
    let hi = number("range", s, parts[1])?;
    let n: usize = parts[2].trim().parse().map_err(|_| CliError::argument("range", s, "n must be a positive integer"))?;
    if n == 0 || lo > hi {
        return Err(CliError::argument("range", s, "need lo <= hi and n >= 1"));
    }
    Ok(Axis::new(lo, hi, n))
}

/// Comma-separated positive integers.
pub fn parse_list(s: &str) -> CliResult<Vec<usize>> {
    s.split(',')
        .map(|p| match p.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(CliError::argument("list", s, format!("`{p}` is not a positive integer"))),
        })
        .collect()
}
