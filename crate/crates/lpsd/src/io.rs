//! Matrix, vector and quartic file formats.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use lpsd_core::quartic::QuarticPoly;
use lpsd_core::{Rational, SymMatrix};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("cannot read {path}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] lpsd_core::Error),
}

fn invalid(msg: impl Into<String>) -> FormatError {
    FormatError::Invalid(msg.into())
}

/// A matrix loaded from disk, in the mode its file declared.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixFile {
    Float(SymMatrix<f64>),
    Exact(SymMatrix<Rational>),
}

impl MatrixFile {
    pub fn to_f64(&self) -> SymMatrix<f64> {
        match self {
            MatrixFile::Float(m) => m.clone(),
            MatrixFile::Exact(m) => m.to_f64(),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            MatrixFile::Float(m) => m.n(),
            MatrixFile::Exact(m) => m.n(),
        }
    }
}

/// Parses `"p/q"`, `"p"` or a JSON integer as an exact rational.
pub fn parse_rational(v: &Value) -> Result<Rational, FormatError> {
    match v {
        Value::String(s) => {
            let s = s.trim();
            let (p, q) = s.split_once('/').unwrap_or((s, "1"));
            let p = BigInt::from_str(p.trim()).map_err(|_| invalid(format!("bad numerator in {s:?}")))?;
            let q = BigInt::from_str(q.trim()).map_err(|_| invalid(format!("bad denominator in {s:?}")))?;
            if q.is_zero() {
                return Err(invalid(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(p, q))
        }
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Rational::from_integer(BigInt::from(i))),
            None => Err(invalid(format!("exact entries must be integers or \"p/q\" strings, got {n}"))),
        },
        other => Err(invalid(format!("expected a rational entry, got {other}"))),
    }
}

fn parse_float(v: &Value) -> Result<f64, FormatError> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| invalid(format!("bad number {n}"))),
        Value::String(s) => {
            let r = parse_rational(v)?;
            r.to_f64().ok_or_else(|| invalid(format!("entry {s:?} does not fit a float")))
        }
        other => Err(invalid(format!("expected a number, got {other}"))),
    }
}

fn build<T: lpsd_core::Scalar>(rows: Vec<Vec<T>>, symmetrize: bool) -> Result<SymMatrix<T>, FormatError> {
    Ok(if symmetrize {
        SymMatrix::from_rows_symmetrized(rows)?
    } else {
        SymMatrix::from_rows(rows)?
    })
}

/// `{"n": int, "mode": "float"|"exact", "rows": [[...], ...]}`.
pub fn parse_matrix_json(text: &str, symmetrize: bool) -> Result<MatrixFile, FormatError> {
    let doc: Value = serde_json::from_str(text)?;
    let rows = doc
        .get("rows")
        .and_then(Value::as_array)
        .ok_or_else(|| invalid("missing \"rows\" array"))?;
    let mode = doc.get("mode").and_then(Value::as_str).unwrap_or("float");
    if let Some(n) = doc.get("n") {
        let n = n.as_u64().ok_or_else(|| invalid("\"n\" must be a positive integer"))?;
        if n as usize != rows.len() {
            return Err(invalid(format!("\"n\" is {n} but {} rows given", rows.len())));
        }
    }
    let cells = |row: &Value| -> Result<Vec<Value>, FormatError> {
        row.as_array().cloned().ok_or_else(|| invalid("each row must be an array"))
    };
    match mode {
        "float" => {
            let rows = rows
                .iter()
                .map(|r| cells(r)?.iter().map(parse_float).collect())
                .collect::<Result<Vec<Vec<f64>>, _>>()?;
            Ok(MatrixFile::Float(build(rows, symmetrize)?))
        }
        "exact" => {
            let rows = rows
                .iter()
                .map(|r| cells(r)?.iter().map(parse_rational).collect())
                .collect::<Result<Vec<Vec<Rational>>, _>>()?;
            Ok(MatrixFile::Exact(build(rows, symmetrize)?))
        }
        other => Err(invalid(format!("unknown mode {other:?}"))),
    }
}

/// Whitespace-separated rows of floats, one row per line.
pub fn parse_matrix_text(text: &str, symmetrize: bool) -> Result<MatrixFile, FormatError> {
    let rows = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|_| invalid(format!("bad number {t:?}"))))
                .collect()
        })
        .collect::<Result<Vec<Vec<f64>>, _>>()?;
    if rows.is_empty() {
        return Err(invalid("empty matrix"));
    }
    Ok(MatrixFile::Float(build(rows, symmetrize)?))
}

pub fn parse_matrix(text: &str, symmetrize: bool) -> Result<MatrixFile, FormatError> {
    if text.trim_start().starts_with('{') {
        parse_matrix_json(text, symmetrize)
    } else {
        parse_matrix_text(text, symmetrize)
    }
}

pub fn read_text(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Read {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_matrix(path: &Path, symmetrize: bool) -> Result<MatrixFile, FormatError> {
    parse_matrix(&read_text(path)?, symmetrize)
}

/// Comma or whitespace separated floats, or a JSON array.
pub fn parse_vector(text: &str) -> Result<Vec<f64>, FormatError> {
    let text = text.trim();
    let v: Vec<f64> = if text.starts_with('[') {
        let doc: Vec<Value> = serde_json::from_str(text)?;
        doc.iter().map(parse_float).collect::<Result<_, _>>()?
    } else {
        text.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<f64>().map_err(|_| invalid(format!("bad number {t:?}"))))
            .collect::<Result<_, _>>()?
    };
    if v.is_empty() {
        return Err(invalid("empty vector"));
    }
    if let Some(bad) = v.iter().find(|x| !x.is_finite()) {
        return Err(invalid(format!("non-finite entry {bad}")));
    }
    Ok(v)
}

/// `[a0, a1, a2, a3]` for `a0 + a1 x + a2 x^2 + a3 x^3 + x^4`.
pub fn parse_quartic(text: &str) -> Result<QuarticPoly, FormatError> {
    let v = parse_vector(text)?;
    let [a0, a1, a2, a3] = v[..] else {
        return Err(invalid(format!("a quartic needs 4 coefficients, got {}", v.len())));
    };
    Ok(QuarticPoly::new(a0, a1, a2, a3))
}

pub fn rational_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn matrix_json(m: &SymMatrix<f64>) -> Value {
    json!({ "n": m.n(), "mode": "float", "rows": m.rows() })
}

pub fn exact_matrix_json(m: &SymMatrix<Rational>) -> Value {
    let rows: Vec<Vec<String>> = m
        .rows()
        .iter()
        .map(|r| r.iter().map(rational_string).collect())
        .collect();
    json!({ "n": m.n(), "mode": "exact", "rows": rows })
}

pub fn matrix_file_json(m: &MatrixFile) -> Value {
    match m {
        MatrixFile::Float(m) => matrix_json(m),
        MatrixFile::Exact(m) => exact_matrix_json(m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lpsd_core::Scalar;

    #[test]
    fn exact_json_round_trip() {
        let text = r#"{"n": 2, "mode": "exact", "rows": [["1/2", -3], ["-3", "4/6"]]}"#;
        let m = parse_matrix_json(text, false).unwrap();
        let MatrixFile::Exact(e) = &m else { panic!("exact mode expected") };
        assert_eq!(*e.get(1, 1), Rational::from_ratio(2, 3));
        let again = parse_matrix_json(&matrix_file_json(&m).to_string(), false).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn asymmetric_input_needs_flag() {
        let text = "1 2\n3 4\n";
        assert!(parse_matrix(text, false).is_err());
        let m = parse_matrix(text, true).unwrap().to_f64();
        assert_eq!(*m.get(0, 1), 2.5);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let text = r#"{"n": 3, "mode": "float", "rows": [[1, 0], [0, 1]]}"#;
        assert!(parse_matrix_json(text, false).is_err());
    }

    #[test]
    fn vectors_and_quartics() {
        assert_eq!(parse_vector("1, 1,1 -1").unwrap(), vec![1.0, 1.0, 1.0, -1.0]);
        assert_eq!(parse_vector("[2, \"1/2\"]").unwrap(), vec![2.0, 0.5]);
        assert!(parse_vector("1,x").is_err());
        let p = parse_quartic("-16,16,0,-4").unwrap();
        assert_eq!(p.coeffs(), [-16.0, 16.0, 0.0, -4.0]);
        assert!(parse_quartic("1,2,3").is_err());
    }
}
