//! JSON input formats: integer matrices, Siegel points and run configs.
//!
//! Integer entries may be JSON integers or decimal strings (for entries
//! beyond 64 bits).

use crate::error::{Error, Result};
use crate::exact::ZMat;
use crate::symplectic::{IntegerSymplectic, RMat, SiegelPoint};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Row cap on untrusted input.
const MAX_DIM: usize = 64;

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn int_entry(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => Ok(BigInt::from(i)),
            (None, Some(u)) => Ok(BigInt::from(u)),
            _ => Err(Error::Parse(format!("{n} is not an integer"))),
        },
        Value::String(s) => s.trim().parse::<BigInt>().map_err(|_| Error::Parse(format!("{s:?} is not an integer"))),
        other => Err(Error::Parse(format!("expected an integer, found {other}"))),
    }
}

fn real_entry(v: &Value) -> Result<f64> {
    let x = v.as_f64().ok_or_else(|| Error::Parse(format!("expected a number, found {v}")))?;
    if !x.is_finite() {
        return Err(Error::Parse("non-finite entry".into()));
    }
    Ok(x)
}

fn rows_of<T>(v: &Value, entry: impl Fn(&Value) -> Result<T>) -> Result<Vec<Vec<T>>> {
    let rows = v.as_array().ok_or_else(|| Error::Parse("a matrix is an array of rows".into()))?;
    if rows.is_empty() || rows.len() > MAX_DIM {
        return Err(Error::Shape(format!("matrix must have between 1 and {MAX_DIM} rows")));
    }
    let out: Vec<Vec<T>> = rows
        .iter()
        .map(|r| r.as_array().ok_or_else(|| Error::Parse("each row must be an array".into()))?.iter().map(&entry).collect())
        .collect::<Result<_>>()?;
    if out.iter().any(|r| r.len() != out[0].len()) {
        return Err(Error::Shape("ragged rows".into()));
    }
    Ok(out)
}

/// Matrix body: either a bare array of rows or `{"matrix": [...]}`.
fn matrix_value(v: &Value) -> &Value {
    v.get("matrix").unwrap_or(v)
}

pub fn parse_int_matrix(text: &str) -> Result<ZMat> {
    let v = parse_json(text)?;
    ZMat::from_rows(rows_of(matrix_value(&v), int_entry)?)
}

/// Integer matrix that must also be symplectic.
pub fn parse_symplectic(text: &str) -> Result<IntegerSymplectic> {
    IntegerSymplectic::new(parse_int_matrix(text)?)
}

/// `{"x": [[..]], "y": [[..]]}` with `x`, `y` real symmetric and `y > 0`.
pub fn parse_siegel_point(text: &str) -> Result<SiegelPoint> {
    let v = parse_json(text)?;
    let field = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("missing field {k:?}")));
    let to_mat = |rows: Vec<Vec<f64>>| {
        let (n, c) = (rows.len(), rows[0].len());
        RMat::from_fn(n, c, |i, j| rows[i][j])
    };
    let x = to_mat(rows_of(field("x")?, real_entry)?);
    let y = to_mat(rows_of(field("y")?, real_entry)?);
    SiegelPoint::new(x, y)
}

/// Optional run settings; every field mirrors a CLI flag of the same name.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfig {
    pub m: Option<usize>,
    pub trials: Option<usize>,
    pub tol: Option<f64>,
    pub tail_tol: Option<f64>,
    pub seed: Option<u64>,
    pub max_radius: Option<usize>,
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if cfg.m.is_some_and(|m| m == 0 || m > 8) {
        return Err(Error::Parameter("m must be between 1 and 8".into()));
    }
    for (name, v) in [("tol", cfg.tol), ("tail-tol", cfg.tail_tol)] {
        if v.is_some_and(|t| !(t > 0.0 && t.is_finite())) {
            return Err(Error::Parameter(format!("{name} must be positive and finite")));
        }
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrices() {
        let g = parse_symplectic("[[0,1],[-1,0]]").unwrap();
        assert_eq!(g.genus(), 1);
        let big = parse_int_matrix(r#"{"matrix": [["123456789012345678901234567890", 1]]}"#).unwrap();
        assert_eq!(big.get(0, 0).to_string(), "123456789012345678901234567890");
        assert!(matches!(parse_int_matrix("[[1,2],[3]]"), Err(Error::Shape(_))));
        assert!(matches!(parse_int_matrix("[[1.5]]"), Err(Error::Parse(_))));
        assert!(matches!(parse_int_matrix("[]"), Err(Error::Shape(_))));
        assert!(matches!(parse_symplectic("[[1,1],[1,1]]"), Err(Error::Domain(_))));
        assert!(matches!(parse_symplectic("[[1,0,0]]"), Err(Error::Shape(_))));
        assert!(parse_int_matrix("not json").is_err());
    }

    #[test]
    fn points() {
        let z = parse_siegel_point(r#"{"x": [[0.5]], "y": [[2]]}"#).unwrap();
        assert_eq!(z.y[(0, 0)], 2.0);
        assert!(parse_siegel_point(r#"{"x": [[0]], "y": [[-1]]}"#).is_err());
        assert!(parse_siegel_point(r#"{"x": [[0]]}"#).is_err());
        assert!(parse_siegel_point(r#"{"x": [[0, 1], [0, 0]], "y": [[1, 0], [0, 1]]}"#).is_err());
    }

    #[test]
    fn configs() {
        let c = parse_config(r#"{"m": 2, "tail-tol": 1e-10}"#).unwrap();
        assert_eq!(c.m, Some(2));
        assert_eq!(c.tail_tol, Some(1e-10));
        assert!(parse_config(r#"{"bogus": 1}"#).is_err());
        assert!(parse_config(r#"{"tol": -1}"#).is_err());
        assert!(parse_config(r#"{"m": 0}"#).is_err());
    }
}
