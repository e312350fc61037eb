//! JSON form of curvature operators.
//!
//! ```json
//! {"n": 4, "basis": "lex-pairs", "matrix": [[...], ...],
//!  "convention": "sec(X∧Y)=R(X∧Y,X∧Y)"}
//! ```
//!
//! Validation errors carry a JSON pointer to the offending field.

use nalgebra::DMatrix;
use serde::Serialize;
use serde_json::Value;

use crate::curvature::CurvatureOperator;
use crate::error::{Error, Result};

pub const BASIS: &str = "lex-pairs";
pub const CONVENTION: &str = "sec(X∧Y)=R(X∧Y,X∧Y)";
/// Inputs more asymmetric than this get a warning in reports.
pub const ASYMMETRY_WARNING: f64 = 1e-6;

#[derive(Clone, Debug, Serialize)]
pub struct OperatorDocument {
    pub n: usize,
    pub basis: &'static str,
    pub matrix: Vec<Vec<f64>>,
    pub convention: &'static str,
}

impl From<&CurvatureOperator> for OperatorDocument {
    fn from(r: &CurvatureOperator) -> Self {
        Self {
            n: r.n(),
            basis: BASIS,
            matrix: matrix_rows(r.matrix()),
            convention: CONVENTION,
        }
    }
}

pub fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|row| row.iter().copied().collect()).collect()
}

fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        pointer: pointer.into(),
        message: message.into(),
    }
}

pub fn parse_operator(text: &str) -> Result<CurvatureOperator> {
    let value: Value = serde_json::from_str(text).map_err(|e| schema("", format!("invalid JSON: {e}")))?;
    operator_from_value(&value)
}

pub fn operator_from_value(value: &Value) -> Result<CurvatureOperator> {
    let obj = value.as_object().ok_or_else(|| schema("", "expected a JSON object"))?;
    let n = obj
        .get("n")
        .ok_or_else(|| schema("/n", "missing field"))?
        .as_u64()
        .ok_or_else(|| schema("/n", "expected a non-negative integer"))? as usize;
    if n < 2 {
        return Err(schema("/n", "dimension must be at least 2"));
    }
    for (key, expected) in [("basis", BASIS), ("convention", CONVENTION)] {
        let pointer = format!("/{key}");
        let found = obj
            .get(key)
            .ok_or_else(|| schema(pointer.clone(), "missing field"))?
            .as_str()
            .ok_or_else(|| schema(pointer.clone(), "expected a string"))?;
        let squash = |s: &str| s.split_whitespace().collect::<String>();
        if squash(found) != squash(expected) {
            return Err(schema(pointer, format!("expected \"{expected}\", found \"{found}\"")));
        }
    }
    let dim = n * (n - 1) / 2;
    let rows = obj
        .get("matrix")
        .ok_or_else(|| schema("/matrix", "missing field"))?
        .as_array()
        .ok_or_else(|| schema("/matrix", "expected an array of rows"))?;
    if rows.len() != dim {
        return Err(schema(
            "/matrix",
            format!("expected {dim} rows for n = {n}, found {}", rows.len()),
        ));
    }
    let mut m = DMatrix::zeros(dim, dim);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| schema(format!("/matrix/{i}"), "expected an array"))?;
        if row.len() != dim {
            return Err(schema(
                format!("/matrix/{i}"),
                format!("expected {dim} entries, found {}", row.len()),
            ));
        }
        for (j, v) in row.iter().enumerate() {
            m[(i, j)] = v
                .as_f64()
                .filter(|x| x.is_finite())
                .ok_or_else(|| schema(format!("/matrix/{i}/{j}"), "expected a finite number"))?;
        }
    }
    CurvatureOperator::new(n, m)
}

/// Warning text when the input matrix was noticeably asymmetric.
pub fn asymmetry_warning(r: &CurvatureOperator) -> Option<String> {
    (r.ingest_asymmetry() > ASYMMETRY_WARNING).then(|| {
        format!(
            "input matrix asymmetric by {:.3e}; its symmetric part was used",
            r.ingest_asymmetry()
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pointer_of(text: &str) -> String {
        match parse_operator(text) {
            Err(Error::Schema { pointer, .. }) => pointer,
            other => panic!("expected a schema error, got {other:?}"),
        }
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let mut m = DMatrix::identity(3, 3) * 0.1;
        m[(0, 2)] = 1.0 / 3.0;
        m[(2, 0)] = 1.0 / 3.0;
        let r = CurvatureOperator::new(3, m).unwrap();
        let text = serde_json::to_string(&OperatorDocument::from(&r)).unwrap();
        let back = parse_operator(&text).unwrap();
        assert_eq!(back.matrix(), r.matrix());
    }

    #[test]
    fn pointers() {
        let good = r#"{"n":2,"basis":"lex-pairs","matrix":[[1]],"convention":"sec(X∧Y)=R(X∧Y,X∧Y)"}"#;
        assert!(parse_operator(good).is_ok());
        assert_eq!(pointer_of(&good.replace("\"n\":2", "\"n\":3")), "/matrix");
        assert_eq!(pointer_of(&good.replace("lex-pairs", "colex")), "/basis");
        assert_eq!(pointer_of(&good.replace("[[1]]", "[[\"x\"]]")), "/matrix/0/0");
        assert_eq!(pointer_of(&good.replace("\"n\":2", "\"n\":-1")), "/n");
        assert_eq!(pointer_of(&good.replace("sec(X∧Y)", "K")), "/convention");
        assert_eq!(pointer_of("[1]"), "");
    }

    #[test]
    fn warns_on_asymmetry() {
        let text =
            r#"{"n":3,"basis":"lex-pairs","matrix":[[1,0.1,0],[0,1,0],[0,0,1]],"convention":"sec(X∧Y)=R(X∧Y,X∧Y)"}"#;
        let r = parse_operator(text).unwrap();
        assert!(asymmetry_warning(&r).is_some());
    }
}
