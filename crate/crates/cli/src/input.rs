//! JSON input files: `{"n": 3, "entries": [[...], ...]}`.

use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use qcurv_core::curvature::Connection;
use qcurv_core::propagator::NumericQMatrix;
use qcurv_core::symmetrize::QMatrix;
use qcurv_core::{FormExpr, MatrixForm};
use serde::Deserialize;
use serde_json::Value;

use crate::parser::{parse_expr, parse_scalar};
use crate::CliError;

#[derive(Debug, Deserialize)]
struct MatrixFile {
    n: usize,
    entries: Vec<Vec<Value>>,
}

fn read_matrix(path: &Path) -> Result<MatrixFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_matrix(&text).map_err(|e| match e {
        CliError::Input(msg) => CliError::Input(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn parse_matrix(text: &str) -> Result<MatrixFile, CliError> {
    let m: MatrixFile = serde_json::from_str(text).map_err(|e| CliError::Input(e.to_string()))?;
    if m.entries.len() != m.n || m.entries.iter().any(|r| r.len() != m.n) {
        return Err(CliError::Input(format!("entries must form a {0}x{0} array", m.n)));
    }
    Ok(m)
}

fn entry_text(v: &Value) -> Result<String, CliError> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(CliError::Input(format!("unsupported entry {other}"))),
    }
}

fn symbolic_from(m: MatrixFile) -> Result<QMatrix, CliError> {
    let rows = m
        .entries
        .iter()
        .map(|r| r.iter().map(|v| Ok(parse_scalar(&entry_text(v)?)?)).collect::<Result<Vec<_>, CliError>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(QMatrix::new(rows)?)
}

pub fn symbolic_qmatrix(path: &Path) -> Result<QMatrix, CliError> {
    symbolic_from(read_matrix(path)?)
}

pub fn symbolic_qmatrix_str(text: &str) -> Result<QMatrix, CliError> {
    symbolic_from(parse_matrix(text)?)
}

/// Accepts `-1`, `0.5`, `1/3`, `2e-3`, `i`, `-2.5i`, `1+2i`, `0.5-1/2i`.
pub fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || CliError::Input(format!("cannot read '{s}' as a complex number"));
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return real(&t).map(|re| Complex64::new(re, 0.0)).ok_or_else(bad);
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (real(&body[..k]).ok_or_else(bad)?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => real(x).ok_or_else(bad)?,
    };
    Ok(Complex64::new(re, im))
}

fn real(s: &str) -> Option<f64> {
    if let Some((a, b)) = s.split_once('/') {
        let r = num_rational::BigRational::new(a.parse().ok()?, b.parse().ok()?);
        return r.to_f64();
    }
    s.parse::<f64>().ok().filter(|x| x.is_finite())
}

fn numeric_from(m: MatrixFile) -> Result<NumericQMatrix, CliError> {
    let mut values = DMatrix::from_element(m.n, m.n, Complex64::new(0.0, 0.0));
    for (i, row) in m.entries.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            values[(i, j)] = parse_complex(&entry_text(v)?)?;
        }
    }
    Ok(NumericQMatrix::new(values)?)
}

pub fn numeric_qmatrix(path: &Path) -> Result<NumericQMatrix, CliError> {
    numeric_from(read_matrix(path)?)
}

pub fn numeric_qmatrix_str(text: &str) -> Result<NumericQMatrix, CliError> {
    numeric_from(parse_matrix(text)?)
}

fn connection_from(m: MatrixFile) -> Result<Connection, CliError> {
    let entries = m
        .entries
        .iter()
        .flatten()
        .map(|v| Ok(parse_expr(&entry_text(v)?)?))
        .collect::<Result<Vec<FormExpr>, CliError>>()?;
    Ok(Connection::new(MatrixForm::new(m.n, entries)?)?)
}

/// A connection whose entries are grade-1 expressions.
pub fn connection(path: &Path) -> Result<Connection, CliError> {
    connection_from(read_matrix(path)?)
}

pub fn connection_str(text: &str) -> Result<Connection, CliError> {
    connection_from(parse_matrix(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use qcurv_core::Coefficient;

    #[test]
    fn complex_literals() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(parse_complex("-1").unwrap(), c(-1.0, 0.0));
        assert_eq!(parse_complex("1/4").unwrap(), c(0.25, 0.0));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("1+2i").unwrap(), c(1.0, 2.0));
        assert_eq!(parse_complex("0.5 - 1/2i").unwrap(), c(0.5, -0.5));
        assert_eq!(parse_complex("1e-3+1e+2i").unwrap(), c(1e-3, 100.0));
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn symbolic_matrix_file() {
        let q = symbolic_qmatrix_str(r#"{"n": 2, "entries": [["-1", "q[1,2]"], ["q[2,1]", -1]]}"#).unwrap();
        assert_eq!(q.get(1, 2), &Coefficient::pair(1, 2).unwrap());
        assert!(symbolic_qmatrix_str(r#"{"n": 2, "entries": [["-1", "q"], ["q", "-1"]]}"#).is_err());
        assert!(symbolic_qmatrix_str(r#"{"n": 3, "entries": [["-1"]]}"#).is_err());
    }

    #[test]
    fn numeric_matrix_file() {
        let q = numeric_qmatrix_str(r#"{"n": 3, "entries": [[-1, "2", "i"], ["0.5", -1, 1], ["-i", 1, -1]]}"#).unwrap();
        assert_eq!(q.get(0, 2), Complex64::new(0.0, 1.0));
        assert!(numeric_qmatrix_str(r#"{"n": 1, "entries": [["0"]]}"#).is_err());
    }

    #[test]
    fn connection_file() {
        let c = connection_str(r#"{"n": 2, "entries": [["w[1,1]", "q*w[1,2]"], ["0", "w[2,2] + dx[1]"]]}"#).unwrap();
        assert_eq!(c.dim(), 2);
        assert!(connection_str(r#"{"n": 1, "entries": [["d(w[1,1])"]]}"#).is_err());
    }
}
