//! File formats: curve JSON, plain-text complex matrices, and ingestion of the
//! period JSON written by the command-line tool.
//!
//! Numbers are written in the shortest form that parses back to the same
//! double, so emit-then-ingest is lossless.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Deserialize;

use crate::distribution::DistributionError;
use crate::periods::riemann_residuals;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveFile {
    pub branch_points: Vec<[f64; 2]>,
}

impl CurveFile {
    pub fn points(&self) -> Vec<Complex64> {
        self.branch_points.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
    }
}

pub fn parse_curve_json(text: &str) -> Result<CurveFile, DistributionError> {
    serde_json::from_str(text).map_err(|e| DistributionError::ParseError {
        line: e.line(),
        message: e.to_string(),
    })
}

/// Parsed square matrix with its Riemann diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct IngestedMatrix {
    pub matrix: Vec<Vec<Complex64>>,
    pub symmetry_residual: f64,
    pub min_imag_eigenvalue: f64,
}

/// Accepts either the text format (one row per line, `re im` pairs, `#`
/// comments) or a JSON object with an `omega` field.
pub fn ingest_matrix(text: &str) -> Result<IngestedMatrix, DistributionError> {
    let trimmed = text.trim_start();
    let matrix = if trimmed.starts_with('{') {
        parse_omega_json(text)?
    } else {
        parse_matrix_text(text)?
    };
    let rows = matrix.len();
    if rows == 0 {
        return Err(DistributionError::Empty);
    }
    if let Some(r) = matrix.iter().find(|r| r.len() != rows) {
        return Err(DistributionError::NonSquare { rows, cols: r.len() });
    }
    let (symmetry_residual, min_imag_eigenvalue) = riemann_residuals(&matrix);
    Ok(IngestedMatrix {
        matrix,
        symmetry_residual,
        min_imag_eigenvalue,
    })
}

fn parse_omega_json(text: &str) -> Result<Vec<Vec<Complex64>>, DistributionError> {
    #[derive(Deserialize)]
    struct WithOmega {
        omega: Vec<Vec<[f64; 2]>>,
    }
    let parsed: WithOmega = serde_json::from_str(text).map_err(|e| DistributionError::ParseError {
        line: e.line(),
        message: e.to_string(),
    })?;
    let cols = parsed.omega.first().map_or(0, Vec::len);
    if parsed.omega.iter().any(|r| r.len() != cols) {
        return Err(DistributionError::ParseError {
            line: 1,
            message: "ragged omega rows".into(),
        });
    }
    Ok(parsed
        .omega
        .into_iter()
        .map(|r| r.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
        .collect())
}

/// Rows must all have the same number of entries.
pub fn parse_matrix_text(text: &str) -> Result<Vec<Vec<Complex64>>, DistributionError> {
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let nums: Vec<f64> = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>().map_err(|_| DistributionError::ParseError {
                    line: line_no,
                    message: format!("not a number: {tok:?}"),
                })
            })
            .collect::<Result<_, _>>()?;
        if nums.len() % 2 != 0 {
            return Err(DistributionError::ParseError {
                line: line_no,
                message: format!("odd number of reals ({}) in a row of re im pairs", nums.len()),
            });
        }
        let row: Vec<Complex64> = nums.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect();
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(DistributionError::ParseError {
                    line: line_no,
                    message: format!("row has {} entries, expected {}", row.len(), first.len()),
                });
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Shortest round-trip decimal for a double, always with a decimal point or
/// exponent.
pub fn format_real(x: f64) -> String {
    format!("{x:?}")
}

/// One row per line, entries as `re im` separated by two spaces; optional
/// leading comment lines.
pub fn format_matrix_text(matrix: &[Vec<Complex64>], comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    for row in matrix {
        let entries: Vec<String> = row
            .iter()
            .map(|z| format!("{} {}", format_real(z.re), format_real(z.im)))
            .collect();
        let _ = writeln!(out, "{}", entries.join("  "));
    }
    out
}

/// `rank,value` rows with ranks starting at 1.
pub fn format_distribution_csv(values: &[f64]) -> String {
    let mut out = String::from("rank,value\n");
    for (n, v) in values.iter().enumerate() {
        let _ = writeln!(out, "{},{}", n + 1, format_real(*v));
    }
    out
}
