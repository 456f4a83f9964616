//! CSV ingestion of numeric matrices and report output.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::rand_est::EstimateReport;

pub const REPORT_HEADER: &str = "draw,estimate,support_size,support";

/// Numeric matrix from CSV text. A first row that does not parse as numbers is
/// treated as a header.
pub fn parse_matrix_csv(text: &str, origin: &str) -> Result<DMatrix<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(row) => rows.push(row),
            Err(_) if i == 0 => continue,
            Err(_) => {
                return Err(Error::Parse {
                    path: origin.to_string(),
                    message: format!("row {} is not numeric", i + 1),
                })
            }
        }
    }
    let n = rows.len();
    let p = rows.first().map_or(0, Vec::len);
    if n == 0 || p == 0 {
        return Err(Error::Parse {
            path: origin.to_string(),
            message: "no numeric rows".into(),
        });
    }
    if let Some(i) = rows.iter().position(|r| r.len() != p) {
        return Err(Error::Parse {
            path: origin.to_string(),
            message: format!("row {} has {} columns, expected {p}", i + 1, rows[i].len()),
        });
    }
    Ok(DMatrix::from_fn(n, p, |i, j| rows[i][j]))
}

pub fn read_matrix_csv(path: &Path) -> Result<DMatrix<f64>> {
    let text = std::fs::read_to_string(path)?;
    parse_matrix_csv(&text, &path.display().to_string())
}

/// Single-column CSV as a vector.
pub fn read_vector_csv(path: &Path) -> Result<DVector<f64>> {
    let m = read_matrix_csv(path)?;
    if m.ncols() != 1 {
        return Err(Error::Parse {
            path: path.display().to_string(),
            message: format!("expected a single column, found {}", m.ncols()),
        });
    }
    Ok(m.column(0).into_owned())
}

/// Headerless CSV with shortest round-trip float formatting.
pub fn matrix_to_csv(m: &DMatrix<f64>) -> String {
    let mut out = String::new();
    for row in m.row_iter() {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn write_matrix_csv(path: &Path, m: &DMatrix<f64>) -> Result<()> {
    std::fs::write(path, matrix_to_csv(m))?;
    Ok(())
}

/// One row per draw; draws are 1-based, support indices 0-based and `;`-joined.
pub fn report_to_csv(report: &EstimateReport) -> String {
    let mut out = String::from(REPORT_HEADER);
    out.push('\n');
    for (i, (v, m)) in report.per_draw.iter().zip(&report.supports).enumerate() {
        let _ = writeln!(out, "{},{},{},{}", i + 1, v, m.len(), m);
    }
    out
}
