//! Reference matrix tables stored as JSON, with values kept as the printed
//! decimal strings (Fortran "D" exponents allowed).

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::moebius::MoebiusMap;
use crate::uniformize::{Convention, UniformizationResult};

/// Printed magnitudes at or below this are rounding noise for zero.
pub const PRINTED_ZERO: f64 = 1e-15;

#[derive(Debug, Error)]
pub enum GoldenError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed golden file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad number `{0}`")]
    BadNumber(String),
    #[error("matrix {label} has {got} entries, expected 4")]
    EntryCount { label: String, got: usize },
    #[error("no generator with partner {0}")]
    MissingPartner(usize),
    #[error("table is {table} but result is {result}")]
    ConventionMismatch { table: Convention, result: Convention },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenMatrix {
    pub label: String,
    pub partner: usize,
    /// Row-major [re, im] strings.
    pub entries: Vec<[String; 2]>,
}

impl GoldenMatrix {
    pub fn values(&self) -> Result<[Complex64; 4], GoldenError> {
        if self.entries.len() != 4 {
            return Err(GoldenError::EntryCount { label: self.label.clone(), got: self.entries.len() });
        }
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for (slot, [re, im]) in out.iter_mut().zip(&self.entries) {
            *slot = Complex64::new(parse_printed(re)?, parse_printed(im)?);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenTable {
    pub degree: u32,
    pub convention: Convention,
    pub base: usize,
    pub matrices: Vec<GoldenMatrix>,
}

/// Parses "1.110D-16" style numbers; tiny magnitudes become exactly 0.
pub fn parse_printed(s: &str) -> Result<f64, GoldenError> {
    let v: f64 = s.trim().replace(['D', 'd'], "E").parse().map_err(|_| GoldenError::BadNumber(s.to_string()))?;
    Ok(if v.abs() <= PRINTED_ZERO { 0.0 } else { v })
}

pub fn load_table(path: impl AsRef<Path>) -> Result<GoldenTable, GoldenError> {
    let path = path.as_ref();
    let text =
        fs::read_to_string(path).map_err(|source| GoldenError::Io { path: path.display().to_string(), source })?;
    Ok(serde_json::from_str(&text)?)
}

/// Largest per-component deviation of one matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixDeviation {
    pub label: String,
    pub max_abs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub matrices: Vec<MatrixDeviation>,
}

impl Comparison {
    pub fn max_abs(&self) -> f64 {
        self.matrices.iter().map(|m| m.max_abs).fold(0.0, f64::max)
    }

    pub fn within(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }
}

/// Component-wise (re and im separately) deviation of `m` from the table entry.
pub fn matrix_deviation(m: &MoebiusMap, g: &GoldenMatrix) -> Result<f64, GoldenError> {
    let want = g.values()?;
    Ok(m.entries().iter().zip(want).map(|(x, y)| (x.re - y.re).abs().max((x.im - y.im).abs())).fold(0.0, f64::max))
}

pub fn compare(table: &GoldenTable, result: &UniformizationResult) -> Result<Comparison, GoldenError> {
    let mut matrices = Vec::with_capacity(table.matrices.len());
    for g in &table.matrices {
        let gen =
            result.generators.iter().find(|x| x.partner == g.partner).ok_or(GoldenError::MissingPartner(g.partner))?;
        let m = match table.convention {
            Convention::Raw => gen.raw,
            Convention::Normalized => gen.normalized,
        };
        matrices.push(MatrixDeviation { label: g.label.clone(), max_abs: matrix_deviation(&m, g)? });
    }
    Ok(Comparison { matrices })
}
