//! Target matrix files.
//!
//! Two JSON layouts are accepted: the library's own
//! `{"n": 2, "entries": [[re, im], ...]}` (row-major), or an array of rows
//! whose entries are numbers or `[re, im]` pairs, e.g. `[[2, 1], [0, 1]]`.

use std::path::Path;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use posfactor::ComplexMatrix;
use serde::Deserialize;

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl From<&Entry> for Complex64 {
    fn from(e: &Entry) -> Self {
        match *e {
            Entry::Real(re) => Complex64::new(re, 0.0),
            Entry::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum TargetFile {
    Matrix(ComplexMatrix),
    Rows(Vec<Vec<Entry>>),
}

pub fn parse_target(text: &str) -> Result<ComplexMatrix> {
    let parsed: TargetFile = serde_json::from_str(text).context("target is neither a matrix object nor a list of rows")?;
    let m = match parsed {
        TargetFile::Matrix(m) => m,
        TargetFile::Rows(rows) => {
            if rows.is_empty() {
                bail!("target has no rows");
            }
            let rows: Vec<Vec<Complex64>> = rows.iter().map(|r| r.iter().map(Complex64::from).collect()).collect();
            ComplexMatrix::from_rows(&rows)?
        }
    };
    if !m.is_finite() {
        bail!("target has non-finite entries");
    }
    Ok(m)
}

pub fn read_target(path: &Path) -> Result<ComplexMatrix> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_target(&text).with_context(|| format!("parsing {}", path.display()))
}
