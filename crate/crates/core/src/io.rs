//! CSV tables and atomic file output.
//!
//! Function tables have a `q` column followed by either `re,im` (complex
//! samples) or a single named real column. Numbers are written with 17
//! significant digits so that reading them back is bit-exact.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::forward::ForwardData;
use crate::grid::{extend_hermitian, SampledFunction, UniformGrid};

/// Decimal representation with 17 significant digits.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn render(header: &[&str], rows: impl Iterator<Item = Vec<f64>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|v| format_f64(*v)))?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

/// `q,re,im` table.
pub fn complex_table(q: &[f64], values: &[Complex64]) -> Result<Vec<u8>> {
    render(
        &["q", "re", "im"],
        q.iter().zip(values).map(|(q, v)| vec![*q, v.re, v.im]),
    )
}

/// `q,<name>` table.
pub fn real_table(name: &str, q: &[f64], values: &[f64]) -> Result<Vec<u8>> {
    render(
        &["q", name],
        q.iter().zip(values).map(|(q, v)| vec![*q, *v]),
    )
}

/// Table with arbitrary real columns.
pub fn columns_table(header: &[&str], rows: &[Vec<f64>]) -> Result<Vec<u8>> {
    render(header, rows.iter().cloned())
}

/// A parsed function table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub q: Vec<f64>,
    /// Complex samples; imaginary parts are zero for real tables.
    pub values: Vec<Complex64>,
}

impl Table {
    pub fn is_complex(&self) -> bool {
        self.header.len() == 3
    }
}

fn parse_number(s: &str, line: usize) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("line {line}: cannot parse {s:?} as a number")))?;
    if !v.is_finite() {
        return Err(Error::InvalidInput(format!(
            "line {line}: non-finite value"
        )));
    }
    Ok(v)
}

/// Parse a `q,re,im` or `q,<name>` table with strictly ascending `q`.
pub fn parse_table(text: &str) -> Result<Table> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    if header.iter().all(|h| h.is_empty()) {
        return Err(Error::InvalidInput("table is empty".into()));
    }
    let ok_header = match header.as_slice() {
        [q, re, im] => q == "q" && re == "re" && im == "im",
        [q, name] => q == "q" && !name.is_empty(),
        _ => false,
    };
    if !ok_header {
        return Err(Error::InvalidInput(format!(
            "expected header q,re,im or q,<name>, got {}",
            header.join(",")
        )));
    }
    let mut q = Vec::new();
    let mut values = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        if rec.len() != header.len() {
            return Err(Error::InvalidInput(format!(
                "line {line}: wrong number of fields"
            )));
        }
        let x = parse_number(&rec[0], line)?;
        if let Some(&last) = q.last() {
            if x <= last {
                return Err(Error::InvalidInput(format!(
                    "line {line}: q must be strictly ascending"
                )));
            }
        }
        let re = parse_number(&rec[1], line)?;
        let im = if header.len() == 3 {
            parse_number(&rec[2], line)?
        } else {
            0.0
        };
        q.push(x);
        values.push(Complex64::new(re, im));
    }
    if q.is_empty() {
        return Err(Error::InvalidInput("table has no rows".into()));
    }
    Ok(Table { header, q, values })
}

pub fn read_table(path: &Path) -> Result<Table> {
    let text = std::fs::read_to_string(path)?;
    parse_table(&text)
}

fn check_uniform(q: &[f64], step: f64) -> Result<()> {
    for (i, w) in q.windows(2).enumerate() {
        if ((w[1] - w[0]) - step).abs() > 1e-9 * step.max(1.0) {
            return Err(Error::InvalidInput(format!(
                "q is not uniformly spaced near row {}",
                i + 2
            )));
        }
    }
    Ok(())
}

/// Recover the grid of a table and return full-grid samples.
///
/// A table that contains negative `q` must cover the whole grid
/// `−L, ..., L − Δ`. Otherwise it holds half-line data starting at `q = 0`,
/// with an even row count for `0, ..., L − Δ` and an odd one when the `+L`
/// sample is included; the negative axis is filled by `v(−q) = conj v(q)`.
pub fn table_to_hermitian(table: &Table) -> Result<SampledFunction> {
    let q = &table.q;
    if q.len() < 2 {
        return Err(Error::InvalidInput("need at least two rows".into()));
    }
    let step = q[1] - q[0];
    check_uniform(q, step)?;
    if q[0] < 0.0 {
        let n = q.len();
        if !n.is_multiple_of(2) {
            return Err(Error::InvalidInput(
                "full-grid table needs an even row count".into(),
            ));
        }
        let l = -q[0];
        let grid = UniformGrid::new(l, n)?;
        if (q[n / 2]).abs() > 1e-9 * step || ((l - (n / 2) as f64 * step) / l).abs() > 1e-9 {
            return Err(Error::InvalidInput(
                "full-grid table is not symmetric about q = 0".into(),
            ));
        }
        let f = SampledFunction::new(grid, table.values.clone())?;
        return f.with_symmetry(crate::grid::Symmetry::Hermitian);
    }
    if q[0] != 0.0 {
        return Err(Error::InvalidInput(
            "half-line table must start at q = 0".into(),
        ));
    }
    let rows = q.len();
    let (n, l) = if rows.is_multiple_of(2) {
        (2 * rows, rows as f64 * step)
    } else {
        (2 * (rows - 1), q[rows - 1])
    };
    let grid = UniformGrid::new(l, n)?;
    extend_hermitian(&table.values, &grid)
}

pub fn read_forward_data(path: &Path) -> Result<ForwardData> {
    let table = read_table(path)?;
    if !table.is_complex() {
        return Err(Error::InvalidInput(
            "forward data needs columns q,re,im".into(),
        ));
    }
    ForwardData::from_samples(table_to_hermitian(&table)?)
}

/// Radial profile table with header `r,psi`, strictly ascending `r > 0`.
pub fn read_profile_table(path: &Path) -> Result<crate::profile::Profile> {
    let text = std::fs::read_to_string(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    if header != ["r", "psi"] {
        return Err(Error::InvalidInput(format!(
            "profile table needs header r,psi, got {}",
            header.join(",")
        )));
    }
    let mut r = Vec::new();
    let mut v = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        if rec.len() != 2 {
            return Err(Error::InvalidInput(format!(
                "line {}: wrong number of fields",
                i + 2
            )));
        }
        r.push(parse_number(&rec[0], i + 2)?);
        v.push(parse_number(&rec[1], i + 2)?);
    }
    crate::profile::Profile::tabulated(r, v)
}
