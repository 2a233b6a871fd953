//! CSV output of fields and time series.
//!
//! Numbers are written with 17 significant digits, which round-trips every
//! `f64` exactly. Field rows follow storage order: `x1` varies fastest.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::diagnostics::{velocity_divergence, ApObservables};
use crate::error::{Result, SolverError};
use crate::model::{velocity, ConservedField};

pub const FIELDS_HEADER: &str = "x1,x2,rho,u1,u2,div";

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| SolverError::io(parent, e))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| SolverError::io(path, e))
}

fn write_row<W: Write>(out: &mut W, values: &[f64]) -> std::io::Result<()> {
    for (k, v) in values.iter().enumerate() {
        if k > 0 {
            out.write_all(b",")?;
        }
        write!(out, "{v:.16e}")?;
    }
    out.write_all(b"\n")
}

pub fn write_fields_to<W: Write>(state: &ConservedField, out: &mut W) -> Result<()> {
    let g = *state.grid();
    let u = velocity(state)?;
    let div = velocity_divergence(state)?;
    let io = |e| SolverError::io("<fields>", e);
    writeln!(out, "{FIELDS_HEADER}").map_err(io)?;
    for (i, j) in g.cells() {
        let (x1, x2) = g.center(i, j);
        write_row(
            out,
            &[x1, x2, state.rho[(i, j)], u.c1[(i, j)], u.c2[(i, j)], div[(i, j)]],
        )
        .map_err(io)?;
    }
    Ok(())
}

pub fn write_fields(state: &ConservedField, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    write_fields_to(state, &mut w).map_err(|e| match e {
        SolverError::Io { source, .. } => SolverError::io(path, source),
        other => other,
    })?;
    w.flush().map_err(|e| SolverError::io(path, e))
}

pub fn write_timeseries(series: &[ApObservables], path: &Path) -> Result<()> {
    let mut w = create(path)?;
    let io = |e| SolverError::io(path, e);
    writeln!(w, "{}", ApObservables::CSV_HEADER).map_err(io)?;
    for o in series {
        write_row(&mut w, &[o.t, o.mass, o.rho_dev_inf, o.div_inf, o.div_l2, o.umax]).map_err(io)?;
    }
    w.flush().map_err(io)
}

/// Columns of a CSV file, in header order.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.header
            .iter()
            .position(|h| h == name)
            .map(|k| self.columns[k].as_slice())
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }
}

/// Reads a numeric CSV file with one header line.
pub fn read_csv(path: &Path) -> Result<CsvTable> {
    let file = File::open(path).map_err(|e| SolverError::io(path, e))?;
    let mut lines = BufReader::new(file).lines();
    let parse_err = |line: usize, reason: String| SolverError::Parse {
        path: path.to_path_buf(),
        line,
        reason,
    };
    let header: Vec<String> = match lines.next() {
        Some(l) => l
            .map_err(|e| SolverError::io(path, e))?
            .split(',')
            .map(str::to_string)
            .collect(),
        None => return Err(parse_err(1, "empty file".into())),
    };
    let mut columns = vec![Vec::new(); header.len()];
    for (n, line) in lines.enumerate() {
        let line = line.map_err(|e| SolverError::io(path, e))?;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != header.len() {
            return Err(parse_err(
                n + 2,
                format!("expected {} columns, found {}", header.len(), fields.len()),
            ));
        }
        for (col, f) in columns.iter_mut().zip(fields) {
            col.push(
                f.parse()
                    .map_err(|e| parse_err(n + 2, format!("bad number `{f}`: {e}")))?,
            );
        }
    }
    Ok(CsvTable { header, columns })
}
