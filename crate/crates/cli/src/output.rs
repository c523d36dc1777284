//! CSV and JSON writers with locale-free number formatting.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use cesaro_core::C64;
use serde::Serialize;

use crate::CliError;

pub fn sink(out: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| io_err(p, e))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn io_err(p: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Compute(format!("{}: {e}", p.display()))
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Compute(e.to_string())
}

/// Writes `header` then one row per record.
pub fn write_csv<W: Write>(w: W, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<(), CliError> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(header).map_err(csv_err)?;
    for row in rows {
        wtr.write_record(row.iter().map(|x| x.to_string())).map_err(csv_err)?;
    }
    wtr.flush().map_err(|e| CliError::Compute(e.to_string()))
}

/// Rows n, re, im.
pub fn indexed_rows(values: &[C64]) -> impl Iterator<Item = Vec<f64>> + '_ {
    values.iter().enumerate().map(|(n, z)| vec![n as f64, z.re, z.im])
}

pub fn write_json<W: Write, T: Serialize>(mut w: W, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::Compute(e.to_string()))?;
    writeln!(w).map_err(|e| CliError::Compute(e.to_string()))?;
    w.flush().map_err(|e| CliError::Compute(e.to_string()))
}

pub fn write_json_line<W: Write, T: Serialize>(w: &mut W, value: &T) -> Result<(), CliError> {
    serde_json::to_writer(&mut *w, value).map_err(|e| CliError::Compute(e.to_string()))?;
    writeln!(w).map_err(|e| CliError::Compute(e.to_string()))
}
