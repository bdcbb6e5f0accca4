//! Writers for CSV and JSON results. Every file starts with, or contains,
//! the run configuration that produced it.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::args::RunConfig;
use crate::error::CliError;

/// Prefix of the configuration line heading every CSV file.
pub const CSV_CONFIG_PREFIX: &str = "# pibi-config ";

fn open(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

/// Shortest round-trip form; non-finite values become empty fields.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x}")
    } else {
        String::new()
    }
}

pub fn write_csv(
    path: Option<&Path>,
    config: &RunConfig,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<(), CliError> {
    let mut w = open(path)?;
    writeln!(w, "{CSV_CONFIG_PREFIX}{}", serde_json::to_string(config)?)?;
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(header)?;
    for r in rows {
        csv.write_record(r)?;
    }
    csv.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    config: &'a RunConfig<'a>,
    result: &'a T,
}

/// `{"config": …, "result": …}`, pretty-printed.
pub fn write_json<T: Serialize>(
    path: Option<&Path>,
    config: &RunConfig,
    result: &T,
) -> Result<(), CliError> {
    write_raw_json(path, &Envelope { config, result })
}

pub fn write_raw_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<(), CliError> {
    let mut w = open(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}
