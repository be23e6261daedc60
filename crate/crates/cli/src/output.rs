use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, Write};
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::args::Format;
use crate::error::{CliError, ErrorRecord, Result};

pub const SCHEMA_VERSION: &str = "1";

/// Flat rows for CSV output.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header)?;
        for row in &self.rows {
            out.write_record(row)?;
        }
        out.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

/// A value that can fill a CSV cell. Floats use the shortest round-trip
/// form, switching to exponent notation for very small or large values.
pub trait CellValue {
    fn to_cell(&self) -> String;
}

macro_rules! display_cells {
    ($($t:ty),*) => {$(
        impl CellValue for $t {
            fn to_cell(&self) -> String {
                self.to_string()
            }
        }
    )*};
}

display_cells!(u32, u64, u128, usize, i64, bool, String, &str);

impl CellValue for f64 {
    fn to_cell(&self) -> String {
        format!("{self:?}")
    }
}

pub fn cell<T: CellValue>(v: T) -> String {
    v.to_cell()
}

/// `None` becomes an empty cell.
pub fn opt<T: CellValue>(v: Option<T>) -> String {
    v.map_or_else(String::new, |v| v.to_cell())
}

#[derive(Debug, Default, Serialize)]
pub struct Timings {
    pub total_seconds: f64,
    pub stages: BTreeMap<String, f64>,
}

/// Records wall-clock time per named stage.
#[derive(Debug)]
pub struct Stopwatch {
    start: Instant,
    last: Instant,
    stages: BTreeMap<String, f64>,
}

impl Default for Stopwatch {
    fn default() -> Self {
        let now = Instant::now();
        Self {
            start: now,
            last: now,
            stages: BTreeMap::new(),
        }
    }
}

impl Stopwatch {
    pub fn lap(&mut self, name: &str) {
        let now = Instant::now();
        *self.stages.entry(name.to_string()).or_default() +=
            now.duration_since(self.last).as_secs_f64();
        self.last = now;
    }

    pub fn finish(self) -> Timings {
        Timings {
            total_seconds: self.start.elapsed().as_secs_f64(),
            stages: self.stages,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub config: Value,
    pub results: Value,
    pub derived_bounds: Value,
    pub timings: Timings,
    #[serde(skip)]
    pub table: Table,
}

impl Report {
    pub fn write(&self, format: Format, out: Option<&Path>) -> Result<()> {
        match out {
            Some(path) => {
                let file = File::create(path).map_err(|source| CliError::Io {
                    path: path.to_path_buf(),
                    source,
                })?;
                self.write_to(format, io::BufWriter::new(file))
            }
            None => self.write_to(format, io::stdout().lock()),
        }
    }

    pub fn write_to<W: Write>(&self, format: Format, mut w: W) -> Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut w, self)?;
                writeln!(w).map_err(|source| CliError::Io {
                    path: "<output>".into(),
                    source,
                })?;
                w.flush().map_err(|source| CliError::Io {
                    path: "<output>".into(),
                    source,
                })
            }
            Format::Csv => self.table.write(w),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ErrorEnvelope<'a> {
    pub schema_version: &'static str,
    pub command: Option<&'a str>,
    pub error: ErrorRecord,
}
