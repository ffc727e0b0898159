//! Sweep results and their CSV/JSON serialization.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::provenance::Parameters;

pub const CSV_HEADER: [&str; 10] = [
    "scenario",
    "L",
    "L_A",
    "x",
    "t_or_window",
    "metric",
    "value",
    "value_normalized",
    "stderr",
    "seed",
];

/// One output line. `metric` reads `quantity/distance`, e.g. `speed/trace_distance`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub scenario: String,
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "L_A")]
    pub l_a: usize,
    pub x: f64,
    pub t_or_window: String,
    pub metric: String,
    pub value: f64,
    pub value_normalized: Option<f64>,
    pub stderr: Option<f64>,
    pub seed: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    /// Configuration with all defaults filled in.
    pub config: ExperimentConfig,
    pub parameters: Parameters,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    pub rows: Vec<Row>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

pub fn write_csv<W: Write>(rows: &[Row], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub fn csv_string(rows: &[Row]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("CSV output is UTF-8"))
}

/// Parses CSV produced by [`write_csv`], rejecting any other header.
pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<Row>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header != CSV_HEADER {
        return Err(Error::Validation(format!("unexpected CSV header {header:?}")));
    }
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

pub fn json_string(result: &SweepResult) -> Result<String> {
    Ok(serde_json::to_string_pretty(result)? + "\n")
}

/// Writes `<dir>/<scenario kind>.<ext>` and returns its path.
pub fn emit(result: &SweepResult, format: Format, dir: &Path) -> Result<PathBuf> {
    if result.rows.is_empty() {
        return Err(Error::Validation("refusing to write an empty result".into()));
    }
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| Error::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    let path = dir.join(format!("{}.{}", result.config.scenario.kind(), format.extension()));
    let text = match format {
        Format::Csv => csv_string(&result.rows)?,
        Format::Json => json_string(result)?,
    };
    fs::write(&path, text).map_err(io(&path))?;
    Ok(path)
}
