use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::record::{write_records_csv, TrialRecord};
use super::studies::StudyOutput;
use super::summary::SummaryTable;
use crate::error::{invalid, Result};

pub const SCHEMA_VERSION: u32 = 1;
pub const CODE_VERSION: &str = concat!("resilience-core ", env!("CARGO_PKG_VERSION"));

/// JSON Schema (draft 2020-12) describing [`StudyDocument`].
pub const JSON_SCHEMA: &str = include_str!("study.schema.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(invalid(format!("unknown format {s:?}, expected csv or json"))),
        }
    }
}

/// The JSON form of a study run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StudyDocument {
    pub schema_version: u32,
    pub code_version: String,
    pub config: ExperimentConfig,
    pub records: Vec<TrialRecord>,
    pub summary: SummaryTable,
    /// Seconds since the Unix epoch; left out unless asked for, and ignored
    /// by [`StudyDocument::canonical_json`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<u64>,
}

impl StudyDocument {
    pub fn new(output: &StudyOutput, timestamp: bool) -> Self {
        let generated_at = timestamp.then(|| {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map_or(0, |d| d.as_secs())
        });
        Self {
            schema_version: SCHEMA_VERSION,
            code_version: CODE_VERSION.to_string(),
            config: output.config.clone(),
            records: output.records.clone(),
            summary: output.summary.clone(),
            generated_at,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }

    /// The document without its timestamp, for byte comparisons.
    pub fn canonical_json(&self) -> Result<String> {
        Self {
            generated_at: None,
            ..self.clone()
        }
        .to_json()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Writes a study to `path`: records as CSV, or the full document as JSON.
pub fn emit(output: &StudyOutput, format: Format, path: &Path, timestamp: bool) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    match format {
        Format::Csv => write_records_csv(&mut out, &output.records)?,
        Format::Json => out.write_all(StudyDocument::new(output, timestamp).to_json()?.as_bytes())?,
    }
    out.flush()?;
    Ok(())
}

/// Writes bare records (no study context) as CSV or as a JSON array.
pub fn emit_records(records: &[TrialRecord], format: Format, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    match format {
        Format::Csv => write_records_csv(&mut out, records)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, records)?;
            out.write_all(b"\n")?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Writes a summary table as CSV or JSON.
pub fn emit_summary(table: &SummaryTable, format: Format, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    match format {
        Format::Csv => table.write_csv(&mut out)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, table)?;
            out.write_all(b"\n")?;
        }
    }
    out.flush()?;
    Ok(())
}
