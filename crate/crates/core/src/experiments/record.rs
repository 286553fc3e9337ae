use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Everything measured in one trial. Fields a study does not measure are
/// `None` (an empty CSV cell).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub study: String,
    pub n: usize,
    pub m: Option<usize>,
    pub p: Option<f64>,
    pub trial: usize,
    pub seed: u64,
    pub tau_1: Option<usize>,
    pub tau_conn: Option<usize>,
    pub tau_k: Option<usize>,
    pub tau_k_conn: Option<usize>,
    pub giant_size: Option<usize>,
    pub kcore_size: Option<usize>,
    pub kcore_k_connected: Option<bool>,
    /// `α*` or its upper bound, `"p/q"`.
    pub alpha_star: Option<String>,
    /// `exact` or `local-search-upper-bound`.
    pub alpha_method: Option<String>,
    pub cherry: Option<bool>,
    pub greedy_satisfied: Option<bool>,
    pub attack_found: Option<bool>,
    pub tiny_ball_holds: Option<bool>,
    pub atyp_neighbours_holds: Option<bool>,
    pub tiny_triangle_holds: Option<bool>,
    pub atyp_size_holds: Option<bool>,
    pub edge_density_holds: Option<bool>,
    pub max_tiny_ball: Option<usize>,
    pub max_atyp_neighbours: Option<usize>,
    pub max_density_dev: Option<f64>,
    pub max_d_neighbours: Option<usize>,
}

/// Leading comment line of every records CSV.
pub const CSV_SCHEMA_LINE: &str = "# resilience trial records, schema 1. One row per trial; \
empty cells are quantities the study does not measure. alpha_star is an exact fraction p/q.";

pub fn write_records_csv<W: Write>(mut out: W, records: &[TrialRecord]) -> Result<()> {
    writeln!(out, "{CSV_SCHEMA_LINE}")?;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    // serde only emits headers alongside the first row, so write them by hand
    w.write_record(record_columns())?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records_csv<R: Read>(input: R) -> Result<Vec<TrialRecord>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    let mut out = Vec::new();
    for row in rdr.deserialize() {
        out.push(row?);
    }
    Ok(out)
}

pub fn record_columns() -> Vec<&'static str> {
    vec![
        "study",
        "n",
        "m",
        "p",
        "trial",
        "seed",
        "tau_1",
        "tau_conn",
        "tau_k",
        "tau_k_conn",
        "giant_size",
        "kcore_size",
        "kcore_k_connected",
        "alpha_star",
        "alpha_method",
        "cherry",
        "greedy_satisfied",
        "attack_found",
        "tiny_ball_holds",
        "atyp_neighbours_holds",
        "tiny_triangle_holds",
        "atyp_size_holds",
        "edge_density_holds",
        "max_tiny_ball",
        "max_atyp_neighbours",
        "max_density_dev",
        "max_d_neighbours",
    ]
}
