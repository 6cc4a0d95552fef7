//! CSV rows for runs and Grover calls.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use qgcl_core::hybrid::CallRecord;
use qgcl_core::{SolveResult, SolveStatus};
use serde::{Deserialize, Serialize};

pub const RUN_HEADER: &str = "instance,mode,seed,n,m,restarts,conflicts,decisions,propagations,grover_calls,grover_iters,wall_time_s,result";
pub const CALL_HEADER: &str = "call_idx,conflict_index,n_sub,m_sub,q,attempts,iterations,polarity_applied";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Cdcl,
    Qgcl,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Cdcl => "cdcl",
            Mode::Qgcl => "qgcl",
        }
    }
}

/// One solver run. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub instance: String,
    pub mode: Mode,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub restarts: u64,
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub grover_calls: u64,
    pub grover_iters: u64,
    pub wall_time_s: f64,
    pub result: String,
}

impl RunRow {
    pub fn new(instance: &str, mode: Mode, seed: u64, n: usize, m: usize, result: &SolveResult, grover_iters: u64) -> RunRow {
        let s = &result.stats;
        RunRow {
            instance: instance.to_owned(),
            mode,
            seed,
            n,
            m,
            restarts: s.restarts,
            conflicts: s.conflicts,
            decisions: s.decisions,
            propagations: s.propagations,
            grover_calls: s.grover_calls,
            grover_iters,
            wall_time_s: s.wall_time,
            result: status_label(result.status).to_owned(),
        }
    }

    /// Everything except the wall time.
    pub fn same_counters(&self, other: &RunRow) -> bool {
        RunRow {
            wall_time_s: 0.0,
            ..self.clone()
        } == RunRow {
            wall_time_s: 0.0,
            ..other.clone()
        }
    }
}

pub fn status_label(status: SolveStatus) -> &'static str {
    match status {
        SolveStatus::Sat => "SAT",
        SolveStatus::Unsat => "UNSAT",
        SolveStatus::Unknown => "UNKNOWN",
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CallRow {
    pub call_idx: usize,
    pub conflict_index: u64,
    pub n_sub: usize,
    pub m_sub: usize,
    pub q: f64,
    pub attempts: u32,
    pub iterations: u64,
    pub polarity_applied: bool,
}

impl CallRow {
    pub fn from_record(call_idx: usize, r: &CallRecord) -> CallRow {
        CallRow {
            call_idx,
            conflict_index: r.conflict_index,
            n_sub: r.n_sub,
            m_sub: r.m_sub,
            q: r.q,
            attempts: r.attempts,
            iterations: r.iterations,
            polarity_applied: r.polarity_applied,
        }
    }
}

/// Serializes `rows` with a header line.
pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Appends rows to `path`, writing the header first if the file is new or
/// empty.
pub fn append_runs(path: &Path, rows: &[RunRow]) -> Result<()> {
    let fresh = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let mut w = csv::WriterBuilder::new().has_headers(fresh).from_writer(file);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `rows` to `path`, replacing it. An empty list still gets the
/// header.
pub fn write_calls(path: &Path, rows: &[CallRow]) -> Result<()> {
    let text = if rows.is_empty() {
        format!("{CALL_HEADER}\n")
    } else {
        to_csv(rows)?
    };
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn write_runs(path: &Path, rows: &[RunRow]) -> Result<()> {
    let text = if rows.is_empty() {
        format!("{RUN_HEADER}\n")
    } else {
        to_csv(rows)?
    };
    let mut f = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    f.write_all(text.as_bytes())?;
    Ok(())
}

pub fn read_runs(path: &Path) -> Result<Vec<RunRow>> {
    let mut r = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}
