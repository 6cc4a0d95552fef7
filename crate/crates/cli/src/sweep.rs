//! Per-setting aggregation of run rows.

use std::fmt::Write as _;

use crate::report::{Mode, RunRow};

/// Counters summarized per setting, in column order.
pub const COUNTERS: [&str; 7] = [
    "restarts",
    "conflicts",
    "decisions",
    "propagations",
    "grover_calls",
    "grover_iters",
    "wall_time_s",
];

pub fn counter(row: &RunRow, name: &str) -> f64 {
    match name {
        "restarts" => row.restarts as f64,
        "conflicts" => row.conflicts as f64,
        "decisions" => row.decisions as f64,
        "propagations" => row.propagations as f64,
        "grover_calls" => row.grover_calls as f64,
        "grover_iters" => row.grover_iters as f64,
        "wall_time_s" => row.wall_time_s,
        _ => panic!("unknown counter {name}"),
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation; `None` below two samples.
pub fn sample_std(xs: &[f64]) -> Option<f64> {
    if xs.len() < 2 {
        return None;
    }
    let mu = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - mu) * (x - mu)).sum();
    Some((ss / (xs.len() - 1) as f64).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub param: String,
    /// Empty for baseline rows that do not depend on the swept value.
    pub value: String,
    pub mode: Mode,
    pub runs: usize,
    /// `(mean, std)` per entry of [`COUNTERS`].
    pub stats: Vec<(f64, Option<f64>)>,
}

impl SummaryRow {
    pub fn from_rows(param: &str, value: &str, mode: Mode, rows: &[RunRow]) -> SummaryRow {
        assert!(!rows.is_empty(), "summary of zero runs");
        SummaryRow {
            param: param.to_owned(),
            value: value.to_owned(),
            mode,
            runs: rows.len(),
            stats: COUNTERS
                .iter()
                .map(|c| {
                    let xs: Vec<f64> = rows.iter().map(|r| counter(r, c)).collect();
                    (mean(&xs), sample_std(&xs))
                })
                .collect(),
        }
    }

    pub fn mean_of(&self, name: &str) -> f64 {
        let i = COUNTERS.iter().position(|c| *c == name).expect("known counter");
        self.stats[i].0
    }
}

pub fn summary_header() -> String {
    let mut h = String::from("param,value,mode,runs");
    for c in COUNTERS {
        write!(h, ",{c}_mean,{c}_std").unwrap();
    }
    h
}

pub fn summary_csv(rows: &[SummaryRow]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(summary_header().split(','))?;
    for r in rows {
        let mut rec = vec![r.param.clone(), r.value.clone(), r.mode.as_str().to_owned(), r.runs.to_string()];
        for (m, s) in &r.stats {
            rec.push(m.to_string());
            rec.push(s.map(|s| s.to_string()).unwrap_or_default());
        }
        w.write_record(&rec)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Whitespace-separated data blocks, one per mode, for external plotting.
pub fn gnuplot_block(rows: &[SummaryRow]) -> String {
    let mut out = String::new();
    for mode in [Mode::Cdcl, Mode::Qgcl] {
        writeln!(out, "# mode {}", mode.as_str()).unwrap();
        writeln!(out, "# value conflicts_mean conflicts_std decisions_mean propagations_mean wall_time_s_mean").unwrap();
        for r in rows.iter().filter(|r| r.mode == mode) {
            let value = if r.value.is_empty() { "-" } else { &r.value };
            let std = r.stats[1].1.unwrap_or(0.0);
            writeln!(
                out,
                "{} {} {} {} {} {}",
                value,
                r.mean_of("conflicts"),
                std,
                r.mean_of("decisions"),
                r.mean_of("propagations"),
                r.mean_of("wall_time_s")
            )
            .unwrap();
        }
        out.push_str("\n\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn std_of_small_samples() {
        assert_eq!(sample_std(&[4.0]), None);
        assert_eq!(sample_std(&[1.0, 3.0]), Some(2f64.sqrt()));
        assert_eq!(mean(&[1.0, 2.0, 6.0]), 3.0);
    }

    #[test]
    fn header_lists_every_counter() {
        let h = summary_header();
        assert!(h.starts_with("param,value,mode,runs,restarts_mean,restarts_std"));
        assert!(h.ends_with("wall_time_s_mean,wall_time_s_std"));
    }
}
