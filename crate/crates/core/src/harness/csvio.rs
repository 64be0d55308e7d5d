//! CSV schemas: per-trial run rows, schedule summaries and verdicts.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analysis::{Observation, SummaryStats};
use crate::dynamics::TrialRecord;
use crate::error::Result;

/// One trial, in the run CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub trial_id: u32,
    pub seed: u64,
    pub steps: u64,
    pub max_size: usize,
    pub step_of_max: u64,
    pub alpha: usize,
    pub ratio: f64,
    pub root_added: Option<bool>,
    pub deload_final: Option<usize>,
}

impl RunRow {
    pub fn from_record(trial_id: u32, r: &TrialRecord, alpha: usize) -> Self {
        RunRow {
            trial_id,
            seed: r.seed,
            steps: r.steps,
            max_size: r.max_size,
            step_of_max: r.step_of_max,
            alpha,
            ratio: r.max_size as f64 / alpha as f64,
            root_added: r.root_added,
            deload_final: r.deload_final,
        }
    }

    pub fn observation(&self) -> Observation {
        Observation {
            max_size: self.max_size,
            alpha: self.alpha,
            root_added: self.root_added,
            deload: self.deload_final,
            probe: None,
        }
    }
}

pub fn write_rows<T: Serialize, W: Write>(rows: &[T], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for row in rows {
        out.serialize(row)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_rows<T: for<'de> Deserialize<'de>, R: Read>(r: R) -> Result<Vec<T>> {
    let mut input = csv::Reader::from_reader(r);
    let mut rows = Vec::new();
    for row in input.deserialize() {
        rows.push(row?);
    }
    Ok(rows)
}

pub fn write_run_csv(path: &Path, rows: &[RunRow]) -> Result<()> {
    write_rows(rows, std::fs::File::create(path)?)
}

/// Reads a run CSV; rows come back ordered by `trial_id`.
pub fn read_run_csv(path: &Path) -> Result<Vec<RunRow>> {
    let mut rows: Vec<RunRow> = read_rows(std::fs::File::open(path)?)?;
    rows.sort_by_key(|r| r.trial_id);
    Ok(rows)
}

/// Flat form of [`SummaryStats`] for the summary CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub schedule: String,
    pub trials: usize,
    pub mean_size: f64,
    pub sd_size: f64,
    pub mean_ratio: f64,
    pub sd_ratio: f64,
    pub ratio_ci_low: f64,
    pub ratio_ci_high: f64,
    pub min_ratio: f64,
    pub q05: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub q95: f64,
    pub max_ratio: f64,
    pub root_added_fraction: Option<f64>,
    pub mean_deload: Option<f64>,
}

impl SummaryRow {
    pub fn new(schedule: &str, s: &SummaryStats) -> Self {
        let q = &s.ratio_quantiles;
        SummaryRow {
            schedule: schedule.to_string(),
            trials: s.trials,
            mean_size: s.mean_size,
            sd_size: s.sd_size,
            mean_ratio: s.mean_ratio,
            sd_ratio: s.sd_ratio,
            ratio_ci_low: s.ratio_ci_low,
            ratio_ci_high: s.ratio_ci_high,
            min_ratio: s.min_ratio,
            q05: q[0],
            q25: q[1],
            median: q[2],
            q75: q[3],
            q95: q[4],
            max_ratio: s.max_ratio,
            root_added_fraction: s.root_added_fraction,
            mean_deload: s.mean_deload,
        }
    }
}
