//! Re-summarizing and re-judging a finished experiment from its files.

use std::path::Path;

use super::config::ExperimentConfig;
use super::csvio::read_run_csv;
use super::run::{write_summary_csv, write_verdict_csv, ExperimentManifest, MANIFEST_FILE, SUMMARY_FILE, VERDICT_FILE};
use super::verdict::{required_thresholds, verdict, Verdict};
use crate::analysis::{summarize_observations, SummaryStats};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Report {
    pub summaries: Vec<(String, SummaryStats)>,
    pub verdicts: Vec<Verdict>,
}

/// Rebuilds summaries from the run CSVs in `dir` and judges them against
/// `cfg` (the manifest's config when `None`). Probe counts are not part of
/// the run CSV, so probe thresholds come from the manifest.
pub fn report(dir: &Path, cfg: Option<&ExperimentConfig>) -> Result<Report> {
    let manifest = ExperimentManifest::load(&dir.join(MANIFEST_FILE))?;
    let own;
    let cfg = match cfg {
        Some(c) => c,
        None => {
            own = ExperimentConfig::from_toml(&manifest.config)?;
            &own
        }
    };
    let (thresholds, _) = required_thresholds(&cfg.checks);
    let mut summaries = Vec::new();
    for arm in &manifest.arms {
        let path = dir.join(&arm.file);
        if !path.exists() {
            return Err(Error::IncompleteRun(format!("run file {} is missing", arm.file)));
        }
        let obs: Vec<_> = read_run_csv(&path)?.iter().map(|r| r.observation()).collect();
        let mut s = summarize_observations(&obs, &thresholds, &[])?;
        s.probe_thresholds = arm.summary.probe_thresholds.clone();
        summaries.push((arm.label.clone(), s));
    }
    let verdicts = verdict(cfg, &summaries)?;
    write_summary_csv(&dir.join(SUMMARY_FILE), &summaries)?;
    write_verdict_csv(&dir.join(VERDICT_FILE), &verdicts)?;
    Ok(Report { summaries, verdicts })
}
