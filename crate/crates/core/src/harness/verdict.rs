use std::fmt;

use serde::{Deserialize, Serialize};

use super::config::{parse_metric, CheckSpec, ExperimentConfig, Metric};
use crate::analysis::SummaryStats;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub schedule: String,
    pub metric: String,
    pub observed: f64,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub pass: bool,
    /// Distance to the nearest bound; negative when failing.
    pub margin: f64,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bounds = match (self.min, self.max) {
            (Some(lo), Some(hi)) => format!("in [{lo}, {hi}]"),
            (Some(lo), None) => format!(">= {lo}"),
            (None, Some(hi)) => format!("<= {hi}"),
            (None, None) => "unbounded".into(),
        };
        write!(
            f,
            "{} {} [{}] {} = {:.6} (want {}, margin {:+.6})",
            if self.pass { "PASS" } else { "FAIL" },
            self.check,
            self.schedule,
            self.metric,
            self.observed,
            bounds,
            self.margin
        )
    }
}

/// Sizes and probe counts the summaries must carry thresholds for.
pub fn required_thresholds(checks: &[CheckSpec]) -> (Vec<usize>, Vec<usize>) {
    let mut sizes = Vec::new();
    let mut probes = Vec::new();
    for c in checks {
        match parse_metric(&c.metric) {
            Ok(Metric::ReachFrac(n)) => sizes.push(n),
            Ok(Metric::BelowFrac(n)) => sizes.push(n + 1),
            Ok(Metric::ProbeFrac(k)) => probes.push(k),
            _ => {}
        }
    }
    (sizes, probes)
}

pub fn metric_value(s: &SummaryStats, metric: &str) -> Result<f64> {
    let missing = || Error::IncompleteRun(format!("summary lacks data for `{metric}`"));
    Ok(match parse_metric(metric)? {
        Metric::MeanRatio => s.mean_ratio,
        Metric::MaxRatio => s.max_ratio,
        Metric::MinRatio => s.min_ratio,
        Metric::MeanSize => s.mean_size,
        Metric::ReachFrac(n) => s.threshold(n).ok_or_else(missing)?.frequency,
        Metric::BelowFrac(n) => s.threshold(n + 1).ok_or_else(missing)?.failure_frequency,
        Metric::ProbeFrac(k) => s.probe_threshold(k).ok_or_else(missing)?.frequency,
        Metric::RootAddedFrac => s.root_added_fraction.ok_or_else(missing)?,
        Metric::MeanDeload => s.mean_deload.ok_or_else(missing)?,
    })
}

pub fn judge(check: &CheckSpec, schedule: &str, observed: f64) -> Verdict {
    let lo = check.min.map(|m| observed - m);
    let hi = check.max.map(|m| m - observed);
    let margin = match (lo, hi) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => f64::INFINITY,
    };
    Verdict {
        check: check.name.clone(),
        schedule: schedule.to_string(),
        metric: check.metric.clone(),
        observed,
        min: check.min,
        max: check.max,
        pass: margin >= 0.0,
        margin,
    }
}

/// Evaluates every check against the summaries, keyed by schedule label.
/// A check without a schedule applies to each summary.
pub fn verdict(cfg: &ExperimentConfig, summaries: &[(String, SummaryStats)]) -> Result<Vec<Verdict>> {
    let mut out = Vec::new();
    for check in &cfg.checks {
        let targets: Vec<&(String, SummaryStats)> = match &check.schedule {
            Some(label) => {
                let hit = summaries
                    .iter()
                    .find(|(l, _)| l == label)
                    .ok_or_else(|| Error::IncompleteRun(format!("no summary for schedule `{label}`")))?;
                vec![hit]
            }
            None => summaries.iter().collect(),
        };
        if targets.is_empty() {
            return Err(Error::IncompleteRun(format!("no summaries for check `{}`", check.name)));
        }
        for (label, s) in targets {
            out.push(judge(check, label, metric_value(s, &check.metric)?));
        }
    }
    Ok(out)
}

pub fn all_pass(verdicts: &[Verdict]) -> bool {
    verdicts.iter().all(|v| v.pass)
}
