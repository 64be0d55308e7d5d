use serde::{Deserialize, Serialize};

use crate::dynamics::TrialRecord;
use crate::error::{Error, Result};

pub const QUANTILE_LEVELS: [f64; 5] = [0.05, 0.25, 0.5, 0.75, 0.95];
const Z95: f64 = 1.959_963_984_540_054;

/// The per-trial quantities a summary needs; built from trial records or
/// from run CSV rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub max_size: usize,
    pub alpha: usize,
    pub root_added: Option<bool>,
    pub deload: Option<usize>,
    pub probe: Option<usize>,
}

impl Observation {
    pub fn from_record(r: &TrialRecord, alpha: usize) -> Self {
        Observation {
            max_size: r.max_size,
            alpha,
            root_added: r.root_added,
            deload: r.deload_final,
            probe: r.probe_count,
        }
    }

    pub fn ratio(&self) -> f64 {
        self.max_size as f64 / self.alpha as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdStat {
    pub threshold: usize,
    pub reached: usize,
    pub frequency: f64,
    pub failure_frequency: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl ThresholdStat {
    fn new(threshold: usize, reached: usize, trials: usize) -> Self {
        let (lo, hi) = proportion_ci(reached, trials);
        let frequency = reached as f64 / trials as f64;
        ThresholdStat { threshold, reached, frequency, failure_frequency: 1.0 - frequency, ci_low: lo, ci_high: hi }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub trials: usize,
    pub mean_size: f64,
    pub sd_size: f64,
    pub mean_ratio: f64,
    pub sd_ratio: f64,
    pub ratio_ci_low: f64,
    pub ratio_ci_high: f64,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// Nearest-rank quantiles of the ratio at [`QUANTILE_LEVELS`].
    pub ratio_quantiles: Vec<f64>,
    /// Frequency of `max_size >= threshold`.
    pub thresholds: Vec<ThresholdStat>,
    /// Frequency of `probe >= threshold`, over trials with a probe value.
    pub probe_thresholds: Vec<ThresholdStat>,
    pub root_added_fraction: Option<f64>,
    pub mean_deload: Option<f64>,
}

impl SummaryStats {
    pub fn threshold(&self, size: usize) -> Option<&ThresholdStat> {
        self.thresholds.iter().find(|t| t.threshold == size)
    }

    pub fn probe_threshold(&self, count: usize) -> Option<&ThresholdStat> {
        self.probe_thresholds.iter().find(|t| t.threshold == count)
    }
}

/// Nearest-rank quantile of sorted data: the smallest value with at least
/// a `level` fraction of the data at or below it.
pub fn nearest_rank(sorted: &[f64], level: f64) -> f64 {
    let n = sorted.len();
    let rank = (level * n as f64).ceil().clamp(1.0, n as f64) as usize;
    sorted[rank - 1]
}

/// 95% interval for a proportion: normal approximation when both counts
/// are at least 10, Wilson score otherwise.
pub fn proportion_ci(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    if successes >= 10 && trials - successes >= 10 {
        let half = Z95 * (p * (1.0 - p) / n).sqrt();
        return ((p - half).max(0.0), (p + half).min(1.0));
    }
    let z2 = Z95 * Z95;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = Z95 / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Mean, sample standard deviation and normal 95% interval of the mean.
/// All NaN for empty input.
pub fn mean_ci(values: &[f64]) -> (f64, f64, f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN, f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    // Shifting by the first value keeps constant data at exactly zero spread.
    let shift = values[0];
    let centred_mean = values.iter().map(|x| x - shift).sum::<f64>() / n;
    let mean = shift + centred_mean;
    let sd = if values.len() > 1 {
        (values.iter().map(|x| (x - shift - centred_mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    let half = Z95 * sd / n.sqrt();
    (mean, sd, mean - half, mean + half)
}

pub fn summarize(records: &[TrialRecord], alpha: usize, thresholds: &[usize]) -> Result<SummaryStats> {
    let obs: Vec<Observation> = records.iter().map(|r| Observation::from_record(r, alpha)).collect();
    summarize_observations(&obs, thresholds, &[])
}

pub fn summarize_observations(obs: &[Observation], thresholds: &[usize], probe_thresholds: &[usize]) -> Result<SummaryStats> {
    if obs.is_empty() {
        return Err(Error::EmptyInput);
    }
    if obs.iter().any(|o| o.alpha == 0) {
        return Err(Error::InvalidParams("alpha must be positive".into()));
    }
    let trials = obs.len();
    let sizes: Vec<f64> = obs.iter().map(|o| o.max_size as f64).collect();
    let ratios: Vec<f64> = obs.iter().map(Observation::ratio).collect();
    let (mean_size, sd_size, _, _) = mean_ci(&sizes);
    let (mean_ratio, sd_ratio, lo, hi) = mean_ci(&ratios);
    let mut sorted = ratios.clone();
    sorted.sort_by(f64::total_cmp);

    let mut ts: Vec<usize> = thresholds.to_vec();
    ts.sort_unstable();
    ts.dedup();
    let thresholds = ts
        .iter()
        .map(|&t| ThresholdStat::new(t, obs.iter().filter(|o| o.max_size >= t).count(), trials))
        .collect();

    let probes: Vec<usize> = obs.iter().filter_map(|o| o.probe).collect();
    let mut ps: Vec<usize> = probe_thresholds.to_vec();
    ps.sort_unstable();
    ps.dedup();
    let probe_thresholds = if probes.is_empty() {
        Vec::new()
    } else {
        ps.iter()
            .map(|&t| ThresholdStat::new(t, probes.iter().filter(|&&p| p >= t).count(), probes.len()))
            .collect()
    };

    let flags: Vec<bool> = obs.iter().filter_map(|o| o.root_added).collect();
    let deloads: Vec<usize> = obs.iter().filter_map(|o| o.deload).collect();
    Ok(SummaryStats {
        trials,
        mean_size,
        sd_size,
        mean_ratio,
        sd_ratio,
        ratio_ci_low: lo,
        ratio_ci_high: hi,
        min_ratio: sorted[0],
        max_ratio: sorted[trials - 1],
        ratio_quantiles: QUANTILE_LEVELS.iter().map(|&q| nearest_rank(&sorted, q)).collect(),
        thresholds,
        probe_thresholds,
        root_added_fraction: (!flags.is_empty())
            .then(|| flags.iter().filter(|&&f| f).count() as f64 / flags.len() as f64),
        mean_deload: (!deloads.is_empty()).then(|| deloads.iter().sum::<usize>() as f64 / deloads.len() as f64),
    })
}
