//! Experiment configuration files (TOML).
//!
//! ```toml
//! name = "tree_hardness"
//! master_seed = 7
//! trials = 200
//! output_dir = "out/tree_hardness"
//! schedules = ["fixed:2", "geom:1:2:50000:400"]
//!
//! [instance]
//! family = "star-tree"
//! k = 400
//!
//! [run]
//! algorithm = "ump"
//! steps = 1000000
//! watch = "root"
//!
//! [[checks]]
//! name = "root stays out"
//! metric = "root_added_frac"
//! max = 0.05
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dynamics::FugacitySchedule;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub master_seed: u64,
    pub trials: u32,
    /// Not part of the config hash.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    pub schedules: Vec<FugacitySchedule>,
    pub instance: InstanceSpec,
    pub run: RunSpec,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InstanceSpec {
    File {
        path: PathBuf,
    },
    BaseBipartite {
        n: usize,
        k: usize,
        p: f64,
        seed: Option<u64>,
    },
    /// Simulated implicitly on the base graph unless `explicit` is set.
    CliqueBlowup {
        n: usize,
        k: usize,
        ell: usize,
        p: f64,
        seed: Option<u64>,
        #[serde(default)]
        explicit: bool,
    },
    BipartiteBlowup {
        n: usize,
        d: f64,
        cloud_size: usize,
        copies: usize,
        seed: Option<u64>,
    },
    StarTree {
        k: usize,
    },
    HardTree {
        k: usize,
        copies: usize,
        #[serde(default = "yes")]
        apex: bool,
    },
    BalancedBipartite {
        n: usize,
        d: f64,
        seed: Option<u64>,
    },
    AppendixAnchor {
        n: usize,
    },
    AppendixMulticopy {
        n: usize,
        epsilon: f64,
    },
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// Discrete-time process for `steps` steps.
    Ump,
    /// Continuous-time process; clique blowups use the projected rates.
    Ct,
    RandomizedGreedy,
    DegreeGreedy,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Watch {
    Vertex(usize),
    Named(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSpec {
    pub at_step: u64,
    /// `star-a` (the `a_i` vertices of a star tree) or an explicit list.
    #[serde(default)]
    pub region: Option<String>,
    #[serde(default)]
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub algorithm: Algorithm,
    #[serde(default)]
    pub steps: Option<u64>,
    #[serde(default)]
    pub horizon: Option<f64>,
    #[serde(default)]
    pub max_events: Option<u64>,
    /// Stop a trial once `|I_t|` reaches this absolute size...
    #[serde(default)]
    pub stop_at_size: Option<usize>,
    /// ...or this fraction of `α` (rounded up).
    #[serde(default)]
    pub stop_at_ratio: Option<f64>,
    /// `root` (vertex 0 of a star tree) or a vertex index.
    #[serde(default)]
    pub watch: Option<Watch>,
    #[serde(default)]
    pub probe: Option<ProbeSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    pub name: String,
    /// Schedule label this check applies to; all schedules when absent.
    #[serde(default)]
    pub schedule: Option<String>,
    pub metric: String,
    #[serde(default)]
    pub min: Option<f64>,
    #[serde(default)]
    pub max: Option<f64>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn schedule_labels(&self) -> Vec<String> {
        self.schedules.iter().map(ToString::to_string).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return bad(format!("invalid experiment name `{}`", self.name));
        }
        let r = &self.run;
        let needs_schedule = matches!(r.algorithm, Algorithm::Ump | Algorithm::Ct);
        if needs_schedule && self.schedules.is_empty() {
            return bad("at least one schedule is required".into());
        }
        match r.algorithm {
            Algorithm::Ump if r.steps.unwrap_or(0) == 0 => return bad("ump runs need steps >= 1".into()),
            Algorithm::Ct if r.horizon.is_none() && r.max_events.is_none() => {
                return bad("ct runs need a horizon or max_events".into())
            }
            _ => {}
        }
        if let InstanceSpec::CliqueBlowup { explicit: false, .. } = self.instance {
            if r.algorithm != Algorithm::Ct {
                return bad("implicit clique blowups run with algorithm = \"ct\"".into());
            }
        }
        if let Some(Watch::Named(name)) = &r.watch {
            if name != "root" {
                return bad(format!("unknown watch target `{name}`"));
            }
        }
        if let Some(p) = &r.probe {
            match p.region.as_deref() {
                None | Some("star-a") => {}
                Some(other) => return bad(format!("unknown probe region `{other}`")),
            }
        }
        let labels = self.schedule_labels();
        for c in &self.checks {
            if c.min.is_none() && c.max.is_none() {
                return bad(format!("check `{}` has neither min nor max", c.name));
            }
            parse_metric(&c.metric)?;
            if let Some(s) = &c.schedule {
                if !labels.contains(s) && !(s == "-" && !needs_schedule) {
                    return bad(format!("check `{}` refers to unknown schedule `{s}`", c.name));
                }
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form, ignoring `output_dir`.
    pub fn hash(&self) -> String {
        let mut value = serde_json::to_value(self).expect("config serializes");
        if let Some(obj) = value.as_object_mut() {
            obj.remove("output_dir");
        }
        // serde_json maps are ordered by key, so this string is canonical.
        let canonical = serde_json::to_string(&value).expect("json serializes");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }
}

/// Summary metrics usable in checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric {
    MeanRatio,
    MaxRatio,
    MinRatio,
    MeanSize,
    /// Fraction of trials with `max_size >= N`.
    ReachFrac(usize),
    /// Fraction of trials with `max_size <= N`.
    BelowFrac(usize),
    /// Fraction of trials whose probe count is at least `K`.
    ProbeFrac(usize),
    RootAddedFrac,
    MeanDeload,
}

pub fn parse_metric(s: &str) -> Result<Metric> {
    let (head, arg) = s.split_once(':').unwrap_or((s, ""));
    let count = || {
        arg.parse::<usize>()
            .map_err(|_| Error::Config(format!("metric `{s}` needs an integer argument")))
    };
    Ok(match head {
        "mean_ratio" => Metric::MeanRatio,
        "max_ratio" => Metric::MaxRatio,
        "min_ratio" => Metric::MinRatio,
        "mean_size" => Metric::MeanSize,
        "reach_frac" => Metric::ReachFrac(count()?),
        "below_frac" => Metric::BelowFrac(count()?),
        "probe_frac" => Metric::ProbeFrac(count()?),
        "root_added_frac" => Metric::RootAddedFrac,
        "mean_deload" => Metric::MeanDeload,
        _ => return Err(Error::Config(format!("unknown metric `{s}`"))),
    })
}
