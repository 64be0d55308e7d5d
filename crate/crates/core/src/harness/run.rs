//! Experiment orchestration: instance preparation, parallel trials and
//! result files.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{Algorithm, ExperimentConfig, InstanceSpec, Watch};
use super::csvio::{write_rows, write_run_csv, RunRow, SummaryRow};
use super::verdict::{required_thresholds, verdict, Verdict};
use crate::analysis::{summarize_observations, Observation, SummaryStats};
use crate::dynamics::{
    run_ct_ump, run_degree_greedy, run_randomized_greedy, run_ump, FugacitySchedule, RecorderConfig,
    RegionProbe, TrialRecord, WeightedCTConfig,
};
use crate::error::{Error, Result};
use crate::graph::{
    alpha_bipartite, alpha_bruteforce, alpha_tree, io, AlphaCertificate, AlphaMethod, Graph, GraphKind,
    BRUTE_FORCE_CAP,
};
use crate::instance::{
    clique_blowup_of, formula_alpha, gen_appendix_anchor, gen_appendix_multicopy, gen_base_bipartite,
    gen_bipartite_blowup, gen_clique_blowup, gen_hard_tree, gen_random_balanced_bipartite, gen_star_tree,
    star_tree_a_vertices, validate_relations, BlowupParams, CloudMeta, InstanceMeta,
};
use crate::rng::trial_seed;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Worker count from `ANNEALBENCH_WORKERS`, else the available parallelism.
pub fn default_workers() -> usize {
    std::env::var("ANNEALBENCH_WORKERS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Best available α: the family formula, then tree DP, König on bipartite
/// graphs, and brute force on small graphs.
pub fn compute_alpha(g: &Graph) -> Result<AlphaCertificate> {
    if let Some(alpha) = formula_alpha(g.kind()) {
        return Ok(AlphaCertificate { alpha, witness: None, method: AlphaMethod::Formula });
    }
    if g.is_forest() {
        return alpha_tree(g);
    }
    if g.has_sides() && g.check_labeled_bipartition().is_ok() {
        return alpha_bipartite(g);
    }
    if let Some(coloring) = g.two_coloring() {
        let labelled = g.clone().with_sides(coloring.into_iter().map(Some).collect())?;
        return alpha_bipartite(&labelled);
    }
    if g.num_vertices() <= BRUTE_FORCE_CAP {
        return alpha_bruteforce(g);
    }
    Err(Error::CapExceeded(g.num_vertices(), BRUTE_FORCE_CAP))
}

/// A generated (or loaded) instance, shared read-only by all trials.
#[derive(Debug, Clone)]
pub struct PreparedInstance {
    /// Graph the trials run on; the base graph for implicit clique blowups.
    pub graph: Graph,
    pub alpha: AlphaCertificate,
    pub ct: Option<WeightedCTConfig>,
    pub clouds: Option<CloudMeta>,
}

pub fn prepare_instance(cfg: &ExperimentConfig) -> Result<PreparedInstance> {
    let seed = |s: Option<u64>| s.unwrap_or(cfg.master_seed);
    let horizon = cfg.run.horizon.unwrap_or(f64::INFINITY);
    let mut clouds = None;
    let mut ct = None;
    let (graph, alpha) = match &cfg.instance {
        InstanceSpec::File { path } => {
            let g = io::load(path)?;
            let a = compute_alpha(&g)?;
            (g, a)
        }
        InstanceSpec::BaseBipartite { n, k, p, seed: s } => {
            let g = gen_base_bipartite(*n, *k, *p, seed(*s))?;
            let a = alpha_bipartite(&g)?;
            (g, a)
        }
        InstanceSpec::CliqueBlowup { n, k, ell, p, seed: s, explicit } => {
            let base = gen_base_bipartite(*n, *k, *p, seed(*s))?;
            // Each clique contributes at most one vertex, so α matches the base.
            let a = AlphaCertificate { witness: None, ..alpha_bipartite(&base)? };
            if *explicit {
                let blowup = clique_blowup_of(&base, *ell)?;
                let g = blowup.graph.with_kind(GraphKind::CliqueBlowup { n: *n, k: *k, ell: *ell })?;
                (g, a)
            } else {
                ct = Some(WeightedCTConfig::clique_blowup(&base, *ell, horizon)?);
                (base, a)
            }
        }
        InstanceSpec::BipartiteBlowup { n, d, cloud_size, copies, seed: s } => {
            let base = gen_random_balanced_bipartite(*n, *d, seed(*s))?;
            let (g, meta) = gen_bipartite_blowup(&base, *cloud_size, *copies)?;
            clouds = Some(meta);
            let a = alpha_bipartite(&g)?;
            (g, a)
        }
        InstanceSpec::StarTree { k } => {
            let g = gen_star_tree(*k)?;
            (g.clone(), compute_alpha(&g)?)
        }
        InstanceSpec::HardTree { k, copies, apex } => {
            let g = gen_hard_tree(*k, *copies, *apex)?;
            (g.clone(), compute_alpha(&g)?)
        }
        InstanceSpec::BalancedBipartite { n, d, seed: s } => {
            let g = gen_random_balanced_bipartite(*n, *d, seed(*s))?;
            let a = alpha_bipartite(&g)?;
            (g, a)
        }
        InstanceSpec::AppendixAnchor { n } => {
            let g = gen_appendix_anchor(*n)?;
            (g.clone(), compute_alpha(&g)?)
        }
        InstanceSpec::AppendixMulticopy { n, epsilon } => {
            let g = gen_appendix_multicopy(*n, *epsilon)?;
            (g.clone(), compute_alpha(&g)?)
        }
    };
    if cfg.run.algorithm == Algorithm::Ct && ct.is_none() {
        ct = Some(WeightedCTConfig::uniform(graph.num_vertices(), horizon));
    }
    if let (Some(c), Some(m)) = (ct.as_mut(), cfg.run.max_events) {
        c.max_events = Some(m);
    }
    Ok(PreparedInstance { graph, alpha, ct, clouds })
}

/// Generates the explicit graph of an instance spec together with its
/// sidecar metadata. Clique blowups are always materialized here.
pub fn generate(spec: &InstanceSpec, default_seed: u64) -> Result<(Graph, InstanceMeta)> {
    let mut seed = default_seed;
    let mut warnings = Vec::new();
    let graph = match spec {
        InstanceSpec::File { path } => io::load(path)?,
        InstanceSpec::CliqueBlowup { n, k, ell, p, seed: s, .. } => {
            seed = s.unwrap_or(default_seed);
            let params = BlowupParams::new(*n, *k, *ell, *p, seed)?;
            warnings = validate_relations(&params).warnings();
            gen_clique_blowup(&params)?.graph
        }
        InstanceSpec::BaseBipartite { seed: s, .. }
        | InstanceSpec::BipartiteBlowup { seed: s, .. }
        | InstanceSpec::BalancedBipartite { seed: s, .. } => {
            seed = s.unwrap_or(default_seed);
            let cfg = spec_only_config(spec, seed);
            prepare_instance(&cfg)?.graph
        }
        _ => prepare_instance(&spec_only_config(spec, seed))?.graph,
    };
    let mut parameters = toml::Table::try_from(spec).map_err(|e| Error::Config(e.to_string()))?;
    parameters.remove("seed");
    let meta = InstanceMeta {
        seed,
        num_vertices: graph.num_vertices(),
        num_edges: graph.num_edges(),
        formula_alpha: formula_alpha(graph.kind()),
        kind: graph.kind(),
        parameters,
        warnings,
    };
    Ok((graph, meta))
}

fn spec_only_config(spec: &InstanceSpec, seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        name: "gen".into(),
        master_seed: seed,
        trials: 1,
        output_dir: None,
        schedules: Vec::new(),
        instance: spec.clone(),
        run: super::config::RunSpec {
            algorithm: Algorithm::DegreeGreedy,
            steps: None,
            horizon: None,
            max_events: None,
            stop_at_size: None,
            stop_at_ratio: None,
            watch: None,
            probe: None,
        },
        checks: Vec::new(),
    }
}

fn region_vertices(g: &Graph, region: Option<&str>, explicit: &[usize]) -> Vec<usize> {
    let mut out = explicit.to_vec();
    if region == Some("star-a") {
        match g.kind() {
            GraphKind::StarTree { k } => out.extend(star_tree_a_vertices(k, 0)),
            GraphKind::HardTree { k, copies, .. } => {
                out.extend((0..copies).flat_map(|c| star_tree_a_vertices(k, c)))
            }
            _ => {}
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Recorder settings implied by the run section and the checks.
pub fn recorder_config(cfg: &ExperimentConfig, inst: &PreparedInstance) -> RecorderConfig {
    let (thresholds, _) = required_thresholds(&cfg.checks);
    let r = &cfg.run;
    let ratio_stop = r.stop_at_ratio.map(|q| (q * inst.alpha.alpha as f64).ceil() as usize);
    let stop = match (r.stop_at_size, ratio_stop) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    RecorderConfig {
        thresholds,
        watch_vertex: r.watch.as_ref().map(|w| match w {
            Watch::Vertex(v) => *v,
            Watch::Named(_) => 0,
        }),
        stop_at_size: stop,
        probe: r.probe.as_ref().map(|p| RegionProbe {
            at_step: p.at_step,
            vertices: region_vertices(&inst.graph, p.region.as_deref(), &p.vertices),
        }),
        clouds: inst.clouds,
        ..RecorderConfig::minimal()
    }
}

fn degree_greedy_record(g: &Graph, seed: u64) -> TrialRecord {
    let set = run_degree_greedy(g);
    TrialRecord {
        seed,
        steps: set.len() as u64,
        time: None,
        max_size: set.len(),
        step_of_max: set.len() as u64,
        time_of_max: None,
        hitting_times: Vec::new(),
        snapshots: Vec::new(),
        root_added: None,
        deload_final: None,
        probe_count: None,
        final_size: set.len(),
        best_set: None,
        final_set: Some(set),
    }
}

/// Runs one trial of the configured algorithm.
pub fn run_trial(
    cfg: &ExperimentConfig,
    inst: &PreparedInstance,
    rec: &RecorderConfig,
    sched: Option<&FugacitySchedule>,
    seed: u64,
) -> Result<TrialRecord> {
    let g = &inst.graph;
    let need = || Error::Config("this algorithm needs a schedule".into());
    match cfg.run.algorithm {
        Algorithm::Ump => run_ump(g, sched.ok_or_else(need)?, cfg.run.steps.unwrap_or(0), seed, rec),
        Algorithm::Ct => {
            let ct = inst.ct.as_ref().expect("prepared with a continuous-time config");
            run_ct_ump(g, ct, sched.ok_or_else(need)?, seed, rec)
        }
        Algorithm::RandomizedGreedy => Ok(run_randomized_greedy(g, seed).1),
        Algorithm::DegreeGreedy => Ok(degree_greedy_record(g, seed)),
    }
}

/// One schedule's worth of trials.
#[derive(Debug, Clone)]
pub struct ArmResult {
    pub label: String,
    pub records: Vec<TrialRecord>,
    pub rows: Vec<RunRow>,
    pub summary: SummaryStats,
}

#[derive(Debug, Clone)]
pub struct ExperimentResults {
    pub alpha: AlphaCertificate,
    pub num_vertices: usize,
    pub num_edges: usize,
    pub arms: Vec<ArmResult>,
    pub verdicts: Vec<Verdict>,
}

impl ExperimentResults {
    pub fn summaries(&self) -> Vec<(String, SummaryStats)> {
        self.arms.iter().map(|a| (a.label.clone(), a.summary.clone())).collect()
    }

    pub fn all_pass(&self) -> bool {
        super::verdict::all_pass(&self.verdicts)
    }
}

/// Labels of the arms an experiment runs: one per schedule, or a single
/// `-` arm for the schedule-free greedy algorithms.
pub fn arm_labels(cfg: &ExperimentConfig) -> Vec<String> {
    match cfg.run.algorithm {
        Algorithm::Ump | Algorithm::Ct => cfg.schedule_labels(),
        Algorithm::RandomizedGreedy | Algorithm::DegreeGreedy => vec!["-".into()],
    }
}

/// Runs `trials` trials of one arm on a pool of `workers` threads. Results
/// are ordered by trial id whatever the worker count.
pub fn run_trials<F>(trials: u32, workers: usize, master: u64, arm: u32, f: F) -> Result<Vec<TrialRecord>>
where
    F: Fn(u64) -> Result<TrialRecord> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|t| f(trial_seed(master, arm, t)))
            .collect::<Result<Vec<_>>>()
    })
}

/// Runs every arm of an experiment in memory.
pub fn execute(cfg: &ExperimentConfig, workers: usize) -> Result<ExperimentResults> {
    cfg.validate()?;
    let inst = prepare_instance(cfg)?;
    let rec = recorder_config(cfg, &inst);
    let (thresholds, probes) = required_thresholds(&cfg.checks);
    let alpha = inst.alpha.alpha;
    let mut arms = Vec::new();
    for (arm, label) in arm_labels(cfg).into_iter().enumerate() {
        let sched = cfg.schedules.get(arm);
        let records = run_trials(cfg.trials, workers, cfg.master_seed, arm as u32, |seed| {
            run_trial(cfg, &inst, &rec, sched, seed)
        })?;
        let rows: Vec<RunRow> =
            records.iter().enumerate().map(|(i, r)| RunRow::from_record(i as u32, r, alpha)).collect();
        let obs: Vec<Observation> = records.iter().map(|r| Observation::from_record(r, alpha)).collect();
        let summary = summarize_observations(&obs, &thresholds, &probes)?;
        arms.push(ArmResult { label, records, rows, summary });
    }
    let summaries: Vec<(String, SummaryStats)> =
        arms.iter().map(|a| (a.label.clone(), a.summary.clone())).collect();
    let verdicts = verdict(cfg, &summaries)?;
    Ok(ExperimentResults {
        alpha: inst.alpha.clone(),
        num_vertices: inst.graph.num_vertices(),
        num_edges: inst.graph.num_edges(),
        arms,
        verdicts,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmManifest {
    pub label: String,
    pub file: String,
    pub seeds: Vec<u64>,
    pub summary: SummaryStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentManifest {
    pub name: String,
    pub config_hash: String,
    pub tool_version: String,
    pub master_seed: u64,
    pub trials: u32,
    pub workers: usize,
    pub alpha: usize,
    pub alpha_method: AlphaMethod,
    pub num_vertices: usize,
    pub num_edges: usize,
    pub wall_clock_secs: f64,
    pub arms: Vec<ArmManifest>,
    pub files: Vec<String>,
    pub all_pass: bool,
    /// The config as run, so `report` can re-judge without the original file.
    pub config: String,
}

impl ExperimentManifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("bad manifest: {e}")))
    }
}

pub const MANIFEST_FILE: &str = "manifest.json";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const VERDICT_FILE: &str = "verdicts.csv";

pub fn run_file_name(arm: usize, label: &str) -> String {
    let clean: String = label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' { c } else { '_' })
        .collect();
    format!("run_{arm:02}_{clean}.csv")
}

pub fn write_summary_csv(path: &Path, summaries: &[(String, SummaryStats)]) -> Result<()> {
    let rows: Vec<SummaryRow> = summaries.iter().map(|(l, s)| SummaryRow::new(l, s)).collect();
    write_rows(&rows, std::fs::File::create(path)?)
}

pub fn write_verdict_csv(path: &Path, verdicts: &[Verdict]) -> Result<()> {
    write_rows(verdicts, std::fs::File::create(path)?)
}

/// Output directory: the explicit one, else the config's, else
/// `out/<name>`.
pub fn output_dir(cfg: &ExperimentConfig, explicit: Option<&Path>) -> PathBuf {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out").join(&cfg.name))
}

/// Runs the experiment and writes the run CSVs, summary, verdicts and
/// manifest into `dir`.
pub fn run_experiment(cfg: &ExperimentConfig, dir: &Path, workers: usize) -> Result<(ExperimentManifest, ExperimentResults)> {
    let started = Instant::now();
    let results = execute(cfg, workers)?;
    std::fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    let mut arms = Vec::new();
    for (i, arm) in results.arms.iter().enumerate() {
        let file = run_file_name(i, &arm.label);
        write_run_csv(&dir.join(&file), &arm.rows)?;
        files.push(file.clone());
        arms.push(ArmManifest {
            label: arm.label.clone(),
            file,
            seeds: arm.rows.iter().map(|r| r.seed).collect(),
            summary: arm.summary.clone(),
        });
    }
    write_summary_csv(&dir.join(SUMMARY_FILE), &results.summaries())?;
    write_verdict_csv(&dir.join(VERDICT_FILE), &results.verdicts)?;
    files.push(SUMMARY_FILE.into());
    files.push(VERDICT_FILE.into());
    files.push(MANIFEST_FILE.into());
    let manifest = ExperimentManifest {
        name: cfg.name.clone(),
        config_hash: cfg.hash(),
        tool_version: TOOL_VERSION.into(),
        master_seed: cfg.master_seed,
        trials: cfg.trials,
        workers,
        alpha: results.alpha.alpha,
        alpha_method: results.alpha.method,
        num_vertices: results.num_vertices,
        num_edges: results.num_edges,
        wall_clock_secs: started.elapsed().as_secs_f64(),
        arms,
        files,
        all_pass: results.all_pass(),
        config: cfg.to_toml(),
    };
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    std::fs::write(dir.join(MANIFEST_FILE), json)?;
    Ok((manifest, results))
}
