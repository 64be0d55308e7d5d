use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use annealbench_core::analysis::{summarize_observations, Observation};
use annealbench_core::dynamics::{run_ump, FugacitySchedule, RecorderConfig};
use annealbench_core::graph::{io, AlphaCertificate, AlphaMethod, Graph};
use annealbench_core::harness::{
    self, compute_alpha, default_workers, run_trials, write_run_csv, ExperimentConfig, InstanceSpec, RunRow,
    Verdict,
};
use annealbench_core::instance::InstanceMeta;

#[derive(Parser)]
#[command(name = "annealbench", version, about = "Metropolis dynamics for maximum independent set")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file plus a `<FILE>.meta.toml` sidecar.
    Gen {
        /// Family name, e.g. clique-blowup, star-tree, hard-tree.
        family: String,
        /// Family parameters as key=value pairs.
        params: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run independent trials of the discrete process on a graph file.
    Run {
        #[arg(long)]
        graph: PathBuf,
        /// fixed:λ | greedy | seq:FILE | list:λ1,λ2,... | geom:a:f:p[:cap] | adaptive:NAME[:k=v,...]
        #[arg(long)]
        schedule: String,
        #[arg(long)]
        steps: u64,
        #[arg(long, default_value_t = 1)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Vertex whose first insertion is reported as root_added.
        #[arg(long)]
        watch: Option<usize>,
        /// Override α instead of computing it.
        #[arg(long)]
        alpha: Option<usize>,
    },
    /// Print α of a graph file and the method that certified it.
    Alpha {
        graph: PathBuf,
        /// Also print a maximum independent set when one is known.
        #[arg(long)]
        witness: bool,
    },
    /// Run a configured experiment and judge its checks.
    Experiment {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-summarize and re-judge a finished experiment directory.
    Report {
        dir: PathBuf,
        /// Judge against this config instead of the one in the manifest.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn sidecar_path(graph: &Path) -> PathBuf {
    let mut name = graph.as_os_str().to_owned();
    name.push(".meta.toml");
    PathBuf::from(name)
}

fn parse_value(raw: &str) -> toml::Value {
    format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

fn instance_spec(family: &str, params: &[String]) -> Result<InstanceSpec> {
    let mut table = toml::Table::new();
    table.insert("family".into(), toml::Value::String(family.into()));
    for p in params {
        let (k, v) = p.split_once('=').with_context(|| format!("parameter `{p}` is not key=value"))?;
        table.insert(k.trim().replace('-', "_"), parse_value(v.trim()));
    }
    toml::Value::Table(table).try_into().context("invalid instance parameters")
}

fn gen(family: &str, params: &[String], seed: u64, out: &Path) -> Result<()> {
    let spec = instance_spec(family, params)?;
    let (g, meta) = harness::generate(&spec, seed)?;
    io::save(&g, out).with_context(|| format!("writing {}", out.display()))?;
    std::fs::write(sidecar_path(out), meta.to_text())?;
    println!(
        "{}: {} vertices, {} edges, formula alpha {}",
        out.display(),
        meta.num_vertices,
        meta.num_edges,
        meta.formula_alpha.map_or("unknown".into(), |a| a.to_string())
    );
    for w in &meta.warnings {
        println!("warning: {w}");
    }
    Ok(())
}

/// α for a graph file: the sidecar's formula value when present, else the
/// best exact oracle.
fn file_alpha(path: &Path, g: &Graph) -> Result<AlphaCertificate> {
    let side = sidecar_path(path);
    if side.exists() {
        let meta = InstanceMeta::from_text(&std::fs::read_to_string(&side)?)?;
        if let Some(alpha) = meta.formula_alpha {
            return Ok(AlphaCertificate { alpha, witness: None, method: AlphaMethod::Formula });
        }
    }
    Ok(compute_alpha(g)?)
}

#[allow(clippy::too_many_arguments)]
fn run(
    graph: &Path,
    schedule: &str,
    steps: u64,
    trials: u32,
    seed: u64,
    out: &Path,
    watch: Option<usize>,
    alpha: Option<usize>,
) -> Result<()> {
    if trials == 0 {
        bail!("--trials must be at least 1");
    }
    let g = io::load(graph).with_context(|| format!("reading {}", graph.display()))?;
    let sched = FugacitySchedule::parse(schedule)?;
    let alpha = match alpha {
        Some(a) => a,
        None => file_alpha(graph, &g)?.alpha,
    };
    let cfg = RecorderConfig { watch_vertex: watch, ..RecorderConfig::minimal() };
    let records = run_trials(trials, default_workers(), seed, 0, |s| run_ump(&g, &sched, steps, s, &cfg))?;
    let rows: Vec<RunRow> = records.iter().enumerate().map(|(i, r)| RunRow::from_record(i as u32, r, alpha)).collect();
    write_run_csv(out, &rows)?;
    let obs: Vec<Observation> = records.iter().map(|r| Observation::from_record(r, alpha)).collect();
    let s = summarize_observations(&obs, &[], &[])?;
    println!(
        "{trials} trials, alpha {alpha}: mean ratio {:.4} (95% CI {:.4}..{:.4}), min {:.4}, max {:.4}",
        s.mean_ratio, s.ratio_ci_low, s.ratio_ci_high, s.min_ratio, s.max_ratio
    );
    Ok(())
}

fn alpha_cmd(path: &Path, witness: bool) -> Result<()> {
    let g = io::load(path).with_context(|| format!("reading {}", path.display()))?;
    let cert = file_alpha(path, &g)?;
    println!("alpha {} ({:?})", cert.alpha, cert.method);
    if witness {
        match &cert.witness {
            Some(w) => println!("{}", w.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")),
            None => println!("no witness available"),
        }
    }
    Ok(())
}

fn print_verdicts(verdicts: &[Verdict]) -> bool {
    for v in verdicts {
        println!("{v}");
    }
    let pass = harness::all_pass(verdicts);
    println!("{} of {} checks passed", verdicts.iter().filter(|v| v.pass).count(), verdicts.len());
    pass
}

fn experiment(config: &Path, out: Option<&Path>) -> Result<bool> {
    let cfg = ExperimentConfig::load(config).with_context(|| format!("loading {}", config.display()))?;
    let dir = harness::output_dir(&cfg, out);
    let workers = default_workers();
    let (manifest, results) = harness::run_experiment(&cfg, &dir, workers)?;
    println!(
        "{}: {} trials x {} arms on {} workers in {:.1}s, alpha {} ({:?}), results in {}",
        manifest.name,
        manifest.trials,
        manifest.arms.len(),
        workers,
        manifest.wall_clock_secs,
        manifest.alpha,
        manifest.alpha_method,
        dir.display()
    );
    for arm in &manifest.arms {
        let s = &arm.summary;
        println!(
            "  [{}] mean ratio {:.4} (95% CI {:.4}..{:.4}), min {:.4}, max {:.4}",
            arm.label, s.mean_ratio, s.ratio_ci_low, s.ratio_ci_high, s.min_ratio, s.max_ratio
        );
    }
    Ok(print_verdicts(&results.verdicts))
}

fn report(dir: &Path, config: Option<&Path>) -> Result<bool> {
    let cfg = config.map(ExperimentConfig::load).transpose()?;
    let rep = harness::report(dir, cfg.as_ref())?;
    for (label, s) in &rep.summaries {
        println!(
            "[{label}] {} trials, mean ratio {:.4}, median {:.4}",
            s.trials, s.mean_ratio, s.ratio_quantiles[2]
        );
    }
    Ok(print_verdicts(&rep.verdicts))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Gen { family, params, seed, out } => gen(family, params, *seed, out).map(|_| true),
        Command::Run { graph, schedule, steps, trials, seed, out, watch, alpha } => {
            run(graph, schedule, *steps, *trials, *seed, out, *watch, *alpha).map(|_| true)
        }
        Command::Alpha { graph, witness } => alpha_cmd(graph, *witness).map(|_| true),
        Command::Experiment { config, out } => experiment(config, out.as_deref()),
        Command::Report { dir, config } => report(dir, config.as_deref()),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
