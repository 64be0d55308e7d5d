use super::*;
use crate::dynamics::FugacitySchedule;
use crate::error::Error;

const SMALL: &str = r#"
name = "small"
master_seed = 11
trials = 8
schedules = ["fixed:2", "greedy"]

[instance]
family = "star-tree"
k = 6

[run]
algorithm = "ump"
steps = 400
watch = "root"

[run.probe]
at_step = 50
region = "star-a"

[[checks]]
name = "ratio"
metric = "mean_ratio"
min = 0.3

[[checks]]
name = "reach"
schedule = "greedy"
metric = "reach_frac:4"
min = 0.5

[[checks]]
name = "probe"
metric = "probe_frac:1"
min = 0.0
"#;

fn small() -> ExperimentConfig {
    ExperimentConfig::from_toml(SMALL).unwrap()
}

fn check(min: Option<f64>, max: Option<f64>) -> CheckSpec {
    CheckSpec { name: "c".into(), schedule: None, metric: "mean_ratio".into(), min, max }
}

#[test]
fn judge_examples() {
    let pass = judge(&check(Some(0.95), None), "s", 0.99);
    assert!(pass.pass);
    assert!((pass.margin - 0.04).abs() < 1e-12);

    let fail = judge(&check(Some(0.95), None), "s", 0.80);
    assert!(!fail.pass);
    assert!((fail.margin + 0.15).abs() < 1e-12);
    assert!(fail.to_string().starts_with("FAIL"));

    let band = judge(&check(Some(0.1), Some(0.2)), "s", 0.19);
    assert!(band.pass);
    assert!((band.margin - 0.01).abs() < 1e-12);
}

#[test]
fn verdict_csv_round_trip() {
    let verdicts = vec![
        judge(&check(Some(0.95), None), "fixed:2", 0.99),
        judge(&check(None, Some(0.05)), "list:1,2.5,inf", 0.1 + 0.2),
        judge(&check(Some(1.0 / 3.0), Some(0.7)), "-", 2.0 / 3.0),
    ];
    let mut buf = Vec::new();
    write_rows(&verdicts, &mut buf).unwrap();
    let back: Vec<Verdict> = read_rows(buf.as_slice()).unwrap();
    assert_eq!(back, verdicts);
    let mut again = Vec::new();
    write_rows(&back, &mut again).unwrap();
    assert_eq!(again, buf);
}

#[test]
fn run_row_columns_and_empty_options() {
    let rows = vec![
        RunRow {
            trial_id: 0,
            seed: 5,
            steps: 10,
            max_size: 3,
            step_of_max: 7,
            alpha: 4,
            ratio: 0.75,
            root_added: None,
            deload_final: None,
        },
        RunRow {
            trial_id: 1,
            seed: 6,
            steps: 10,
            max_size: 4,
            step_of_max: 9,
            alpha: 4,
            ratio: 1.0,
            root_added: Some(true),
            deload_final: Some(2),
        },
    ];
    let mut buf = Vec::new();
    write_rows(&rows, &mut buf).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "trial_id,seed,steps,max_size,step_of_max,alpha,ratio,root_added,deload_final"
    );
    assert_eq!(lines.next().unwrap(), "0,5,10,3,7,4,0.75,,");
    assert_eq!(lines.next().unwrap(), "1,6,10,4,9,4,1.0,true,2");
    let back: Vec<RunRow> = read_rows(buf.as_slice()).unwrap();
    assert_eq!(back, rows);
}

#[test]
fn config_round_trips_through_toml() {
    let cfg = small();
    let again = ExperimentConfig::from_toml(&cfg.to_toml()).unwrap();
    assert_eq!(again, cfg);
    assert_eq!(again.hash(), cfg.hash());
}

#[test]
fn hash_tracks_semantic_fields_only() {
    let base = small();
    let mut moved = base.clone();
    moved.output_dir = Some("elsewhere".into());
    assert_eq!(moved.hash(), base.hash());

    let mut seed = base.clone();
    seed.master_seed += 1;
    let mut trials = base.clone();
    trials.trials += 1;
    let mut sched = base.clone();
    sched.schedules[0] = FugacitySchedule::explicit(vec![2.0, 3.0]).unwrap();
    let mut inst = base.clone();
    inst.instance = InstanceSpec::StarTree { k: 7 };
    let mut thresh = base.clone();
    thresh.checks[0].min = Some(0.31);
    let hashes: Vec<String> = [&base, &seed, &trials, &sched, &inst, &thresh].iter().map(|c| c.hash()).collect();
    for i in 0..hashes.len() {
        for j in i + 1..hashes.len() {
            assert_ne!(hashes[i], hashes[j], "configs {i} and {j} collide");
        }
    }
}

#[test]
fn invalid_configs_are_rejected() {
    let bad = [
        SMALL.replace("trials = 8", "trials = 0"),
        SMALL.replace("family = \"star-tree\"", "family = \"no-such-family\""),
        SMALL.replace("schedules = [\"fixed:2\", \"greedy\"]", "schedules = [\"fixed:0.5\"]"),
        SMALL.replace("schedule = \"greedy\"", "schedule = \"fixed:9\""),
        SMALL.replace("metric = \"mean_ratio\"", "metric = \"median_vibes\""),
        SMALL.replace("steps = 400", "steps = 0"),
        SMALL.replace("region = \"star-a\"", "region = \"moon\""),
        format!("{SMALL}\nunexpected = 1\n"),
    ];
    for text in bad {
        assert!(matches!(ExperimentConfig::from_toml(&text), Err(Error::Config(_))), "{text}");
    }
}

#[test]
fn required_thresholds_from_checks() {
    let mut cfg = small();
    cfg.checks.push(CheckSpec {
        name: "below".into(),
        schedule: None,
        metric: "below_frac:2".into(),
        min: None,
        max: Some(0.1),
    });
    let (sizes, probes) = required_thresholds(&cfg.checks);
    assert_eq!(sizes, vec![4, 3]);
    assert_eq!(probes, vec![1]);
}

#[test]
fn missing_summary_is_incomplete() {
    let cfg = small();
    let results = execute(&cfg, 1).unwrap();
    let only_first = vec![results.summaries()[0].clone()];
    assert!(matches!(verdict(&cfg, &only_first), Err(Error::IncompleteRun(_))));
}

#[test]
fn execute_basics() {
    let cfg = small();
    let results = execute(&cfg, 2).unwrap();
    assert_eq!(results.alpha.alpha, 7);
    assert_eq!(results.arms.len(), 2);
    for arm in &results.arms {
        assert_eq!(arm.rows.len(), 8);
        assert!(arm.rows.iter().enumerate().all(|(i, r)| r.trial_id as usize == i));
        assert!(arm.rows.iter().all(|r| r.root_added.is_some() && r.max_size <= 7));
        assert!(arm.records.iter().all(|r| r.probe_count.is_some()));
    }
    // Seeds differ across arms and trials.
    let mut seeds: Vec<u64> = results.arms.iter().flat_map(|a| a.rows.iter().map(|r| r.seed)).collect();
    seeds.sort_unstable();
    seeds.dedup();
    assert_eq!(seeds.len(), 16);
    assert_eq!(results.verdicts.len(), 2 + 1 + 2);
}

#[test]
fn worker_count_does_not_change_output() {
    let cfg = small();
    let one = tempfile::tempdir().unwrap();
    let many = tempfile::tempdir().unwrap();
    let (m1, _) = run_experiment(&cfg, one.path(), 1).unwrap();
    let (m8, _) = run_experiment(&cfg, many.path(), 8).unwrap();
    assert_eq!(m1.config_hash, m8.config_hash);
    for file in m1.files.iter().filter(|f| f.ends_with(".csv")) {
        let a = std::fs::read(one.path().join(file)).unwrap();
        let b = std::fs::read(many.path().join(file)).unwrap();
        assert_eq!(a, b, "{file} differs");
    }
}

#[test]
fn report_reproduces_verdicts() {
    let cfg = small();
    let dir = tempfile::tempdir().unwrap();
    let (_, results) = run_experiment(&cfg, dir.path(), 2).unwrap();
    let summary_before = std::fs::read(dir.path().join(SUMMARY_FILE)).unwrap();
    let rep = report(dir.path(), None).unwrap();
    assert_eq!(rep.verdicts, results.verdicts);
    assert_eq!(std::fs::read(dir.path().join(SUMMARY_FILE)).unwrap(), summary_before);

    std::fs::remove_file(dir.path().join(run_file_name(1, "greedy"))).unwrap();
    assert!(matches!(report(dir.path(), None), Err(Error::IncompleteRun(_))));
}

#[test]
fn greedy_algorithms_run_without_schedules() {
    let text = r#"
name = "greedy"
master_seed = 3
trials = 5
schedules = []

[instance]
family = "appendix-anchor"
n = 20

[run]
algorithm = "degree-greedy"

[[checks]]
name = "trap"
schedule = "-"
metric = "max_ratio"
max = 0.1
"#;
    let cfg = ExperimentConfig::from_toml(text).unwrap();
    let results = execute(&cfg, 1).unwrap();
    assert_eq!(results.arms[0].label, "-");
    assert!(results.arms[0].rows.iter().all(|r| r.max_size == 2 && r.alpha == 20));
    assert!(results.all_pass());
}

#[test]
fn implicit_clique_blowup_uses_base_alpha() {
    let text = r#"
name = "ct"
master_seed = 9
trials = 2
schedules = ["fixed:4"]

[instance]
family = "clique-blowup"
n = 6
k = 2
ell = 5
p = 0.3

[run]
algorithm = "ct"
horizon = 2.0
"#;
    let cfg = ExperimentConfig::from_toml(text).unwrap();
    let inst = prepare_instance(&cfg).unwrap();
    assert_eq!(inst.graph.num_vertices(), 18);
    let ct = inst.ct.as_ref().unwrap();
    assert_eq!(ct.total_rate(), 6.0 * 5.0 + 12.0);
    assert!(inst.alpha.alpha >= 12);
    let results = execute(&cfg, 1).unwrap();
    assert!(results.arms[0].rows.iter().all(|r| r.max_size <= r.alpha));

    let ump = text.replace("algorithm = \"ct\"", "algorithm = \"ump\"\nsteps = 10");
    assert!(ExperimentConfig::from_toml(&ump).is_err());
}

#[test]
fn compute_alpha_picks_an_exact_method() {
    use crate::graph::{AlphaMethod, Graph};
    let c5 = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
    let a = compute_alpha(&c5).unwrap();
    assert_eq!((a.alpha, a.method), (2, AlphaMethod::BruteForce));
    let c6 = Graph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
    let a = compute_alpha(&c6).unwrap();
    assert_eq!((a.alpha, a.method), (3, AlphaMethod::BipartiteMatching));
    let path = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
    assert_eq!(compute_alpha(&path).unwrap().method, AlphaMethod::TreeDp);
}

#[test]
fn generate_writes_family_metadata() {
    let spec = InstanceSpec::CliqueBlowup { n: 5, k: 2, ell: 3, p: 0.5, seed: None, explicit: false };
    let (g, meta) = generate(&spec, 42).unwrap();
    assert_eq!(g.num_vertices(), 5 * 3 + 10);
    assert_eq!(meta.seed, 42);
    assert_eq!(meta.parameters["family"].as_str(), Some("clique-blowup"));
    assert!(!meta.parameters.contains_key("seed"));
    assert!(!meta.warnings.is_empty());

    let (tree, meta) = generate(&InstanceSpec::HardTree { k: 3, copies: 2, apex: true }, 0).unwrap();
    assert_eq!(meta.formula_alpha, Some(8));
    assert_eq!(meta.num_vertices, tree.num_vertices());
}
