use std::path::PathBuf;

use annealbench_core::analysis::summarize;
use annealbench_core::graph::io;
use annealbench_core::harness::{
    execute, generate, read_run_csv, report, run_experiment, ExperimentConfig, InstanceSpec, RunRow, MANIFEST_FILE,
};
use annealbench_core::instance::{gen_clique_blowup, BlowupParams};
use annealbench_core::{alpha_bipartite, run_ump, FugacitySchedule, RecorderConfig};

fn smoke() -> ExperimentConfig {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs/smoke.cfg");
    ExperimentConfig::load(&path).unwrap()
}

#[test]
fn bundled_configs_parse() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "cfg") {
            let cfg = ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            assert_eq!(ExperimentConfig::from_toml(&cfg.to_toml()).unwrap().hash(), cfg.hash());
            count += 1;
        }
    }
    assert!(count >= 8);
}

#[test]
fn generated_file_reloads_bit_exact_and_keeps_alpha() {
    let params = BlowupParams::new(6, 2, 4, 0.3, 8).unwrap();
    let blow = gen_clique_blowup(&params).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("base.graph");
    io::save(&blow.base, &path).unwrap();
    let back = io::load(&path).unwrap();
    assert_eq!(io::to_text(&back), io::to_text(&blow.base));
    assert_eq!(alpha_bipartite(&back).unwrap().alpha, alpha_bipartite(&blow.base).unwrap().alpha);

    let spec = InstanceSpec::File { path: path.clone() };
    let (g, meta) = generate(&spec, 0).unwrap();
    assert_eq!(g.num_edges(), blow.base.num_edges());
    assert_eq!(meta.num_vertices, 18);
}

#[test]
fn trials_replay_from_their_seed() {
    let cfg = smoke();
    let results = execute(&cfg, 1).unwrap();
    let inst = annealbench_core::harness::prepare_instance(&cfg).unwrap();
    let rec = annealbench_core::harness::recorder_config(&cfg, &inst);
    for (arm, sched) in results.arms.iter().zip(&cfg.schedules) {
        let row = &arm.rows[5];
        let again = run_ump(&inst.graph, sched, cfg.run.steps.unwrap(), row.seed, &rec).unwrap();
        assert_eq!(RunRow::from_record(5, &again, row.alpha), *row);
    }
}

#[test]
fn experiment_files_are_independent_of_worker_count() {
    let mut cfg = smoke();
    cfg.trials = 8;
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let (ma, _) = run_experiment(&cfg, a.path(), 1).unwrap();
    let (mb, _) = run_experiment(&cfg, b.path(), 8).unwrap();
    assert_eq!(ma.config_hash, mb.config_hash);
    assert_eq!(ma.arms, mb.arms);
    assert!(ma.files.iter().all(|f| a.path().join(f).exists()));
    for f in ma.files.iter().filter(|f| f.ends_with(".csv")) {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    let rows = read_run_csv(&a.path().join(&ma.arms[0].file)).unwrap();
    assert_eq!(rows.len(), 8);
    let rep = report(a.path(), None).unwrap();
    assert_eq!(rep.summaries.len(), cfg.schedules.len());
    assert!(a.path().join(MANIFEST_FILE).exists());
}

#[test]
fn record_summary_matches_row_summary() {
    let g = annealbench_core::instance::gen_star_tree(10).unwrap();
    let sched = FugacitySchedule::parse("geom:1:2:100:32").unwrap();
    let records: Vec<_> =
        (0..30).map(|s| run_ump(&g, &sched, 5000, s, &RecorderConfig::minimal()).unwrap()).collect();
    let s = summarize(&records, 11, &[10, 11]).unwrap();
    assert_eq!(s.trials, 30);
    assert!(s.max_ratio <= 1.0 && s.min_ratio > 0.5);
    assert!(s.threshold(10).unwrap().frequency >= s.threshold(11).unwrap().frequency);
}
