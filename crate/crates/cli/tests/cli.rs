use std::path::Path;
use std::process::Command;

fn annealbench(args: &[&str], cwd: &Path) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_annealbench"))
        .args(args)
        .current_dir(cwd)
        .env("ANNEALBENCH_WORKERS", "2")
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn gen_alpha_run_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let (code, _, err) = annealbench(&["gen", "hard-tree", "k=4", "copies=3", "--out", "t.graph"], d);
    assert_eq!(code, 0, "{err}");
    let meta = std::fs::read_to_string(d.join("t.graph.meta.toml")).unwrap();
    assert!(meta.contains("formula_alpha = 15"), "{meta}");
    assert!(meta.contains("family = \"hard-tree\""));

    let (code, out, _) = annealbench(&["alpha", "t.graph"], d);
    assert_eq!(code, 0);
    assert!(out.starts_with("alpha 15"), "{out}");

    let args = ["run", "--graph", "t.graph", "--schedule", "fixed:8", "--steps", "2000", "--trials", "6", "--seed", "3"];
    let (code, _, err) = annealbench(&[&args[..], &["--out", "a.csv"]].concat(), d);
    assert_eq!(code, 0, "{err}");
    let (code, _, _) = annealbench(&[&args[..], &["--out", "b.csv"]].concat(), d);
    assert_eq!(code, 0);
    let a = std::fs::read_to_string(d.join("a.csv")).unwrap();
    assert_eq!(a, std::fs::read_to_string(d.join("b.csv")).unwrap());
    assert!(a.starts_with("trial_id,seed,steps,max_size,step_of_max,alpha,ratio,root_added,deload_final\n"));
    assert_eq!(a.lines().count(), 7);
}

#[test]
fn alpha_without_sidecar_uses_an_oracle() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c5.graph"), "p is 5 5\ne 0 1\ne 1 2\ne 2 3\ne 3 4\ne 0 4\n").unwrap();
    let (code, out, _) = annealbench(&["alpha", "c5.graph", "--witness"], dir.path());
    assert_eq!(code, 0);
    assert!(out.starts_with("alpha 2 (BruteForce)"), "{out}");
}

#[test]
fn experiment_exit_code_follows_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cfg = r#"
name = "exit"
master_seed = 5
trials = 4
schedules = ["greedy"]

[instance]
family = "star-tree"
k = 5

[run]
algorithm = "ump"
steps = 500

[[checks]]
name = "loose"
metric = "mean_ratio"
min = 0.1
"#;
    std::fs::write(d.join("pass.cfg"), cfg).unwrap();
    std::fs::write(d.join("fail.cfg"), cfg.replace("min = 0.1", "min = 1.1")).unwrap();
    let (code, out, err) = annealbench(&["experiment", "pass.cfg", "--out", "p"], d);
    assert_eq!(code, 0, "{out}{err}");
    assert!(out.contains("PASS loose"));
    for f in ["summary.csv", "verdicts.csv", "manifest.json", "run_00_greedy.csv"] {
        assert!(d.join("p").join(f).exists(), "{f}");
    }
    let (code, out, _) = annealbench(&["experiment", "fail.cfg", "--out", "f"], d);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL loose"));

    let (code, out, _) = annealbench(&["report", "p"], d);
    assert_eq!(code, 0, "{out}");
    let (code, _, _) = annealbench(&["report", "p", "--config", "fail.cfg"], d);
    assert_eq!(code, 1);
}

#[test]
fn bad_input_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, err) = annealbench(&["gen", "star-tree", "k=0", "--out", "x.graph"], dir.path());
    assert_eq!(code, 2);
    assert!(err.contains("error"));
    let (code, _, _) = annealbench(&["experiment", "missing.cfg"], dir.path());
    assert_eq!(code, 2);
}
