//! Configuration-driven experiments: instances, parallel trials, CSV
//! output and verdicts.

mod config;
mod csvio;
mod report;
mod run;
mod verdict;

pub use config::{
    parse_metric, Algorithm, CheckSpec, ExperimentConfig, InstanceSpec, Metric, ProbeSpec, RunSpec, Watch,
};
pub use csvio::{read_rows, read_run_csv, write_rows, write_run_csv, RunRow, SummaryRow};
pub use report::{report, Report};
pub use run::{
    arm_labels, compute_alpha, default_workers, execute, generate, output_dir, prepare_instance, recorder_config,
    run_experiment, run_file_name, run_trial, run_trials, write_summary_csv, write_verdict_csv, ArmManifest,
    ArmResult, ExperimentManifest, ExperimentResults, PreparedInstance, MANIFEST_FILE, SUMMARY_FILE,
    TOOL_VERSION, VERDICT_FILE,
};
pub use verdict::{all_pass, judge, metric_value, required_thresholds, verdict, Verdict};

#[cfg(test)]
mod tests;
