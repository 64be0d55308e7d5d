//! Stochastic processes on independent sets: the universal Metropolis
//! process in discrete and continuous time, greedy baselines, the monotone
//! coupled run and the abstract greedy chain.

mod continuous;
mod coupling;
mod discrete;
mod greedy_chain;
mod recorder;
mod schedule;

pub use continuous::{phi_project, run_ct_ump, WeightedCTConfig};
pub use coupling::{run_coupled_monotone, CouplingMode, CouplingReport, CouplingSets, Violation, ViolationKind};
pub use discrete::{
    run_degree_greedy, run_randomized_greedy, run_ump, run_ump_observed, run_ump_poissonized, track_clouds,
    ump_update,
};
pub use greedy_chain::{run_greedy_chain, run_greedy_chain_with_checkpoints, GreedyChainOutcome, GreedyChainState};
pub use recorder::{CloudTracker, RecorderConfig, RegionProbe, Snapshot, TrialRecord};
pub use schedule::{AdaptiveRule, Fugacity, FugacitySchedule, HistoryView, Sequence};
