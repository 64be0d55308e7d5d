//! Stochastic local search laboratory for maximum independent set.
//!
//! The crate is organised around five layers:
//!
//! * [`graph`]: compressed-row graphs, independent-set state and exact
//!   independence-number oracles (brute force, König duality, tree DP).
//! * [`instance`]: seeded generators for the hard-instance families
//!   (clique blowups, cloud blowups, star trees, appendix separations).
//! * [`dynamics`]: the universal Metropolis process in discrete and
//!   continuous time, greedy variants, the abstract greedy chain and the
//!   monotone coupled run.
//! * [`analysis`]: closed-form oracles and summary statistics.
//! * [`harness`]: configuration-driven experiments, CSV persistence and
//!   verdicts.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod graph;
pub mod harness;
pub mod instance;
pub mod rng;

pub use dynamics::{
    run_ct_ump, run_degree_greedy, run_randomized_greedy, run_ump, ump_update, Fugacity,
    FugacitySchedule, RecorderConfig, TrialRecord, WeightedCTConfig,
};
pub use error::{Error, Result};
pub use graph::{
    alpha_bipartite, alpha_bruteforce, alpha_tree, build_graph, is_independent, AlphaCertificate,
    AlphaMethod, Graph, GraphKind, IndependentSetState, Side,
};
