//! Closed-form oracles and summary statistics.

mod burn_in;
mod oracles;
mod stats;

pub use burn_in::{burn_in_stats, BurnInReport};
pub use oracles::{
    bipartite_is_bound, birth_death_stationary, branch_chain_distribution, branch_chain_prob_a, ruin_probability,
    BranchChainSpec,
};
pub use stats::{
    mean_ci, nearest_rank, proportion_ci, summarize, summarize_observations, Observation, SummaryStats,
    ThresholdStat, QUANTILE_LEVELS,
};

#[cfg(test)]
mod tests;
