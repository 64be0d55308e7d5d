//! The two-counter chain `(L_t, R_t)` describing randomized greedy on a
//! random balanced bipartite graph.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GreedyChainState {
    pub l: u64,
    pub r: u64,
    pub t: u64,
    /// `q = 1 - p`.
    pub q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GreedyChainOutcome {
    pub state: GreedyChainState,
    /// `|L_{2n} - R_{2n}|`.
    pub discrepancy: u64,
    /// `M_{2n}`.
    pub martingale: f64,
    /// `(t, M_t)` at the requested checkpoints.
    pub checkpoints: Vec<(u64, f64)>,
}

/// Runs the chain for `2n` steps: each step picks a side with a fair coin;
/// side `L` grows with probability `q^{R}`, side `R` with `q^{L}`.
///
/// `M_t = L_t - R_t - ½ Σ_{s<t} (q^{R_s} - q^{L_s})` is tracked alongside:
/// the conditional drift of `L - R` is `½ (q^R - q^L)`, so subtracting its
/// running sum leaves a martingale.
pub fn run_greedy_chain(n: u64, p: f64, seed: u64) -> Result<GreedyChainOutcome> {
    run_greedy_chain_with_checkpoints(n, p, seed, &[])
}

pub fn run_greedy_chain_with_checkpoints(n: u64, p: f64, seed: u64, checkpoints: &[u64]) -> Result<GreedyChainOutcome> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::InvalidParams(format!("edge probability {p} outside [0, 1)")));
    }
    let q = 1.0 - p;
    let mut rng = rng::trial_rng(seed);
    let mut state = GreedyChainState { l: 0, r: 0, t: 0, q };
    // q^L and q^R, updated multiplicatively.
    let (mut ql, mut qr) = (1.0f64, 1.0f64);
    let mut compensator = 0.0;
    let mut sorted: Vec<u64> = checkpoints.to_vec();
    sorted.sort_unstable();
    let mut next_cp = 0;
    let mut out = Vec::with_capacity(sorted.len());
    let martingale = |s: &GreedyChainState, c: f64| s.l as f64 - s.r as f64 - 0.5 * c;
    while next_cp < sorted.len() && sorted[next_cp] == 0 {
        out.push((0, 0.0));
        next_cp += 1;
    }
    for t in 1..=2 * n {
        compensator += qr - ql;
        let left = rng.random::<bool>();
        let grow = rng.random::<f64>() < if left { qr } else { ql };
        if grow {
            if left {
                state.l += 1;
                ql *= q;
            } else {
                state.r += 1;
                qr *= q;
            }
        }
        state.t = t;
        while next_cp < sorted.len() && sorted[next_cp] == t {
            out.push((t, martingale(&state, compensator)));
            next_cp += 1;
        }
    }
    Ok(GreedyChainOutcome {
        state,
        discrepancy: state.l.abs_diff(state.r),
        martingale: martingale(&state, compensator),
        checkpoints: out,
    })
}
