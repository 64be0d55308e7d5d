//! Discrete-time process and the greedy baselines.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::recorder::{Recorder, RecorderConfig, TrialRecord};
use super::schedule::{Fugacity, FugacitySchedule, HistoryView};
use crate::error::{Error, Result};
use crate::graph::{Graph, IndependentSetState};
use crate::instance::CloudMeta;
use crate::rng::{self, streams, unit};

#[cfg(debug_assertions)]
const CHECK_MASK: u64 = (1 << 16) - 1;
#[cfg(not(debug_assertions))]
const CHECK_MASK: u64 = (1 << 22) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Change {
    Added,
    Removed,
    Unchanged,
}

#[inline]
pub(crate) fn apply(state: &mut IndependentSetState, g: &Graph, v: usize, zeta: f64, lambda: Fugacity) -> Change {
    if state.contains(v) {
        if lambda.accepts_removal(zeta) {
            state.remove(v);
            Change::Removed
        } else {
            Change::Unchanged
        }
    } else if state.is_free(g, v) {
        state.insert(v);
        Change::Added
    } else {
        Change::Unchanged
    }
}

/// One update at vertex `v`: an unoccupied `v` is added iff none of its
/// neighbours is occupied; an occupied `v` is removed iff `zeta <= 1/λ`.
/// Returns whether the state changed.
pub fn ump_update(state: &mut IndependentSetState, g: &Graph, v: usize, zeta: f64, lambda: f64) -> Result<bool> {
    let lambda = Fugacity::new(lambda)?;
    if v >= g.num_vertices() {
        return Err(Error::InvalidParams(format!("vertex {v} out of range")));
    }
    Ok(apply(state, g, v, zeta, lambda) != Change::Unchanged)
}

pub(crate) fn check_state(state: &IndependentSetState, g: &Graph) {
    assert!(state.is_valid(g), "occupancy is not an independent set");
}

fn simulate<F>(
    g: &Graph,
    sched: &FugacitySchedule,
    steps: u64,
    seed: u64,
    cfg: &RecorderConfig,
    mut observe: F,
) -> Result<TrialRecord>
where
    F: FnMut(&IndependentSetState),
{
    let n = g.num_vertices();
    if n == 0 {
        return Err(Error::InvalidParams("graph has no vertices".into()));
    }
    let mut rng = rng::trial_rng(seed);
    let mut state = IndependentSetState::empty(n);
    let mut rec = Recorder::new(cfg, g, &state, seed, steps, None);
    let mut cursor = sched.cursor();
    let mut done = 0;
    for t in 1..=steps {
        let v = rng.random_range(0..n);
        let zeta = unit(&mut rng);
        let lambda = cursor.next(&HistoryView {
            t,
            size: state.size(),
            max_size: rec.max_size(),
            last_improvement: rec.step_of_max(),
            occupied: state.occupied(),
        })?;
        rec.on_draw(v);
        match apply(&mut state, g, v, zeta, lambda) {
            Change::Added => rec.on_insert(v, &state, t, None),
            Change::Removed => rec.on_remove(v),
            Change::Unchanged => {}
        }
        state.tick();
        observe(&state);
        done = t;
        if t & CHECK_MASK == 0 {
            check_state(&state, g);
        }
        if rec.end_step(&state, t, None) {
            break;
        }
    }
    Ok(rec.finish(&state, done, None))
}

/// Runs the process from the empty set for `steps` steps. Each step draws
/// a uniform vertex, then a uniform `ζ`, then applies [`ump_update`] with
/// `λ_t`. The record's `best_set` (when kept) is the largest state seen,
/// earliest on ties.
pub fn run_ump(
    g: &Graph,
    sched: &FugacitySchedule,
    steps: u64,
    seed: u64,
    cfg: &RecorderConfig,
) -> Result<TrialRecord> {
    run_ump_observed(g, sched, steps, seed, cfg, |_| {})
}

/// [`run_ump`] with a callback invoked after every step.
pub fn run_ump_observed<F>(
    g: &Graph,
    sched: &FugacitySchedule,
    steps: u64,
    seed: u64,
    cfg: &RecorderConfig,
    observe: F,
) -> Result<TrialRecord>
where
    F: FnMut(&IndependentSetState),
{
    if steps == 0 {
        return Err(Error::InvalidParams("step count must be at least 1".into()));
    }
    simulate(g, sched, steps, seed, cfg, observe)
}

/// Runs for `T' ~ Poisson(mean)` steps (possibly zero). The length is drawn
/// from its own stream, so the step draws match [`run_ump`] with the same
/// seed.
pub fn run_ump_poissonized(
    g: &Graph,
    sched: &FugacitySchedule,
    mean: f64,
    seed: u64,
    cfg: &RecorderConfig,
) -> Result<TrialRecord> {
    let steps = poisson_length(mean, seed)?;
    simulate(g, sched, steps, seed, cfg, |_| {})
}

pub(crate) fn poisson_length(mean: f64, seed: u64) -> Result<u64> {
    if mean == 0.0 {
        return Ok(0);
    }
    let dist = Poisson::new(mean).map_err(|_| Error::InvalidParams(format!("bad Poisson mean {mean}")))?;
    Ok(dist.sample(&mut rng::stream(seed, streams::TRIAL_LENGTH)) as u64)
}

/// [`run_ump`] on a cloud blowup with per-cloud load tracking; the record
/// carries `deload(t)` in its snapshots and `deload_final`.
pub fn track_clouds(
    g: &Graph,
    meta: &CloudMeta,
    sched: &FugacitySchedule,
    steps: u64,
    seed: u64,
    cfg: &RecorderConfig,
) -> Result<TrialRecord> {
    if meta.num_clouds() * meta.cloud_size != g.num_vertices() {
        return Err(Error::InvalidParams("cloud layout does not cover the graph".into()));
    }
    let cfg = RecorderConfig { clouds: Some(*meta), ..cfg.clone() };
    run_ump(g, sched, steps, seed, &cfg)
}

/// Randomized greedy: scan a uniformly random permutation once, adding
/// every vertex with no neighbour already taken. Same law as the `λ = ∞`
/// process run to saturation, since re-drawing a decided vertex is a no-op.
pub fn run_randomized_greedy(g: &Graph, seed: u64) -> (Vec<usize>, TrialRecord) {
    let n = g.num_vertices();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng::trial_rng(seed));
    let cfg = RecorderConfig::minimal();
    let mut state = IndependentSetState::empty(n);
    let mut rec = Recorder::new(&cfg, g, &state, seed, 0, None);
    for (t, &v) in order.iter().enumerate() {
        rec.on_draw(v);
        if state.is_free(g, v) {
            state.insert(v);
            rec.on_insert(v, &state, t as u64 + 1, None);
        }
    }
    let record = rec.finish(&state, n as u64, None);
    (state.members(), record)
}

/// Minimum-degree greedy: repeatedly take a vertex of minimum residual
/// degree (lowest index on ties) and delete its closed neighbourhood.
pub fn run_degree_greedy(g: &Graph) -> Vec<usize> {
    let n = g.num_vertices();
    let mut degree = g.degrees();
    let mut alive = vec![true; n];
    let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|v| (degree[v], v)).collect();
    let mut out = Vec::new();
    while let Some((_, v)) = queue.pop_first() {
        out.push(v);
        alive[v] = false;
        for &u in g.neighbors(v) {
            let u = u as usize;
            if !alive[u] {
                continue;
            }
            alive[u] = false;
            queue.remove(&(degree[u], u));
            for &w in g.neighbors(u) {
                let w = w as usize;
                if alive[w] {
                    queue.remove(&(degree[w], w));
                    degree[w] -= 1;
                    queue.insert((degree[w], w));
                }
            }
        }
    }
    out.sort_unstable();
    out
}
