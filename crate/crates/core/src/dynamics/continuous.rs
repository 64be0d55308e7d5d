//! Continuous-time weighted process and its link to the clique blowup.

use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::{Distribution, Exp1};

use super::discrete::{apply, check_state, Change};
use super::recorder::{Recorder, RecorderConfig, TrialRecord};
use super::schedule::{Fugacity, FugacitySchedule, HistoryView};
use crate::error::{Error, Result};
use crate::graph::{Graph, IndependentSetState, Side};
use crate::instance::CliqueMeta;
use crate::rng::{self, unit};

/// Clock rates `ρ(v)` and fugacity multipliers of a continuous-time run.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedCTConfig {
    pub rates: Vec<f64>,
    pub multipliers: Vec<f64>,
    /// Continuous horizon `T`; may be infinite when `max_events` is set.
    pub horizon: f64,
    pub max_events: Option<u64>,
}

impl WeightedCTConfig {
    pub fn uniform(num_vertices: usize, horizon: f64) -> Self {
        WeightedCTConfig {
            rates: vec![1.0; num_vertices],
            multipliers: vec![1.0; num_vertices],
            horizon,
            max_events: None,
        }
    }

    /// Rates and multipliers under which the process on `base` projects
    /// the discrete process on its `ell`-clique blowup: `ρ = ℓ` and
    /// multiplier `ℓ` on `L`, both 1 on `R`.
    pub fn clique_blowup(base: &Graph, ell: usize, horizon: f64) -> Result<Self> {
        base.check_labeled_bipartition()?;
        let ell = ell as f64;
        let per_vertex: Vec<f64> = base
            .sides()
            .iter()
            .map(|s| if *s == Some(Side::L) { ell } else { 1.0 })
            .collect();
        Ok(WeightedCTConfig { rates: per_vertex.clone(), multipliers: per_vertex, horizon, max_events: None })
    }

    pub fn with_max_events(mut self, max_events: u64) -> Self {
        self.max_events = Some(max_events);
        self
    }

    pub fn total_rate(&self) -> f64 {
        self.rates.iter().sum()
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.rates.len() != n || self.multipliers.len() != n {
            return Err(Error::InvalidParams(format!(
                "expected {n} rates and multipliers, got {} and {}",
                self.rates.len(),
                self.multipliers.len()
            )));
        }
        if let Some((v, &r)) = self.rates.iter().enumerate().find(|(_, r)| !(**r > 0.0 && r.is_finite())) {
            return Err(Error::InvalidRate(r, v));
        }
        if let Some(&m) = self.multipliers.iter().find(|m| !(**m >= 1.0)) {
            return Err(Error::InvalidParams(format!("fugacity multiplier {m} below 1")));
        }
        if !(self.horizon >= 0.0) || (self.horizon.is_infinite() && self.max_events.is_none()) {
            return Err(Error::InvalidParams(format!(
                "horizon {} needs to be finite or capped by max_events",
                self.horizon
            )));
        }
        Ok(())
    }
}

/// Next-event simulation: inter-event times are `Exp(Λ)` with `Λ = Σ ρ(v)`,
/// the ringing vertex is drawn with probability `ρ(v)/Λ`, and the update
/// uses `multiplier(v) · λ_{t'}` where `t'` counts rings so far, the
/// current one included. Snapshots are taken on an even time grid (or an
/// event grid when the horizon is infinite) and at `time_checkpoints`.
pub fn run_ct_ump(
    g: &Graph,
    cfg: &WeightedCTConfig,
    sched: &FugacitySchedule,
    seed: u64,
    rec_cfg: &RecorderConfig,
) -> Result<TrialRecord> {
    let n = g.num_vertices();
    cfg.validate(n)?;
    if n == 0 {
        return Err(Error::InvalidParams("graph has no vertices".into()));
    }
    let total = cfg.total_rate();
    let pick = WeightedAliasIndex::new(cfg.rates.clone()).map_err(|e| Error::InvalidParams(e.to_string()))?;
    let max_events = cfg.max_events.unwrap_or(u64::MAX);

    let mut snap_times: Vec<f64> = rec_cfg
        .time_checkpoints
        .iter()
        .copied()
        .filter(|&c| c >= 0.0 && c <= cfg.horizon)
        .collect();
    let event_grid = if cfg.horizon.is_finite() {
        let k = rec_cfg.snapshots;
        snap_times.extend((1..=k).map(|i| cfg.horizon * i as f64 / k as f64));
        0
    } else {
        max_events
    };
    snap_times.sort_by(f64::total_cmp);
    snap_times.dedup();

    let mut rng = rng::trial_rng(seed);
    let mut state = IndependentSetState::empty(n);
    let mut rec = Recorder::new(rec_cfg, g, &state, seed, event_grid, Some(0.0));
    let mut cursor = sched.cursor();
    let mut next_snap = 0;
    let mut time = 0.0;
    let mut t = 0u64;
    while t < max_events {
        let dt: f64 = Exp1.sample(&mut rng);
        let at = time + dt / total;
        while next_snap < snap_times.len() && snap_times[next_snap] < at {
            rec.snapshot(&state, t, Some(snap_times[next_snap]));
            next_snap += 1;
        }
        if at > cfg.horizon {
            time = cfg.horizon;
            break;
        }
        time = at;
        t += 1;
        let v = pick.sample(&mut rng);
        let zeta = unit(&mut rng);
        let lambda = cursor.next(&HistoryView {
            t,
            size: state.size(),
            max_size: rec.max_size(),
            last_improvement: rec.step_of_max(),
            occupied: state.occupied(),
        })?;
        let effective = Fugacity::new(cfg.multipliers[v] * lambda.value())?;
        rec.on_draw(v);
        match apply(&mut state, g, v, zeta, effective) {
            Change::Added => rec.on_insert(v, &state, t, Some(time)),
            Change::Removed => rec.on_remove(v),
            Change::Unchanged => {}
        }
        state.tick();
        if t & ((1 << 20) - 1) == 0 {
            check_state(&state, g);
        }
        if rec.end_step(&state, t, Some(time)) {
            break;
        }
    }
    Ok(rec.finish(&state, t, Some(time)))
}

/// Maps an independent set of the clique blowup to the base graph: the
/// occupant of clique `K_u` becomes `u`, `R` vertices map to themselves.
pub fn phi_project(blowup: &Graph, meta: &CliqueMeta, set: &[usize]) -> Result<Vec<usize>> {
    if set.iter().any(|&v| v >= blowup.num_vertices()) {
        return Err(Error::InvalidParams("vertex outside the blowup".into()));
    }
    if let Some((u, v)) = crate::graph::first_covered_edge(blowup, set) {
        return Err(Error::NotIndependent(u, v));
    }
    let mut out: Vec<usize> = set.iter().map(|&v| meta.base_vertex(v)).collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}
