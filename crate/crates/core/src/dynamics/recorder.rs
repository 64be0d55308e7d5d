//! Per-trial bookkeeping shared by the discrete and continuous runs.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::graph::{Graph, IndependentSetState, Side};
use crate::instance::CloudMeta;

/// Counts `occupied` vertices from a fixed region at a fixed step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionProbe {
    pub at_step: u64,
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct RecorderConfig {
    /// Sizes whose first hitting step is recorded.
    pub thresholds: Vec<usize>,
    /// Number of evenly spaced snapshots over the run, 0 for none. A final
    /// snapshot is always taken.
    pub snapshots: u64,
    /// Extra snapshot times for continuous-time runs.
    pub time_checkpoints: Vec<f64>,
    /// Sets `root_added` once this vertex is ever added.
    pub watch_vertex: Option<usize>,
    /// Stop the run as soon as `|I_t|` reaches this size.
    pub stop_at_size: Option<usize>,
    pub probe: Option<RegionProbe>,
    pub clouds: Option<CloudMeta>,
    /// Keep a copy of the argmax state.
    pub keep_best: bool,
    /// Keep a copy of the last state.
    pub keep_final: bool,
}

impl Default for RecorderConfig {
    fn default() -> Self {
        RecorderConfig {
            thresholds: Vec::new(),
            snapshots: 1000,
            time_checkpoints: Vec::new(),
            watch_vertex: None,
            stop_at_size: None,
            probe: None,
            clouds: None,
            keep_best: false,
            keep_final: false,
        }
    }
}

impl RecorderConfig {
    /// No snapshots and nothing kept: the cheapest recorder.
    pub fn minimal() -> Self {
        RecorderConfig { snapshots: 0, ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub step: u64,
    pub time: Option<f64>,
    pub size: usize,
    pub l_occ: usize,
    pub r_occ: usize,
    /// `R` vertices drawn at least once so far.
    pub r_touched: usize,
    pub deload: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub steps: u64,
    /// Continuous time reached, for continuous-time runs.
    pub time: Option<f64>,
    pub max_size: usize,
    pub step_of_max: u64,
    pub time_of_max: Option<f64>,
    /// `(threshold, first step with |I_t| >= threshold)`, thresholds ascending.
    pub hitting_times: Vec<(usize, Option<u64>)>,
    pub snapshots: Vec<Snapshot>,
    pub root_added: Option<bool>,
    pub deload_final: Option<usize>,
    pub probe_count: Option<usize>,
    pub final_size: usize,
    pub best_set: Option<Vec<usize>>,
    pub final_set: Option<Vec<usize>>,
}

impl TrialRecord {
    pub fn hitting_time(&self, threshold: usize) -> Option<u64> {
        self.hitting_times.iter().find(|(s, _)| *s == threshold).and_then(|(_, t)| *t)
    }

    pub fn reached(&self, size: usize) -> bool {
        self.max_size >= size
    }
}

/// Incremental per-cloud loads and the deload count: the number of clouds
/// that were occupied at some point and later emptied.
#[derive(Debug, Clone)]
pub struct CloudTracker {
    meta: CloudMeta,
    load: Vec<u32>,
    deloaded: FixedBitSet,
    count: usize,
}

impl CloudTracker {
    pub fn new(meta: CloudMeta) -> Self {
        let clouds = meta.num_clouds();
        CloudTracker { meta, load: vec![0; clouds], deloaded: FixedBitSet::with_capacity(clouds), count: 0 }
    }

    #[inline]
    pub fn on_insert(&mut self, v: usize) {
        self.load[self.meta.cloud_of(v)] += 1;
    }

    #[inline]
    pub fn on_remove(&mut self, v: usize) {
        let c = self.meta.cloud_of(v);
        self.load[c] -= 1;
        if self.load[c] == 0 && !self.deloaded.put(c) {
            self.count += 1;
        }
    }

    pub fn load(&self, cloud: usize) -> u32 {
        self.load[cloud]
    }

    pub fn is_deloaded(&self, cloud: usize) -> bool {
        self.deloaded.contains(cloud)
    }

    pub fn deload(&self) -> usize {
        self.count
    }
}

pub(crate) struct Recorder<'a> {
    cfg: &'a RecorderConfig,
    sides: Option<&'a [Option<Side>]>,
    seed: u64,
    l_occ: usize,
    r_occ: usize,
    touched: FixedBitSet,
    r_touched: usize,
    thresholds: Vec<usize>,
    hits: Vec<Option<u64>>,
    next_threshold: usize,
    snapshots: Vec<Snapshot>,
    snap_every: u64,
    max_size: usize,
    step_of_max: u64,
    time_of_max: Option<f64>,
    best: Option<FixedBitSet>,
    root_added: bool,
    clouds: Option<CloudTracker>,
    probe_count: Option<usize>,
}

impl<'a> Recorder<'a> {
    /// `horizon_steps` sizes the snapshot interval; pass 0 when snapshots
    /// are driven by continuous time instead.
    pub(crate) fn new(
        cfg: &'a RecorderConfig,
        g: &'a Graph,
        state: &IndependentSetState,
        seed: u64,
        horizon_steps: u64,
        time: Option<f64>,
    ) -> Self {
        let sides = g.has_sides().then(|| g.sides());
        let mut thresholds = cfg.thresholds.clone();
        thresholds.sort_unstable();
        thresholds.dedup();
        let snap_every = if cfg.snapshots == 0 || horizon_steps == 0 {
            0
        } else {
            horizon_steps.div_ceil(cfg.snapshots)
        };
        let mut rec = Recorder {
            cfg,
            sides,
            seed,
            l_occ: 0,
            r_occ: 0,
            touched: FixedBitSet::with_capacity(if sides.is_some() { g.num_vertices() } else { 0 }),
            r_touched: 0,
            hits: vec![None; thresholds.len()],
            thresholds,
            next_threshold: 0,
            snapshots: Vec::new(),
            snap_every,
            max_size: state.size(),
            step_of_max: 0,
            time_of_max: time,
            best: cfg.keep_best.then(|| state.occupied().clone()),
            root_added: false,
            clouds: cfg.clouds.map(CloudTracker::new),
            probe_count: None,
        };
        for v in state.occupied().ones() {
            rec.count_side(v, true);
            if let Some(c) = rec.clouds.as_mut() {
                c.on_insert(v);
            }
            if Some(v) == cfg.watch_vertex {
                rec.root_added = true;
            }
        }
        rec.check_thresholds(state.size(), 0);
        rec
    }

    #[inline]
    fn count_side(&mut self, v: usize, up: bool) {
        if let Some(sides) = self.sides {
            let slot = match sides[v] {
                Some(Side::L) => &mut self.l_occ,
                Some(Side::R) => &mut self.r_occ,
                None => return,
            };
            if up {
                *slot += 1;
            } else {
                *slot -= 1;
            }
        }
    }

    #[inline]
    fn check_thresholds(&mut self, size: usize, step: u64) {
        while self.next_threshold < self.thresholds.len() && size >= self.thresholds[self.next_threshold] {
            self.hits[self.next_threshold] = Some(step);
            self.next_threshold += 1;
        }
    }

    /// Vertex `v` was drawn at this step.
    #[inline]
    pub(crate) fn on_draw(&mut self, v: usize) {
        if let Some(sides) = self.sides {
            if sides[v] == Some(Side::R) && !self.touched.put(v) {
                self.r_touched += 1;
            }
        }
    }

    #[inline]
    pub(crate) fn on_insert(&mut self, v: usize, state: &IndependentSetState, step: u64, time: Option<f64>) {
        self.count_side(v, true);
        if let Some(c) = self.clouds.as_mut() {
            c.on_insert(v);
        }
        if Some(v) == self.cfg.watch_vertex {
            self.root_added = true;
        }
        let size = state.size();
        if size > self.max_size {
            self.max_size = size;
            self.step_of_max = step;
            self.time_of_max = time;
            if let Some(best) = self.best.as_mut() {
                best.clone_from(state.occupied());
            }
            self.check_thresholds(size, step);
        }
    }

    #[inline]
    pub(crate) fn on_remove(&mut self, v: usize) {
        self.count_side(v, false);
        if let Some(c) = self.clouds.as_mut() {
            c.on_remove(v);
        }
    }

    /// End-of-step hook; returns true when the run should stop.
    #[inline]
    pub(crate) fn end_step(&mut self, state: &IndependentSetState, step: u64, time: Option<f64>) -> bool {
        if let Some(p) = &self.cfg.probe {
            if p.at_step == step {
                self.probe_count = Some(p.vertices.iter().filter(|&&v| state.contains(v)).count());
            }
        }
        if self.snap_every != 0 && step.is_multiple_of(self.snap_every) {
            self.snapshot(state, step, time);
        }
        matches!(self.cfg.stop_at_size, Some(s) if state.size() >= s)
    }

    pub(crate) fn snapshot(&mut self, state: &IndependentSetState, step: u64, time: Option<f64>) {
        if self.snapshots.last().is_some_and(|s| s.step == step && s.time == time) {
            return;
        }
        self.snapshots.push(Snapshot {
            step,
            time,
            size: state.size(),
            l_occ: self.l_occ,
            r_occ: self.r_occ,
            r_touched: self.r_touched,
            deload: self.clouds.as_ref().map(CloudTracker::deload),
        });
    }

    pub(crate) fn finish(mut self, state: &IndependentSetState, steps: u64, time: Option<f64>) -> TrialRecord {
        self.snapshot(state, steps, time);
        TrialRecord {
            seed: self.seed,
            steps,
            time,
            max_size: self.max_size,
            step_of_max: self.step_of_max,
            time_of_max: self.time_of_max,
            hitting_times: self.thresholds.into_iter().zip(self.hits).collect(),
            snapshots: self.snapshots,
            root_added: self.cfg.watch_vertex.map(|_| self.root_added),
            deload_final: self.clouds.as_ref().map(CloudTracker::deload),
            probe_count: self.probe_count,
            final_size: state.size(),
            best_set: self.best.map(|b| b.ones().collect()),
            final_set: self.cfg.keep_final.then(|| state.members()),
        }
    }
}

impl Recorder<'_> {
    #[inline]
    pub(crate) fn max_size(&self) -> usize {
        self.max_size
    }

    #[inline]
    pub(crate) fn step_of_max(&self) -> u64 {
        self.step_of_max
    }
}
