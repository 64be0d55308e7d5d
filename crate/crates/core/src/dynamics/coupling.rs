//! Monotone coupling of the process on a bipartite graph `B` with the
//! restricted process on `B[W]`, `W = L1 ∪ R0`.

use fixedbitset::FixedBitSet;
use rand::Rng;
use serde::Serialize;

use super::discrete::{apply, Change};
use super::schedule::Fugacity;
use crate::error::{Error, Result};
use crate::graph::{Graph, IndependentSetState, Side};
use crate::rng::{self, streams, unit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CouplingMode {
    /// Shared lazy clocks with the swapped coupling on disagreeing vertices.
    Coupled,
    /// Negative control: the restricted process runs on its own stream.
    IndependentClocks,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    /// A vertex of `L1` is in the lower process but not the upper.
    LowerAheadOnL1,
    /// A vertex of `R0` is in the upper process but not the lower.
    UpperAheadOnR0,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub event: u64,
    pub vertex: usize,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CouplingReport {
    pub events: u64,
    pub violations: u64,
    pub first_violation: Option<Violation>,
    pub upper_final: Vec<usize>,
    pub lower_final: Vec<usize>,
}

impl CouplingReport {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// The two sides of the restricted graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingSets {
    pub l1: Vec<usize>,
    pub r0: Vec<usize>,
}

struct Order {
    in_l1: FixedBitSet,
    in_r0: FixedBitSet,
}

impl Order {
    fn violation_at(&self, upper: &IndependentSetState, lower: &IndependentSetState, v: usize) -> Option<ViolationKind> {
        if self.in_l1.contains(v) && lower.contains(v) && !upper.contains(v) {
            Some(ViolationKind::LowerAheadOnL1)
        } else if self.in_r0.contains(v) && upper.contains(v) && !lower.contains(v) {
            Some(ViolationKind::UpperAheadOnR0)
        } else {
            None
        }
    }
}

fn validate(b: &Graph, sets: &CouplingSets) -> Result<(FixedBitSet, FixedBitSet)> {
    b.check_labeled_bipartition()?;
    let n = b.num_vertices();
    if sets.l1.iter().chain(&sets.r0).any(|&v| v >= n) {
        return Err(Error::InvalidParams("coupling set vertex out of range".into()));
    }
    if sets.l1.iter().any(|&u| b.side(u) != Some(Side::L)) || sets.r0.iter().any(|&v| b.side(v) != Some(Side::R)) {
        return Err(Error::InvalidParams("L1 must lie in L and R0 in R".into()));
    }
    let in_l1 = b.bitset_of(&sets.l1);
    let in_r0 = b.bitset_of(&sets.r0);
    for &u in &sets.l1 {
        if let Some(&v) = b.neighbors(u).iter().find(|&&v| !in_r0.contains(v as usize)) {
            return Err(Error::InvalidParams(format!("edge {u}-{v} joins L1 to R outside R0")));
        }
    }
    Ok((in_l1, in_r0))
}

/// Runs the upper process on all of `b` and the lower process on `B[W]`
/// for `events` clock rings (each vertex rings at the same rate; a ring is
/// lazy, updating with probability 1/2) and checks after every event that
/// `upper ∩ L1 ⊇ lower ∩ L1` and `upper ∩ R0 ⊆ lower ∩ R0`.
///
/// In [`CouplingMode::Coupled`], rings in `W` are shared: when both
/// processes agree on the ringing vertex they use the same coin and `ζ`;
/// when they disagree exactly one of them updates (the upper on heads, the
/// lower on tails). Violations are reported, not raised.
#[allow(clippy::too_many_arguments)]
pub fn run_coupled_monotone(
    b: &Graph,
    sets: &CouplingSets,
    upper_start: &[usize],
    lower_start: &[usize],
    lambda: Fugacity,
    events: u64,
    seed: u64,
    mode: CouplingMode,
) -> Result<CouplingReport> {
    let (in_l1, in_r0) = validate(b, sets)?;
    let n = b.num_vertices();
    let mut in_w = in_l1.clone();
    in_w.union_with(&in_r0);
    if lower_start.iter().any(|&v| v >= n || !in_w.contains(v)) {
        return Err(Error::InvalidParams("lower start must lie in W".into()));
    }
    let mut upper = IndependentSetState::from_set(b, upper_start)?;
    let mut lower = IndependentSetState::from_set(b, lower_start)?;
    let order = Order { in_l1, in_r0 };

    let mut report = CouplingReport {
        events,
        violations: 0,
        first_violation: None,
        upper_final: Vec::new(),
        lower_final: Vec::new(),
    };
    let record = |report: &mut CouplingReport, event: u64, v: usize, upper: &IndependentSetState, lower: &IndependentSetState| {
        if let Some(kind) = order.violation_at(upper, lower, v) {
            report.violations += 1;
            report.first_violation.get_or_insert(Violation { event, vertex: v, kind });
        }
    };
    for v in in_w.ones() {
        record(&mut report, 0, v, &upper, &lower);
    }
    if report.violations > 0 {
        return Err(Error::InvalidParams("initial states are not ordered".into()));
    }

    let mut rng = rng::trial_rng(seed);
    let mut control = rng::stream(seed, streams::CONTROL);
    // The order is vertexwise, so only vertices touched by an event can break it.
    for e in 1..=events {
        let v = rng.random_range(0..n);
        let heads = rng.random::<bool>();
        let zeta = unit(&mut rng);
        match mode {
            CouplingMode::Coupled => {
                if !in_w.contains(v) {
                    if heads {
                        apply(&mut upper, b, v, zeta, lambda);
                    }
                } else if upper.contains(v) == lower.contains(v) {
                    if heads {
                        apply(&mut upper, b, v, zeta, lambda);
                        apply(&mut lower, b, v, zeta, lambda);
                    }
                } else if heads {
                    apply(&mut upper, b, v, zeta, lambda);
                } else {
                    apply(&mut lower, b, v, zeta, lambda);
                }
                record(&mut report, e, v, &upper, &lower);
            }
            CouplingMode::IndependentClocks => {
                if heads {
                    apply(&mut upper, b, v, zeta, lambda);
                }
                let w = control.random_range(0..n);
                let lower_heads = control.random::<bool>();
                let lower_zeta = unit(&mut control);
                if in_w.contains(w) && lower_heads && apply(&mut lower, b, w, lower_zeta, lambda) != Change::Unchanged {
                    record(&mut report, e, w, &upper, &lower);
                }
                record(&mut report, e, v, &upper, &lower);
            }
        }
    }
    report.upper_final = upper.members();
    report.lower_final = lower.members();
    Ok(report)
}
