use serde::Serialize;

use crate::dynamics::TrialRecord;
use crate::error::{Error, Result};
use crate::instance::BlowupParams;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BurnInReport {
    pub t_burn: f64,
    pub l_occupied: usize,
    pub l_fraction: f64,
    pub r_touched: usize,
    pub r_occupied: usize,
    /// `l_occupied >= n/10`.
    pub l_ok: bool,
    /// `r_touched <= 1/(4p)`.
    pub r_ok: bool,
}

/// Reads the state at `T_burn = 1/(8kpn)` off a continuous-time trial on
/// the base graph. The trial must carry a snapshot at exactly that time
/// (run with `horizon = T_burn` or list it in `time_checkpoints`).
pub fn burn_in_stats(trial: &TrialRecord, params: &BlowupParams) -> Result<BurnInReport> {
    let t_burn = params.burn_in_time();
    let tol = 1e-9 * t_burn.abs().max(f64::MIN_POSITIVE);
    let snap = trial
        .snapshots
        .iter()
        .find(|s| s.time.is_some_and(|t| (t - t_burn).abs() <= tol))
        .ok_or_else(|| Error::InsufficientRecord(format!("no snapshot at T_burn = {t_burn}")))?;
    let n = params.n;
    Ok(BurnInReport {
        t_burn,
        l_occupied: snap.l_occ,
        l_fraction: snap.l_occ as f64 / n as f64,
        r_touched: snap.r_touched,
        r_occupied: snap.r_occ,
        l_ok: 10 * snap.l_occ >= n,
        r_ok: (snap.r_touched as f64) <= 1.0 / (4.0 * params.p),
    })
}
