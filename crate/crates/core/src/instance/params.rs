use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of the clique-blowup family: base `B(n, kn, p)`, cliques of
/// size `ell`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlowupParams {
    pub n: usize,
    pub k: usize,
    pub ell: usize,
    pub p: f64,
    pub seed: u64,
}

impl BlowupParams {
    pub fn new(n: usize, k: usize, ell: usize, p: f64, seed: u64) -> Result<Self> {
        if n == 0 || k == 0 || ell == 0 {
            return Err(Error::InvalidParams("n, k and ell must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParams(format!("edge probability {p} outside [0, 1]")));
        }
        Ok(BlowupParams { n, k, ell, p, seed })
    }

    pub fn num_blowup_vertices(&self) -> usize {
        self.k * self.n + self.ell * self.n
    }

    /// Length of the burn-in window, `1 / (8 k p n)`.
    pub fn burn_in_time(&self) -> f64 {
        1.0 / (8.0 * self.k as f64 * self.p * self.n as f64)
    }
}

/// Which of the asymptotic parameter relations hold. Violations are
/// informational; small-scale runs relax the constants on purpose.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelationReport {
    /// `p >= 50 ln(k) / n`
    pub p_lower_bound: bool,
    /// `p <= 0.1`
    pub p_upper_bound: bool,
    /// `ell >= 10 k p n`
    pub ell_relation: bool,
    pub p_lower_value: f64,
    pub ell_required: f64,
}

impl RelationReport {
    pub fn all_hold(&self) -> bool {
        self.p_lower_bound && self.p_upper_bound && self.ell_relation
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if !self.p_lower_bound {
            w.push(format!("p below 50 ln(k)/n = {:.4}", self.p_lower_value));
        }
        if !self.p_upper_bound {
            w.push("p above 0.1".to_string());
        }
        if !self.ell_relation {
            w.push(format!("ell below 10kpn = {:.1}", self.ell_required));
        }
        w
    }
}

/// `a >= b` up to floating-point noise in the products.
fn at_least(a: f64, b: f64) -> bool {
    a >= b - 1e-9 * b.abs().max(1.0)
}

pub fn validate_relations(params: &BlowupParams) -> RelationReport {
    let n = params.n as f64;
    let k = params.k as f64;
    let p_lower_value = 50.0 * k.ln() / n;
    let ell_required = 10.0 * k * params.p * n;
    RelationReport {
        p_lower_bound: at_least(params.p, p_lower_value),
        p_upper_bound: at_least(0.1, params.p),
        ell_relation: at_least(params.ell as f64, ell_required),
        p_lower_value,
        ell_required,
    }
}

/// Dense re-parameterisation by `m`: `n = m^ε`, `k = m^(1-3ε)`,
/// `ell = m^(1-ε)`, `p = m^-δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DenseParams {
    pub m: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseDerivation {
    pub params: BlowupParams,
    pub exact_n: f64,
    pub exact_k: f64,
    pub exact_ell: f64,
    /// Counts are floored; `p` is kept exact.
    pub rounding: String,
    pub relations: RelationReport,
}

fn floor_count(x: f64) -> usize {
    (x * (1.0 + 1e-12)).floor() as usize
}

pub fn derive_dense_params(d: &DenseParams) -> Result<DenseDerivation> {
    let (m, eps, delta) = (d.m, d.epsilon, d.delta);
    if !(eps > 0.0 && eps < 1.0 / 3.0) {
        return Err(Error::InvalidDenseParams(format!("epsilon {eps} outside (0, 1/3)")));
    }
    if !(delta > eps / 4.0 && delta < eps) {
        return Err(Error::InvalidDenseParams(format!("delta {delta} outside (eps/4, eps)")));
    }
    if !(m >= 1.0 && m.is_finite()) {
        return Err(Error::InvalidDenseParams(format!("m = {m} must be finite and >= 1")));
    }
    let exact_n = m.powf(eps);
    let exact_k = m.powf(1.0 - 3.0 * eps);
    let exact_ell = m.powf(1.0 - eps);
    let p = m.powf(-delta);
    let (n, k, ell) = (floor_count(exact_n), floor_count(exact_k), floor_count(exact_ell));
    let params = BlowupParams::new(n.max(1), k.max(1), ell.max(1), p, d.seed)?;
    Ok(DenseDerivation {
        relations: validate_relations(&params),
        params,
        exact_n,
        exact_k,
        exact_ell,
        rounding: "floor".to_string(),
    })
}
