use crate::error::{Error, Result};

const SUM_TOLERANCE: f64 = 1e-9;

/// Probability that a ±1 walk stepping up with `p_up` and down with
/// `p_down` ever drops `m` below its start: `(p_down / p_up)^m`.
pub fn ruin_probability(p_up: f64, p_down: f64, m: u32) -> Result<f64> {
    let valid = (0.0..=1.0).contains(&p_up)
        && (0.0..=1.0).contains(&p_down)
        && (p_up + p_down - 1.0).abs() <= SUM_TOLERANCE
        && p_up > p_down;
    if !valid {
        return Err(Error::InvalidDrift(p_up, p_down));
    }
    Ok((p_down / p_up).powi(m as i32))
}

/// Stationary law of the birth-death chain on `{0..k}` with up-rates `p`,
/// down-rates `q` and holding rates `r`: `π(j) ∝ Π_{i=1..j} p_{i-1}/q_i`.
/// Weights are accumulated in log space so long chains do not overflow.
pub fn birth_death_stationary(p: &[f64], q: &[f64], r: &[f64]) -> Result<Vec<f64>> {
    let len = p.len();
    if len == 0 || q.len() != len || r.len() != len {
        return Err(Error::InvalidChain("rate vectors must be nonempty and of equal length".into()));
    }
    let k = len - 1;
    for i in 0..len {
        let (pi, qi, ri) = (p[i], q[i], r[i]);
        if [pi, qi, ri].iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(Error::InvalidChain(format!("rate outside [0, 1] at state {i}")));
        }
        if (pi + qi + ri - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidChain(format!("rates at state {i} sum to {}", pi + qi + ri)));
        }
        if (i < k && pi <= 0.0) || (i > 0 && qi <= 0.0) {
            return Err(Error::InvalidChain(format!("state {i} is not connected to its neighbours")));
        }
    }
    if q[0] != 0.0 || p[k] != 0.0 {
        return Err(Error::InvalidChain("chain leaves {0..k}".into()));
    }
    let mut log_w = Vec::with_capacity(len);
    log_w.push(0.0f64);
    for j in 1..len {
        log_w.push(log_w[j - 1] + p[j - 1].ln() - q[j].ln());
    }
    let top = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = log_w.iter().map(|l| (l - top).exp()).collect();
    let total: f64 = w.iter().sum();
    Ok(w.into_iter().map(|x| x / total).collect())
}

/// Fugacities seen by one branch at its successive updates.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchChainSpec {
    lambdas: Vec<f64>,
}

impl BranchChainSpec {
    pub fn new(lambdas: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = lambdas.iter().find(|l| !(**l >= 1.0)) {
            return Err(Error::InvalidFugacity(bad));
        }
        Ok(BranchChainSpec { lambdas })
    }

    pub fn updates(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }
}

/// Exact law `(P(A), P(B), P(∅))` of the branch chain after all updates,
/// starting from `A`. From `∅` the branch moves to `A` or `B` with
/// probability 1/2 each; from `A` or `B` it empties with probability
/// `1/(2λ)`.
pub fn branch_chain_distribution(spec: &BranchChainSpec) -> (f64, f64, f64) {
    let (mut a, mut b, mut c) = (1.0f64, 0.0f64, 0.0f64);
    for &lambda in &spec.lambdas {
        let leave = if lambda.is_infinite() { 0.0 } else { 0.5 / lambda };
        (a, b, c) = (c / 2.0 + (1.0 - leave) * a, c / 2.0 + (1.0 - leave) * b, leave * (a + b));
    }
    (a, b, c)
}

pub fn branch_chain_prob_a(spec: &BranchChainSpec) -> f64 {
    branch_chain_distribution(spec).0
}

/// Per-side size `⌈2 ln(d)/d · n⌉` above which a random bipartite graph
/// with edge probability `d/n` has no balanced independent set w.h.p.
/// Natural logarithm.
pub fn bipartite_is_bound(n: u64, d: f64) -> Result<u64> {
    if !(d > std::f64::consts::E.powi(2)) || !d.is_finite() {
        return Err(Error::OutOfRegime(d));
    }
    Ok((2.0 * d.ln() / d * n as f64).ceil() as u64)
}
