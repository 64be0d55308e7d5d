use nalgebra::{DMatrix, Matrix3};
use proptest::prelude::*;
use rand::Rng;

use super::*;
use crate::dynamics::{run_ct_ump, FugacitySchedule, RecorderConfig, Snapshot, TrialRecord, WeightedCTConfig};
use crate::error::Error;
use crate::instance::{gen_base_bipartite, BlowupParams};
use crate::rng::trial_rng;

fn record(max_size: usize) -> TrialRecord {
    TrialRecord {
        seed: 0,
        steps: 1,
        time: None,
        max_size,
        step_of_max: 0,
        time_of_max: None,
        hitting_times: Vec::new(),
        snapshots: Vec::new(),
        root_added: None,
        deload_final: None,
        probe_count: None,
        final_size: max_size,
        best_set: None,
        final_set: None,
    }
}

/// Walks until the level `-m` (ruin) or `+h` (escape). From `+h` the
/// remaining ruin chance is `(q/p)^{h+m}`, below the tolerance used here.
fn ruin_monte_carlo(p_up: f64, m: i64, h: i64, walks: usize, seed: u64) -> f64 {
    let mut rng = trial_rng(seed);
    let mut ruined = 0;
    for _ in 0..walks {
        let mut x = 0i64;
        while x > -m && x < h {
            x += if rng.random::<f64>() < p_up { 1 } else { -1 };
        }
        if x == -m {
            ruined += 1;
        }
    }
    ruined as f64 / walks as f64
}

#[test]
fn ruin_examples() {
    assert!((ruin_probability(2.0 / 3.0, 1.0 / 3.0, 10).unwrap() - 2f64.powi(-10)).abs() < 1e-15);
    assert!((ruin_probability(0.9, 0.1, 1).unwrap() - 1.0 / 9.0).abs() < 1e-15);
    assert_eq!(ruin_probability(0.6, 0.4, 0).unwrap(), 1.0);
    for (u, d) in [(0.5, 0.5), (0.4, 0.6), (0.7, 0.2), (1.2, -0.2)] {
        assert!(matches!(ruin_probability(u, d, 3), Err(Error::InvalidDrift(..))));
    }
}

#[test]
fn ruin_agrees_with_monte_carlo() {
    let walks = 200_000;
    for (p, m, h) in [(0.9, 1, 20), (0.75, 2, 40), (0.6, 3, 120)] {
        let exact = ruin_probability(p, 1.0 - p, m as u32).unwrap();
        let emp = ruin_monte_carlo(p, m, h, walks, m as u64);
        let sigma = (exact * (1.0 - exact) / walks as f64).sqrt();
        assert!((emp - exact).abs() <= 3.0 * sigma, "p={p} m={m}: {emp} vs {exact}");
    }
}

#[test]
fn birth_death_examples() {
    let pi = birth_death_stationary(&[0.3, 0.0], &[0.0, 0.3], &[0.7, 0.7]).unwrap();
    assert!((pi[0] - 0.5).abs() < 1e-15 && (pi[1] - 0.5).abs() < 1e-15);

    let (a, b) = (2.0 / 3.0, 1.0 / 3.0);
    let p = [a, a, 0.0];
    let q = [0.0, b, b];
    let r = [1.0 - a, 0.0, 1.0 - b];
    let pi = birth_death_stationary(&p, &q, &r).unwrap();
    for (x, y) in pi.iter().zip([1.0 / 7.0, 2.0 / 7.0, 4.0 / 7.0]) {
        assert!((x - y).abs() < 1e-14);
    }
    // Oracle: left null vector of P - I.
    let m = DMatrix::from_row_slice(3, 3, &[r[0], p[0], 0.0, q[1], r[1], p[1], 0.0, q[2], r[2]]);
    let svd = (m.transpose() - DMatrix::identity(3, 3)).svd(true, true);
    let v_t = svd.v_t.unwrap();
    let (idx, _) = svd.singular_values.iter().enumerate().min_by(|x, y| x.1.total_cmp(y.1)).unwrap();
    let null = v_t.row(idx);
    let s: f64 = null.iter().sum();
    for (x, y) in pi.iter().zip(null.iter()) {
        assert!((x - y / s).abs() < 1e-12);
    }
}

#[test]
fn birth_death_rejects_bad_chains() {
    assert!(matches!(birth_death_stationary(&[], &[], &[]), Err(Error::InvalidChain(_))));
    assert!(birth_death_stationary(&[0.5, 0.0], &[0.0, 0.5], &[0.4, 0.5]).is_err());
    assert!(birth_death_stationary(&[0.0, 0.0], &[0.0, 0.5], &[1.0, 0.5]).is_err());
    assert!(birth_death_stationary(&[0.5, 0.1], &[0.0, 0.5], &[0.5, 0.4]).is_err());
    assert!(birth_death_stationary(&[0.5, 0.0], &[0.1, 0.5], &[0.4, 0.5]).is_err());
}

#[test]
fn birth_death_simulation_matches() {
    let k = 6;
    let p: Vec<f64> = (0..=k).map(|i| if i < k { 0.3 + 0.05 * i as f64 } else { 0.0 }).collect();
    let q: Vec<f64> = (0..=k).map(|i| if i > 0 { 0.4 - 0.02 * i as f64 } else { 0.0 }).collect();
    let r: Vec<f64> = (0..=k).map(|i| 1.0 - p[i] - q[i]).collect();
    let pi = birth_death_stationary(&p, &q, &r).unwrap();
    let mut rng = trial_rng(3);
    let mut counts = vec![0u64; k + 1];
    let mut x = 0usize;
    let steps = 1_000_000;
    for _ in 0..steps {
        let u: f64 = rng.random();
        if u < p[x] {
            x += 1;
        } else if u < p[x] + q[x] {
            x -= 1;
        }
        counts[x] += 1;
    }
    let tv: f64 = 0.5 * counts.iter().zip(&pi).map(|(&c, &w)| (c as f64 / steps as f64 - w).abs()).sum::<f64>();
    assert!(tv < 0.02, "{tv}");
}

#[test]
fn branch_chain_examples() {
    assert_eq!(branch_chain_prob_a(&BranchChainSpec::new(vec![]).unwrap()), 1.0);
    assert!((branch_chain_prob_a(&BranchChainSpec::new(vec![1.0]).unwrap()) - 0.5).abs() < 1e-15);
    assert!(matches!(BranchChainSpec::new(vec![2.0, 0.5]), Err(Error::InvalidFugacity(_))));
    assert_eq!(branch_chain_prob_a(&BranchChainSpec::new(vec![f64::INFINITY; 5]).unwrap()), 1.0);
}

fn branch_by_matrices(lambdas: &[f64]) -> (f64, f64, f64) {
    // Row vector (a, b, c) times column-stochastic update, as a matrix product.
    let mut v = nalgebra::RowVector3::new(1.0, 0.0, 0.0);
    for &l in lambdas {
        let e = 0.5 / l;
        let m = Matrix3::new(1.0 - e, 0.0, e, 0.0, 1.0 - e, e, 0.5, 0.5, 0.0);
        v *= m;
    }
    (v[0], v[1], v[2])
}

proptest! {
    #[test]
    fn branch_chain_invariants(lambdas in prop::collection::vec(1.0f64..1e4, 0..200)) {
        let spec = BranchChainSpec::new(lambdas.clone()).unwrap();
        let (a, b, c) = branch_chain_distribution(&spec);
        prop_assert!((a + b + c - 1.0).abs() < 1e-12);
        prop_assert!((0.25 - 1e-15..=1.0).contains(&a));
        prop_assert!(a >= b);
        let (x, y, z) = branch_by_matrices(&lambdas);
        prop_assert!((a - x).abs() < 1e-12 && (b - y).abs() < 1e-12 && (c - z).abs() < 1e-12);
    }

    #[test]
    fn stationary_detailed_balance(k in 1usize..40, seed: u64) {
        let mut rng = trial_rng(seed);
        let mut p = vec![0.0; k + 1];
        let mut q = vec![0.0; k + 1];
        for i in 0..=k {
            if i < k { p[i] = rng.random_range(0.01..0.5); }
            if i > 0 { q[i] = rng.random_range(0.01..0.5); }
        }
        let r: Vec<f64> = (0..=k).map(|i| 1.0 - p[i] - q[i]).collect();
        let pi = birth_death_stationary(&p, &q, &r).unwrap();
        prop_assert!((pi.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for i in 0..k {
            prop_assert!((pi[i] * p[i] - pi[i + 1] * q[i + 1]).abs() < 1e-12);
        }
    }
}

#[test]
fn bipartite_bound_examples() {
    assert_eq!(bipartite_is_bound(5000, 16.0).unwrap(), 1733);
    let d = std::f64::consts::E.powi(2) + 0.1;
    assert_eq!(bipartite_is_bound(100, d).unwrap(), 54);
    assert!(matches!(bipartite_is_bound(100, 7.0), Err(Error::OutOfRegime(_))));
    assert!(bipartite_is_bound(100, std::f64::consts::E.powi(2)).is_err());
}

#[test]
fn burn_in_from_ct_run() {
    let params = BlowupParams::new(50, 4, 20, 0.05, 1).unwrap();
    let base = gen_base_bipartite(params.n, params.k, params.p, params.seed).unwrap();
    let cfg = WeightedCTConfig::clique_blowup(&base, params.ell, params.burn_in_time()).unwrap();
    let rec = run_ct_ump(&base, &cfg, &FugacitySchedule::fixed(2.0).unwrap(), 4, &RecorderConfig::default()).unwrap();
    let report = burn_in_stats(&rec, &params).unwrap();
    assert_eq!(report.t_burn, 1.0 / (8.0 * 4.0 * 0.05 * 50.0));
    let last = rec.snapshots.last().unwrap();
    assert_eq!((report.l_occupied, report.r_occupied, report.r_touched), (last.l_occ, last.r_occ, last.r_touched));
    assert_eq!(report.l_ok, report.l_occupied * 10 >= 50);

    let mut short = rec.clone();
    short.snapshots.retain(|s: &Snapshot| s.time != Some(report.t_burn));
    assert!(matches!(burn_in_stats(&short, &params), Err(Error::InsufficientRecord(_))));
}

#[test]
fn summarize_examples() {
    let s = summarize(&[record(5)], 10, &[]).unwrap();
    assert_eq!(s.mean_ratio, 0.5);
    let s = summarize(&vec![record(7); 20], 10, &[7, 8]).unwrap();
    assert_eq!(s.sd_ratio, 0.0);
    assert_eq!(s.sd_size, 0.0);
    assert_eq!(s.threshold(7).unwrap().frequency, 1.0);
    assert_eq!(s.threshold(8).unwrap().failure_frequency, 1.0);
    assert!(matches!(summarize(&[], 10, &[]), Err(Error::EmptyInput)));
}

#[test]
fn quantiles_match_sort_oracle() {
    let mut rng = trial_rng(8);
    // Mixture of two clusters.
    let sizes: Vec<usize> = (0..997).map(|_| if rng.random::<f64>() < 0.3 { rng.random_range(10..20) } else { rng.random_range(60..95) }).collect();
    let records: Vec<TrialRecord> = sizes.iter().map(|&s| record(s)).collect();
    let s = summarize(&records, 100, &[]).unwrap();
    let mut sorted = sizes.clone();
    sorted.sort_unstable();
    for (level, got) in QUANTILE_LEVELS.iter().zip(&s.ratio_quantiles) {
        // Smallest value with at least `level` of the data at or below it.
        let oracle = sorted
            .iter()
            .find(|&&x| sorted.iter().filter(|&&y| y <= x).count() as f64 >= level * sorted.len() as f64)
            .unwrap();
        assert_eq!(*got, *oracle as f64 / 100.0);
    }
    assert!(s.ratio_quantiles.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn proportion_intervals() {
    for (k, n) in [(0, 50), (1, 50), (25, 50), (49, 50), (50, 50), (990, 1000)] {
        let (lo, hi) = proportion_ci(k, n);
        let p = k as f64 / n as f64;
        assert!(lo <= p && p <= hi && (0.0..=1.0).contains(&lo) && hi <= 1.0, "{k}/{n}");
    }
    assert!(proportion_ci(0, 50).1 > 0.0);
}
