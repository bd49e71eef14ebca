#![allow(dead_code)]

use statrs::distribution::{ChiSquared, ContinuousCDF};

pub const ALPHA: f64 = 1e-3;
pub const SAMPLES: usize = 100_000;

/// Independent oracle: `C(n, k) p^k (1-p)^(n-k)` by direct products.
pub fn pmf_oracle(k: u64, n: u64, p: f64) -> f64 {
    let mut c = 1.0f64;
    for i in 0..k {
        c *= (n - i) as f64 / (i + 1) as f64;
    }
    c * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)
}

/// Pearson goodness-of-fit; cells with expected count < 5 are pooled into
/// their neighbour. Returns (statistic, critical value at `ALPHA`).
pub fn chi_squared_gof(observed: &[u64], probs: &[f64]) -> (f64, f64) {
    assert_eq!(observed.len(), probs.len());
    let total: u64 = observed.iter().sum();
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut obs_acc, mut exp_acc) = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(probs) {
        obs_acc += o as f64;
        exp_acc += p * total as f64;
        if exp_acc >= 5.0 {
            cells.push((obs_acc, exp_acc));
            obs_acc = 0.0;
            exp_acc = 0.0;
        }
    }
    if exp_acc > 0.0 || obs_acc > 0.0 {
        match cells.last_mut() {
            Some(last) => {
                last.0 += obs_acc;
                last.1 += exp_acc;
            }
            None => cells.push((obs_acc, exp_acc)),
        }
    }
    let stat: f64 = cells.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dof = (cells.len() - 1).max(1) as f64;
    let crit = ChiSquared::new(dof).unwrap().inverse_cdf(1.0 - ALPHA);
    (stat, crit)
}

pub fn assert_gof(label: &str, observed: &[u64], probs: &[f64]) {
    let (stat, crit) = chi_squared_gof(observed, probs);
    assert!(stat <= crit, "{label}: chi2 = {stat:.2} > {crit:.2}");
}

/// Chi-squared test of homogeneity between two histograms over the same
/// cells.
pub fn assert_same_distribution(label: &str, a: &[u64], b: &[u64]) {
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    let mut stat = 0.0;
    let mut cells = 0;
    for (&x, &y) in a.iter().zip(b) {
        let pooled = (x + y) as f64;
        if pooled < 10.0 {
            continue;
        }
        let ea = pooled * na / (na + nb);
        let eb = pooled * nb / (na + nb);
        stat += (x as f64 - ea).powi(2) / ea + (y as f64 - eb).powi(2) / eb;
        cells += 1;
    }
    let crit = ChiSquared::new((cells - 1) as f64).unwrap().inverse_cdf(1.0 - ALPHA);
    assert!(stat <= crit, "{label}: chi2 = {stat:.2} > {crit:.2}");
}

pub fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

pub fn histogram(values: impl Iterator<Item = usize>, cells: usize) -> Vec<u64> {
    let mut h = vec![0u64; cells];
    for v in values {
        h[v] += 1;
    }
    h
}
