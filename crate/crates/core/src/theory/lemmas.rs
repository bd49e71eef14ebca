//! Exact checks of the two technical lemmas behind the inverse-tail bound.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{Relation, TheoryCheckReport};
use crate::dist::{binomial_pmf, binomial_tail, BinomialParams};
use crate::math::{lattice_ceil, LATTICE_TOL};
use crate::{Error, Result};

/// `P(Y >= ⌈an + δ⌉)` for `Y ~ Binomial(2an, ½)` versus its lower bound
/// `√π / (e²√a) · exp(−2(δ + √n)² / (an))`, for each `δ` in `deltas`.
pub fn lemma3_check(pulls: u64, a: f64, deltas: &[f64]) -> Result<Vec<TheoryCheckReport>> {
    let n = pulls as f64;
    let m_real = 2.0 * a * n;
    let m = lattice_ceil(m_real);
    if pulls == 0 || (m as f64 - m_real).abs() > LATTICE_TOL * m_real.max(1.0) {
        return Err(Error::invalid("a", "2an must be a positive integer"));
    }
    let an = a * n;
    let params = BinomialParams::fair(m as u64);
    let scale = libm::sqrt(PI) / (libm::exp(2.0) * libm::sqrt(a));
    deltas
        .iter()
        .map(|&delta| {
            if !(-LATTICE_TOL..=an * (1.0 + LATTICE_TOL)).contains(&delta) {
                return Err(Error::invalid("delta", format!("{delta} is outside [0, an]")));
            }
            let lhs = binomial_tail(lattice_ceil(an + delta), params);
            let root = delta + libm::sqrt(n);
            let rhs = scale * libm::exp(-2.0 * root * root / an);
            Ok(TheoryCheckReport::compare(
                "lemma3",
                format!("n={pulls};a={a};delta={delta}"),
                lhs,
                Relation::AtLeast,
                rhs,
            ))
        })
        .collect()
}

/// `21` evenly spaced points of `[0, an]`.
pub fn lemma3_deltas(pulls: u64, a: f64, points: usize) -> Vec<f64> {
    let an = a * pulls as f64;
    let last = points.saturating_sub(1).max(1) as f64;
    (0..points).map(|j| an * j as f64 / last).collect()
}

/// `E[f(X)]` for `X ~ Binomial(n, μ)` versus the partition bound
/// `Σ_{i<i₀} e^{−2i²} f(X̄ − (i+1)√n) + e^{−2i₀²} f(0)`, where `i₀` is the
/// smallest integer with `(i₀+1)√n >= X̄`.
///
/// `f` must be nonnegative and nonincreasing on `[0, n]`; this is verified
/// on the integers and on every evaluation point.
pub fn lemma2_check<F>(label: &str, pulls: u64, mu: f64, f: F) -> Result<TheoryCheckReport>
where
    F: Fn(f64) -> f64,
{
    let params = BinomialParams::new(pulls, mu)?;
    let n = pulls as f64;
    let mean = mu * n;
    let root_n = libm::sqrt(n);
    let i0 = lattice_ceil(mean / root_n - 1.0).max(0) as u64;

    let mut points: Vec<f64> = (0..=pulls).map(|x| x as f64).collect();
    points.extend((0..i0).map(|i| mean - (i + 1) as f64 * root_n));
    points.sort_by(f64::total_cmp);
    let mut prev: Option<(f64, f64)> = None;
    for &x in &points {
        let fx = f(x);
        if !(fx >= 0.0) {
            return Err(Error::invalid("f", format!("f({x}) = {fx} is negative")));
        }
        if let Some((x0, f0)) = prev {
            if fx > f0 * (1.0 + 1e-12) {
                return Err(Error::NotMonotone { x0, f0, x1: x, f1: fx });
            }
        }
        prev = Some((x, fx));
    }

    let expectation: f64 = (0..=pulls).map(|x| binomial_pmf(x, params) * f(x as f64)).sum();
    let mut bound = 0.0;
    for i in 0..i0 {
        let i_f = i as f64;
        bound += libm::exp(-2.0 * i_f * i_f) * f(mean - (i_f + 1.0) * root_n);
    }
    let i0_f = i0 as f64;
    bound += libm::exp(-2.0 * i0_f * i0_f) * f(0.0);
    Ok(TheoryCheckReport::compare(
        "lemma2",
        format!("f={label};n={pulls};mu={mu}"),
        expectation,
        Relation::AtMost,
        bound,
    ))
}
