//! Closed-form regret bounds and their constants.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::{Error, Result};

const E2: f64 = 7.389_056_098_930_65;

fn require_above(what: &'static str, requirement: &'static str, a: f64, min: f64) -> Result<()> {
    if a > min && a.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            requirement,
            value: a,
        })
    }
}

/// The regret-bound constant
/// `c = e²√(2a)/√π · exp(16/(a−2)) · (1 + √(πa / (8(a−2))))`, `a > 2`.
pub fn constant_c(a: f64) -> Result<f64> {
    require_above("constant c", "a > 2", a, 2.0)?;
    Ok(E2 * libm::sqrt(2.0 * a) / libm::sqrt(PI)
        * libm::exp(16.0 / (a - 2.0))
        * (1.0 + libm::sqrt(PI * a / (8.0 * (a - 2.0)))))
}

/// `ln c`, finite even where `c` itself overflows.
pub fn ln_constant_c(a: f64) -> Result<f64> {
    require_above("constant c", "a > 2", a, 2.0)?;
    Ok(2.0 + 0.5 * libm::log(2.0 * a) - 0.5 * libm::log(PI)
        + 16.0 / (a - 2.0)
        + libm::log1p(libm::sqrt(PI * a / (8.0 * (a - 2.0)))))
}

/// Upper bound on `E[1 / P(X + Y >= X̄ + Ȳ | X)]` with `2an` pseudo-rewards:
/// `2e²√a/√π · exp(8/(a−1)) · (1 + √(πa / (8(a−1))))`, `a > 1`.
pub fn theorem4_bound(a: f64) -> Result<f64> {
    require_above("inverse-tail bound", "a > 1", a, 1.0)?;
    Ok(2.0 * E2 * libm::sqrt(a) / libm::sqrt(PI)
        * libm::exp(8.0 / (a - 1.0))
        * (1.0 + libm::sqrt(PI * a / (8.0 * (a - 1.0)))))
}

/// `ln` of [`theorem4_bound`].
pub fn ln_theorem4_bound(a: f64) -> Result<f64> {
    require_above("inverse-tail bound", "a > 1", a, 1.0)?;
    Ok(libm::log(2.0) + 2.0 + 0.5 * libm::log(a) - 0.5 * libm::log(PI)
        + 8.0 / (a - 1.0)
        + libm::log1p(libm::sqrt(PI * a / (8.0 * (a - 1.0)))))
}

/// Maps a PHE perturbation scale to the inverse-tail bound's scale.
///
/// The inverse-tail bound is stated for `2a'n` pseudo-rewards after `n`
/// pulls, while PHE adds `a·n`; the two coincide at `a' = a/2`, and then
/// `constant_c(a) == theorem4_bound(a/2)`.
pub fn theorem4_scale_for_phe(a: f64) -> f64 {
    a / 2.0
}

/// Inputs of the gap-dependent bound: scale `a > 2`, the gaps of the
/// suboptimal arms, and the horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundInputs {
    pub a: f64,
    pub gaps: Vec<f64>,
    pub horizon: u64,
}

/// `Σ_i Δ_i (16ac/Δ_i² · ln n + 2 + 8a/Δ_i² · ln n + 3)` over the listed
/// (strictly positive) gaps.
pub fn gap_dependent_bound(inputs: &BoundInputs) -> Result<f64> {
    constant_c(inputs.a)?;
    if inputs.horizon < 2 {
        return Err(Error::Domain {
            what: "gap-dependent bound",
            requirement: "n >= 2",
            value: inputs.horizon as f64,
        });
    }
    gap_dependent_bound_at_log(inputs.a, &inputs.gaps, libm::log(inputs.horizon as f64))
}

/// [`gap_dependent_bound`] with `ln n` supplied directly, so non-integer
/// horizons such as `n = e` can be evaluated.
pub fn gap_dependent_bound_at_log(a: f64, gaps: &[f64], log_n: f64) -> Result<f64> {
    let c = constant_c(a)?;
    let mut total = 0.0;
    for &gap in gaps {
        if !(gap > 0.0 && gap <= 1.0) {
            return Err(Error::Domain {
                what: "gap-dependent bound",
                requirement: "gaps in (0, 1]",
                value: gap,
            });
        }
        let inv_sq = 1.0 / (gap * gap);
        total += gap * (16.0 * a * c * inv_sq * log_n + 2.0 + 8.0 * a * inv_sq * log_n + 3.0);
    }
    Ok(total)
}

/// `4·√(2a(2c + 1)·K·n·ln n) + 5K`.
pub fn gap_free_bound(a: f64, arms: usize, horizon: u64) -> Result<f64> {
    constant_c(a)?;
    if horizon < 2 {
        return Err(Error::Domain {
            what: "gap-free bound",
            requirement: "n >= 2",
            value: horizon as f64,
        });
    }
    let n = horizon as f64;
    gap_free_bound_at(a, arms, n, libm::log(n))
}

/// [`gap_free_bound`] for a real horizon `n` with `log_n = ln n`.
pub fn gap_free_bound_at(a: f64, arms: usize, n: f64, log_n: f64) -> Result<f64> {
    let c = constant_c(a)?;
    let k = arms as f64;
    Ok(4.0 * libm::sqrt(2.0 * a * (2.0 * c + 1.0) * k * n * log_n) + 5.0 * k)
}
