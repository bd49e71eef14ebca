//! Exact binomial computations behind the optimism argument.

use crate::dist::{binomial_cdf, binomial_pmf, binomial_tail, BinomialParams};
use crate::math::{lattice_ceil, lattice_floor, pseudo_count};
use crate::{Error, Result};

/// Largest `n` accepted by the exact enumerations.
pub const ENUMERATION_BUDGET: u64 = 200;

fn check_budget(n: u64) -> Result<()> {
    if n > ENUMERATION_BUDGET {
        Err(Error::EnumerationBudget {
            n,
            max: ENUMERATION_BUDGET,
        })
    } else {
        Ok(())
    }
}

/// Real reward sum `X ~ Binomial(n, μ)` alongside a pseudo-reward sum
/// `Y ~ Binomial(m, ½)` with `m = ⌈2an⌉`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailModel {
    pub pulls: u64,
    pub mu: f64,
    pub a: f64,
    pseudo_trials: u64,
    rounded: bool,
}

impl TailModel {
    pub fn new(pulls: u64, mu: f64, a: f64) -> Result<Self> {
        if pulls == 0 {
            return Err(Error::invalid("pulls", "need at least one pull"));
        }
        if !(0.0..=1.0).contains(&mu) {
            return Err(Error::invalid("mu", "must lie in [0, 1]"));
        }
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::invalid("a", "must be positive"));
        }
        let exact = 2.0 * a * pulls as f64;
        let pseudo_trials = lattice_ceil(exact).max(1) as u64;
        let rounded = (pseudo_trials as f64 - exact).abs() > crate::math::LATTICE_TOL * exact.max(1.0);
        Ok(Self {
            pulls,
            mu,
            a,
            pseudo_trials,
            rounded,
        })
    }

    /// `m`, the number of pseudo-rewards.
    pub fn pseudo_trials(&self) -> u64 {
        self.pseudo_trials
    }

    /// `2an` was not an integer and was rounded up.
    pub fn was_rounded(&self) -> bool {
        self.rounded
    }

    /// `X̄ = μn`.
    pub fn real_mean(&self) -> f64 {
        self.mu * self.pulls as f64
    }

    /// `Ȳ = m/2`.
    pub fn pseudo_mean(&self) -> f64 {
        self.pseudo_trials as f64 / 2.0
    }

    fn real(&self) -> BinomialParams {
        BinomialParams::new(self.pulls, self.mu).expect("validated mean")
    }

    /// `P(X + Y >= X̄ + Ȳ | X = x)`.
    pub fn conditional_tail(&self, x: f64) -> f64 {
        let threshold = lattice_ceil(self.real_mean() + self.pseudo_mean() - x);
        binomial_tail(threshold, BinomialParams::fair(self.pseudo_trials))
    }

    /// `f(x) = 1 / P(Y >= ⌈X̄ − x + Ȳ⌉)`, nonincreasing in `x`.
    pub fn reciprocal_tail(&self, x: f64) -> f64 {
        1.0 / self.conditional_tail(x)
    }
}

/// `W = E[1 / P(X + Y >= X̄ + Ȳ | X)]` by enumerating every value of `X`.
/// Returns `+∞` if some reachable `X` leaves the event impossible.
pub fn expected_inverse_tail_exact(model: &TailModel) -> Result<f64> {
    check_budget(model.pulls)?;
    let real = model.real();
    let mut w = 0.0;
    for x in 0..=model.pulls {
        let weight = binomial_pmf(x, real);
        if weight == 0.0 {
            continue;
        }
        let tail = model.conditional_tail(x as f64);
        if tail == 0.0 {
            return Ok(f64::INFINITY);
        }
        w += weight / tail;
    }
    Ok(w)
}

/// `Q_s(τ) = P((V + U) / (s + ⌈as⌉) >= τ | V)` with `U ~ Binomial(⌈as⌉, ½)`.
pub fn q_exact(reward_sum: f64, pulls: u64, a: f64, tau: f64) -> Result<f64> {
    if pulls == 0 {
        return Err(Error::NoPulls);
    }
    let m = pseudo_count(a, pulls);
    let threshold = lattice_ceil((pulls + m) as f64 * tau - reward_sum);
    Ok(binomial_tail(threshold, BinomialParams::fair(m)))
}

/// `F_s = 1/Q_s − 1`.
pub fn f_from_q(q: f64) -> f64 {
    1.0 / q - 1.0
}

/// Deviation probabilities of the pseudo-reward average versus the real
/// reward average after `s` pulls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailProbe {
    pub pulls: u64,
    pub a: f64,
    pub mu: f64,
    pub epsilon: f64,
    /// `P(U/s − Ū/s >= ε)`.
    pub p_pseudo: f64,
    /// `P(V̄/s − V/s >= ε)`.
    pub p_real: f64,
}

impl TailProbe {
    /// The pseudo-reward deviation is strictly more likely.
    pub fn optimistic(&self) -> bool {
        self.p_pseudo > self.p_real
    }
}

/// Computes both sides of the tail-optimism comparison exactly, for
/// Bernoulli(μ) real rewards.
pub fn tail_optimism_probe(pulls: u64, a: f64, mu: f64, epsilon: f64) -> Result<TailProbe> {
    check_budget(pulls)?;
    if pulls == 0 {
        return Err(Error::NoPulls);
    }
    if !(epsilon > 0.0) {
        return Err(Error::invalid("epsilon", "must be positive"));
    }
    let s = pulls as f64;
    let m = pseudo_count(a, pulls);
    let p_pseudo = binomial_tail(lattice_ceil(m as f64 / 2.0 + epsilon * s), BinomialParams::fair(m));
    let real = BinomialParams::new(pulls, mu)?;
    let p_real = binomial_cdf(lattice_floor(mu * s - epsilon * s), real);
    Ok(TailProbe {
        pulls,
        a,
        mu,
        epsilon,
        p_pseudo,
        p_real,
    })
}

/// Exact upper and lower deviation probabilities of `X ~ Binomial(s, μ)`,
/// `P(X − sμ >= εs)` and `P(sμ − X >= εs)`, next to Hoeffding's
/// `exp(−2ε²s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoeffdingProbe {
    pub upper: f64,
    pub lower: f64,
    pub bound: f64,
}

pub fn hoeffding_probe(pulls: u64, mu: f64, epsilon: f64) -> Result<HoeffdingProbe> {
    let params = BinomialParams::new(pulls, mu)?;
    let s = pulls as f64;
    Ok(HoeffdingProbe {
        upper: binomial_tail(lattice_ceil(s * mu + epsilon * s), params),
        lower: binomial_cdf(lattice_floor(s * mu - epsilon * s), params),
        bound: libm::exp(-2.0 * epsilon * epsilon * s),
    })
}
