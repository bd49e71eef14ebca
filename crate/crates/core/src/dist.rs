//! Binomial and beta distributions: sampling and exact binomial tails.

use rand::Rng;
use rand_distr::{Beta, Binomial, Distribution};

use crate::math::ln_binomial_pmf;
use crate::{Error, Result};

/// Parameters of `Binomial(trials, success_prob)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinomialParams {
    trials: u64,
    success_prob: f64,
}

impl BinomialParams {
    pub fn new(trials: u64, success_prob: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&success_prob) {
            return Err(Error::invalid("success_prob", "must lie in [0, 1]"));
        }
        Ok(Self { trials, success_prob })
    }

    /// `Binomial(trials, 1/2)`, the pseudo-reward sum distribution.
    pub const fn fair(trials: u64) -> Self {
        Self {
            trials,
            success_prob: 0.5,
        }
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn success_prob(&self) -> f64 {
        self.success_prob
    }

    pub fn mean(&self) -> f64 {
        self.trials as f64 * self.success_prob
    }
}

/// Draws from `Binomial(trials, success_prob)` in O(1) expected time.
///
/// Fair coins with at most 64 trials are counted directly as the popcount of
/// one random word; everything else goes through inversion (small mean) or
/// BTPE rejection sampling.
pub fn sample_binomial<R: Rng + ?Sized>(params: BinomialParams, rng: &mut R) -> u64 {
    BinomialSampler::new(params).sample(rng)
}

/// A binomial sampler with its setup precomputed, for repeated draws from
/// one distribution. Draws are identical to [`sample_binomial`].
#[derive(Debug, Clone, Copy)]
pub struct BinomialSampler(SamplerKind);

#[derive(Debug, Clone, Copy)]
enum SamplerKind {
    Constant(u64),
    FairWord(u64),
    General(Binomial),
}

impl BinomialSampler {
    pub fn new(params: BinomialParams) -> Self {
        let BinomialParams {
            trials,
            success_prob: p,
        } = params;
        let kind = if trials == 0 || p == 0.0 {
            SamplerKind::Constant(0)
        } else if p == 1.0 {
            SamplerKind::Constant(trials)
        } else if p == 0.5 && trials <= 64 {
            SamplerKind::FairWord(if trials == 64 { u64::MAX } else { (1u64 << trials) - 1 })
        } else {
            SamplerKind::General(Binomial::new(trials, p).expect("validated binomial parameters"))
        };
        Self(kind)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match self.0 {
            SamplerKind::Constant(k) => k,
            SamplerKind::FairWord(mask) => u64::from((rng.next_u64() & mask).count_ones()),
            SamplerKind::General(d) => d.sample(rng),
        }
    }
}

/// Draws from `Beta(alpha, beta)`.
pub fn sample_beta<R: Rng + ?Sized>(alpha: f64, beta: f64, rng: &mut R) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::invalid("alpha", "must be positive and finite"));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::invalid("beta", "must be positive and finite"));
    }
    let d = Beta::new(alpha, beta).map_err(|_| Error::invalid("beta", "rejected by sampler"))?;
    Ok(d.sample(rng).clamp(0.0, 1.0))
}

/// `P(X = k)`.
pub fn binomial_pmf(k: u64, params: BinomialParams) -> f64 {
    libm::exp(ln_binomial_pmf(k, params.trials, params.success_prob))
}

/// Exact `P(X >= k)` for `X ~ Binomial(trials, success_prob)`.
///
/// The smaller side of the distribution is summed term by term and the other
/// side is obtained by complement, so results are accurate to about 1e-12
/// relative for any `trials` up to 10⁶.
pub fn binomial_tail(k: i64, params: BinomialParams) -> f64 {
    let n = params.trials;
    if k <= 0 {
        return 1.0;
    }
    let k = k as u64;
    if k > n {
        return 0.0;
    }
    if k as f64 > params.mean() {
        upper_sum(k, params)
    } else {
        1.0 - lower_sum(k - 1, params)
    }
}

/// Exact `P(X <= k)`.
pub fn binomial_cdf(k: i64, params: BinomialParams) -> f64 {
    let n = params.trials;
    if k < 0 {
        return 0.0;
    }
    let k = k as u64;
    if k >= n {
        return 1.0;
    }
    if (k as f64) < params.mean() {
        lower_sum(k, params)
    } else {
        1.0 - upper_sum(k + 1, params)
    }
}

/// Neumaier-compensated accumulator.
#[derive(Default)]
struct Sum {
    total: f64,
    carry: f64,
}

impl Sum {
    fn add(&mut self, x: f64) {
        let t = self.total + x;
        if self.total.abs() >= x.abs() {
            self.carry += (self.total - t) + x;
        } else {
            self.carry += (x - t) + self.total;
        }
        self.total = t;
    }

    fn value(&self) -> f64 {
        self.total + self.carry
    }
}

// Terms are generated by the pmf ratio recurrence and re-anchored to the
// exact pmf every `REANCHOR` steps, which bounds the accumulated rounding.
const REANCHOR: u64 = 64;

// Σ_{j=k}^{n} P(X = j), assuming k is at or above the mode.
fn upper_sum(k: u64, params: BinomialParams) -> f64 {
    let (n, p) = (params.trials, params.success_prob);
    let ratio = p / (1.0 - p);
    let mut sum = Sum::default();
    let mut term = binomial_pmf(k, params);
    let mut j = k;
    loop {
        sum.add(term);
        if j == n || (term < sum.value() * 1e-18 && j as f64 > params.mean()) {
            break;
        }
        term *= (n - j) as f64 / (j + 1) as f64 * ratio;
        j += 1;
        if (j - k) % REANCHOR == 0 {
            term = binomial_pmf(j, params);
        }
    }
    sum.value()
}

// Σ_{j=0}^{k} P(X = j), assuming k is at or below the mode.
fn lower_sum(k: u64, params: BinomialParams) -> f64 {
    let (n, p) = (params.trials, params.success_prob);
    let ratio = (1.0 - p) / p;
    let mut sum = Sum::default();
    let mut term = binomial_pmf(k, params);
    let mut j = k;
    loop {
        sum.add(term);
        if j == 0 || (term < sum.value() * 1e-18 && (j as f64) < params.mean()) {
            break;
        }
        term *= j as f64 / (n - j + 1) as f64 * ratio;
        j -= 1;
        if (k - j) % REANCHOR == 0 {
            term = binomial_pmf(j, params);
        }
    }
    sum.value()
}
