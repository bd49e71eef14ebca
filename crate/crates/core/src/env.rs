//! Bandit environments with rewards in `[0, 1]`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

use rand::Rng;

use crate::dist::sample_beta;
use crate::{Error, Result};

/// Reward distribution family shared by all arms of an instance.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "lowercase"))]
pub enum Family {
    /// `Ber(μ)`.
    Bernoulli,
    /// `Beta(vμ, v(1 − μ))`.
    Beta { v: f64 },
    /// Raw rewards on `[low, high]`, rescaled to `[0, 1]` before the policy
    /// sees them. The raw reward is `high` with probability `μ` and `low`
    /// otherwise.
    Rescaled { low: f64, high: f64 },
}

impl Family {
    fn validate(&self) -> Result<()> {
        match *self {
            Family::Bernoulli => Ok(()),
            Family::Beta { v } if v > 0.0 && v.is_finite() => Ok(()),
            Family::Beta { .. } => Err(Error::invalid("v", "beta concentration must be positive")),
            Family::Rescaled { low, high } if low < high && low.is_finite() && high.is_finite() => Ok(()),
            Family::Rescaled { .. } => Err(Error::invalid("high", "rescaling needs low < high")),
        }
    }

    fn check_mean(&self, mean: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&mean) {
            return Err(Error::invalid("mean", format!("{mean} is outside [0, 1]")));
        }
        if let Family::Beta { .. } = self {
            if mean <= 0.0 || mean >= 1.0 {
                return Err(Error::invalid(
                    "mean",
                    format!("beta arms need a mean in (0, 1), got {mean}"),
                ));
            }
        }
        Ok(())
    }
}

/// An immutable K-armed bandit problem.
#[derive(Debug, Clone, PartialEq)]
pub struct BanditInstance {
    means: Vec<f64>,
    family: Family,
    gaps: Vec<f64>,
}

impl BanditInstance {
    pub fn new(means: Vec<f64>, family: Family) -> Result<Self> {
        family.validate()?;
        if means.is_empty() {
            return Err(Error::invalid("means", "an instance needs at least one arm"));
        }
        for &m in &means {
            family.check_mean(m)?;
        }
        let best = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let gaps = means.iter().map(|&m| best - m).collect();
        Ok(Self { means, family, gaps })
    }

    pub fn bernoulli(means: Vec<f64>) -> Result<Self> {
        Self::new(means, Family::Bernoulli)
    }

    pub fn arms(&self) -> usize {
        self.means.len()
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// `Δ_i = max_j μ_j − μ_i`; zero for every optimal arm.
    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn max_gap(&self) -> f64 {
        self.gaps.iter().copied().fold(0.0, f64::max)
    }

    /// Samples a reward of `arm`.
    pub fn pull<R: Rng + ?Sized>(&self, arm: usize, rng: &mut R) -> Result<f64> {
        let mean = *self
            .means
            .get(arm)
            .ok_or(Error::ArmOutOfRange { arm, arms: self.arms() })?;
        Ok(match self.family {
            Family::Bernoulli => bernoulli(mean, rng),
            Family::Beta { v } => sample_beta(v * mean, v * (1.0 - mean), rng)?,
            Family::Rescaled { low, high } => {
                let raw = if rng.random::<f64>() < mean { high } else { low };
                rescale_reward(raw, low, high)?.value
            }
        })
    }

    /// Serializes to the plain-text instance record: a header line naming the
    /// family, then one `mean` per line.
    pub fn to_record(&self) -> String {
        let mut out = String::new();
        match self.family {
            Family::Bernoulli => out.push_str("family bernoulli\n"),
            Family::Beta { v } => {
                let _ = writeln!(out, "family beta {v}");
            }
            Family::Rescaled { low, high } => {
                let _ = writeln!(out, "family rescaled {low} {high}");
            }
        }
        for m in &self.means {
            let _ = writeln!(out, "{m}");
        }
        out
    }

    /// Parses [`BanditInstance::to_record`] output. Blank lines and `#`
    /// comments are ignored.
    pub fn from_record(text: &str) -> Result<Self> {
        let mut family = None;
        let mut means = Vec::new();
        let mut family_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let head = fields.next().unwrap_or("");
            if head == "family" {
                if family.is_some() {
                    return Err(parse_err(line_no, "duplicate family line"));
                }
                let name = fields.next().ok_or_else(|| parse_err(line_no, "missing family name"))?;
                let params: Vec<f64> = fields
                    .map(|f| {
                        f.parse::<f64>()
                            .map_err(|_| parse_err(line_no, format!("bad number `{f}`")))
                    })
                    .collect::<Result<_>>()?;
                family = Some(match (name, params.as_slice()) {
                    ("bernoulli", []) => Family::Bernoulli,
                    ("beta", [v]) => Family::Beta { v: *v },
                    ("rescaled", [low, high]) => Family::Rescaled { low: *low, high: *high },
                    _ => return Err(parse_err(line_no, format!("unknown family spec `{line}`"))),
                });
                family_line = line_no;
                continue;
            }
            if fields.next().is_some() {
                return Err(parse_err(line_no, "expected a single mean per line"));
            }
            let mean = head
                .parse::<f64>()
                .map_err(|_| parse_err(line_no, format!("bad mean `{head}`")))?;
            means.push((line_no, mean));
        }
        let family = family.ok_or_else(|| parse_err(1, "missing `family` line"))?;
        family.validate().map_err(|e| parse_err(family_line, format!("{e}")))?;
        for &(line_no, m) in &means {
            family.check_mean(m).map_err(|e| parse_err(line_no, format!("{e}")))?;
        }
        Self::new(means.into_iter().map(|(_, m)| m).collect(), family)
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn bernoulli<R: Rng + ?Sized>(p: f64, rng: &mut R) -> f64 {
    if rng.random::<f64>() < p {
        1.0
    } else {
        0.0
    }
}

/// Result of [`rescale_reward`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rescaled {
    pub value: f64,
    /// The raw reward was outside `[low, high]` and has been clamped.
    pub clamped: bool,
}

/// Maps a raw reward on `[low, high]` to `(y − low) / (high − low)`.
pub fn rescale_reward(y: f64, low: f64, high: f64) -> Result<Rescaled> {
    if !(high > low) || !low.is_finite() || !high.is_finite() {
        return Err(Error::invalid("high", "rescaling needs finite low < high"));
    }
    if y.is_nan() {
        return Err(Error::invalid("y", "reward is NaN"));
    }
    let clamped = y < low || y > high;
    let value = ((y.clamp(low, high) - low) / (high - low)).clamp(0.0, 1.0);
    Ok(Rescaled { value, clamped })
}

/// Recipe for random problems: `arms` means drawn i.i.d. uniform on
/// `[mean_low, mean_high]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemGenSpec {
    pub arms: usize,
    pub mean_low: f64,
    pub mean_high: f64,
    pub family: Family,
}

impl ProblemGenSpec {
    pub fn validate(&self) -> Result<()> {
        if self.arms == 0 {
            return Err(Error::invalid("arms", "need at least one arm"));
        }
        if !(0.0 <= self.mean_low && self.mean_low <= self.mean_high && self.mean_high <= 1.0) {
            return Err(Error::invalid("mean_low", "need 0 <= mean_low <= mean_high <= 1"));
        }
        self.family.validate()?;
        self.family.check_mean(self.mean_low)?;
        self.family.check_mean(self.mean_high)
    }
}

/// Draws a random instance from `spec`.
pub fn generate_problem<R: Rng + ?Sized>(spec: &ProblemGenSpec, rng: &mut R) -> Result<BanditInstance> {
    spec.validate()?;
    let width = spec.mean_high - spec.mean_low;
    let means = (0..spec.arms)
        .map(|_| (spec.mean_low + width * rng.random::<f64>()).min(spec.mean_high))
        .collect();
    BanditInstance::new(means, spec.family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{derive_stream, SeedSpec};
    use alloc::vec;

    fn rng() -> crate::rng::Stream {
        derive_stream(SeedSpec::new(11, 0, 0))
    }

    #[test]
    fn gaps_are_distance_to_best() {
        let inst = BanditInstance::bernoulli(vec![0.2, 0.7, 0.5, 0.7]).unwrap();
        assert_eq!(inst.gaps(), &[0.7 - 0.2, 0.0, 0.7 - 0.5, 0.0]);
        assert_eq!(inst.max_gap(), 0.7 - 0.2);
    }

    #[test]
    fn degenerate_bernoulli_arm() {
        let inst = BanditInstance::bernoulli(vec![1.0, 0.0]).unwrap();
        let mut r = rng();
        for _ in 0..100 {
            assert_eq!(inst.pull(0, &mut r).unwrap(), 1.0);
            assert_eq!(inst.pull(1, &mut r).unwrap(), 0.0);
        }
    }

    #[test]
    fn pull_out_of_range() {
        let inst = BanditInstance::bernoulli(vec![0.5]).unwrap();
        assert_eq!(inst.pull(1, &mut rng()), Err(Error::ArmOutOfRange { arm: 1, arms: 1 }));
    }

    #[test]
    fn invalid_instances() {
        assert!(BanditInstance::bernoulli(vec![]).is_err());
        assert!(BanditInstance::bernoulli(vec![1.2]).is_err());
        assert!(BanditInstance::new(vec![0.0, 0.5], Family::Beta { v: 4.0 }).is_err());
        assert!(BanditInstance::new(vec![0.5], Family::Beta { v: 0.0 }).is_err());
        assert!(BanditInstance::new(vec![0.5], Family::Rescaled { low: 1.0, high: 1.0 }).is_err());
    }

    #[test]
    fn rescale_examples() {
        assert_eq!(rescale_reward(-1.0, -1.0, 5.0).unwrap().value, 0.0);
        assert_eq!(rescale_reward(5.0, -1.0, 5.0).unwrap().value, 1.0);
        assert_eq!(
            rescale_reward(2.0, -1.0, 5.0).unwrap(),
            Rescaled {
                value: 0.5,
                clamped: false
            }
        );
        assert_eq!(
            rescale_reward(7.0, -1.0, 5.0).unwrap(),
            Rescaled {
                value: 1.0,
                clamped: true
            }
        );
        assert_eq!(
            rescale_reward(-3.0, -1.0, 5.0).unwrap(),
            Rescaled {
                value: 0.0,
                clamped: true
            }
        );
        assert!(rescale_reward(0.0, 1.0, 1.0).is_err());
        assert!(rescale_reward(0.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn rescaled_family_emits_endpoints() {
        let inst = BanditInstance::new(vec![0.5], Family::Rescaled { low: -1.0, high: 5.0 }).unwrap();
        let mut r = rng();
        for _ in 0..100 {
            let y = inst.pull(0, &mut r).unwrap();
            assert!(y == 0.0 || y == 1.0);
        }
    }

    #[test]
    fn generate_within_interval() {
        let spec = ProblemGenSpec {
            arms: 10,
            mean_low: 0.25,
            mean_high: 0.75,
            family: Family::Bernoulli,
        };
        let inst = generate_problem(&spec, &mut rng()).unwrap();
        assert_eq!(inst.arms(), 10);
        assert!(inst.means().iter().all(|m| (0.25..=0.75).contains(m)));
    }

    #[test]
    fn generate_degenerate_interval() {
        let spec = ProblemGenSpec {
            arms: 1,
            mean_low: 0.5,
            mean_high: 0.5,
            family: Family::Bernoulli,
        };
        let inst = generate_problem(&spec, &mut rng()).unwrap();
        assert_eq!(inst.means(), &[0.5]);
        assert_eq!(inst.gaps(), &[0.0]);
    }

    #[test]
    fn generate_rejects_bad_spec() {
        let spec = ProblemGenSpec {
            arms: 3,
            mean_low: 0.8,
            mean_high: 0.2,
            family: Family::Bernoulli,
        };
        assert!(generate_problem(&spec, &mut rng()).is_err());
    }

    #[test]
    fn record_round_trip() {
        let inst = BanditInstance::new(vec![0.1, 0.30000000000000004, 0.9], Family::Beta { v: 4.0 }).unwrap();
        assert_eq!(BanditInstance::from_record(&inst.to_record()).unwrap(), inst);
    }

    #[test]
    fn record_parse_errors_are_line_anchored() {
        let err = BanditInstance::from_record("family bernoulli\n0.5\nabc\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = BanditInstance::from_record("family beta 4\n# c\n0.0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        assert!(BanditInstance::from_record("0.5\n").is_err());
    }
}
