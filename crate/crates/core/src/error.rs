use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("arm index {arm} out of range for {arms} arms")]
    ArmOutOfRange { arm: usize, arms: usize },

    #[error("cannot select from an empty index vector")]
    EmptyIndex,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{what} requires {requirement}, got {value}")]
    Domain {
        what: &'static str,
        requirement: &'static str,
        value: f64,
    },

    #[error("reward {0} is outside [0, 1]")]
    RewardOutOfRange(f64),

    #[error("arm has no pulls; use the +inf sentinel instead")]
    NoPulls,

    #[error("function is not nonincreasing: f({x0}) = {f0} < f({x1}) = {f1}")]
    NotMonotone { x0: f64, f0: f64, x1: f64, f1: f64 },

    #[error("enumeration budget exceeded: n = {n} > {max}")]
    EnumerationBudget { n: u64, max: u64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
