use thiserror::Error;

/// Errors raised by the bound machinery.
///
/// Variants split into two families: precondition failures (the input is
/// outside the domain of a formula) and falsification events (a computed
/// quantity violates a bound the construction is supposed to satisfy).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(
        "surface S_{{{genus},{punctures}}} is not hyperbolic (euler characteristic {chi} >= 0)"
    )]
    NotHyperbolic {
        genus: u64,
        punctures: u64,
        chi: i64,
    },

    #[error("invalid rational ray {p}/{q}: {reason}")]
    InvalidRay {
        p: u64,
        q: u64,
        reason: &'static str,
    },

    #[error("out of domain: {0}")]
    OutOfDomain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("twist target is not a multicurve: curves {0} and {1} intersect")]
    NotMulticurve(usize, usize),

    #[error("vacuous bound: |chi| = {abs_chi} does not exceed N = {n}")]
    VacuousBound { abs_chi: u64, n: f64 },

    #[error("no mixing number within cap {cap}")]
    MixingAbsent { cap: usize },

    #[error("bound violated: {0}")]
    Falsified(String),
}

impl Error {
    /// True for events where a computed value contradicts a claimed bound.
    pub fn is_falsification(&self) -> bool {
        matches!(self, Error::Falsified(_) | Error::MixingAbsent { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
