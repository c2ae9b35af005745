use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(&'static str),

    /// Mixture parameters violate the model invariants.
    #[error("invalid mixture: {0}")]
    InvalidMixture(String),

    /// A mixture description could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// A moment computation overflowed to a non-finite value. Expected for
    /// very high orders combined with extreme mean/stddev ratios.
    #[error("absolute moment of order {order} is not finite in double precision")]
    NonFiniteMoment { order: u32 },

    /// Adaptive quadrature hit the subdivision cap before reaching tolerance.
    #[error("quadrature did not converge on [{lo}, {hi}] within depth {max_depth}")]
    QuadratureNonConvergence { lo: f64, hi: f64, max_depth: u32 },

    /// No bound order below the requested cap produced a finite value.
    #[error("no finite bound of order <= {max_order}")]
    EmptyBoundSeries { max_order: u32 },

    /// The shift objective was non-finite across the whole bracket.
    #[error("shift optimization failed: objective non-finite on [{lo}, {hi}]")]
    ShiftOptimizationFailed { lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid_mixture(msg: impl Into<String>) -> Self {
        Error::InvalidMixture(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
