use crate::regimes::Regime;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {name} = {value} ({requirement})")]
    Domain {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },
    /// The operation is not defined for the classified regime.
    #[error("{operation} is not defined in the {regime} regime")]
    WrongRegime {
        operation: &'static str,
        regime: Regime,
    },
    /// An iterative solver hit its iteration cap.
    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },
    /// A root finder was handed an interval without a sign change.
    #[error("no sign change on [{lo}, {hi}] (f(lo) = {f_lo}, f(hi) = {f_hi})")]
    NoBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    /// Quadrature exhausted its node budget before meeting tolerance.
    #[error("quadrature failed to reach tolerance (estimate {estimate}, error {error}, {nodes} nodes)")]
    Quadrature {
        estimate: f64,
        error: f64,
        nodes: usize,
    },
    #[error("unsupported dimension d = {0}; this operation requires d = 1")]
    UnsupportedDimension(u32),
    #[error("radial profile is not nonincreasing")]
    NotMonotone,
    #[error("negative sample {value} at index {index}")]
    NegativeSample { index: usize, value: f64 },
    #[error("sampled fields live on different grids")]
    GridMismatch,
    #[error("signal sampled on [{have_lo}, {have_hi}] does not cover [{need_lo}, {need_hi}]")]
    InsufficientSupport {
        have_lo: f64,
        have_hi: f64,
        need_lo: f64,
        need_hi: f64,
    },
    #[error("field has no samples")]
    EmptyField,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require(cond: bool, name: &'static str, value: f64, requirement: &'static str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            requirement,
        })
    }
}
