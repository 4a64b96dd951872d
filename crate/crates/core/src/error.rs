use thiserror::Error;

/// Errors produced by the evaluators and the oracle.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported dimension `{0}` (expected length, time, force or energy)")]
    UnsupportedDimension(String),

    #[error("position {position:?} lies outside the cavity")]
    OutsideBox { position: [f64; 3] },

    #[error("mode geometry mismatch: {0}")]
    GeometryMismatch(&'static str),

    #[error("zero wavevector has no transverse projector")]
    ZeroWavevector,

    #[error("mode count estimate {estimate} exceeds budget {budget}")]
    ModeBudgetExceeded { estimate: u64, budget: u64 },

    #[error("offset must satisfy |d| < L/2 (got d = {offset:e}, L/2 = {half_gap:e})")]
    OffsetOutOfRange { offset: f64, half_gap: f64 },

    #[error(
        "mean force vanishes at the midplane (d = 0); relative fluctuation is undefined/divergent"
    )]
    MidplaneDivergence,

    #[error("root not bracketed: f({lo:e}) = {f_lo:e}, f({hi:e}) = {f_hi:e}")]
    BracketFailure {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("ratio is not strictly monotone on the bracket near x = {at:e}")]
    NotMonotone { at: f64 },

    #[error("root finder failed: {0}")]
    RootFinder(String),

    #[error("non-monotone extrapolation trace: {trace:?}")]
    NonMonotoneExtrapolation { trace: Vec<f64> },

    #[error(
        "Monte Carlo relative standard error {relative_se:.3e} exceeds half the tolerance {tolerance:.3e}; increase samples (currently {samples})"
    )]
    MonteCarloTooNoisy {
        relative_se: f64,
        tolerance: f64,
        samples: u64,
    },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "{name} must be finite and > 0 (got {value:e})"
        )))
    }
}
