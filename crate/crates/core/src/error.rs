use thiserror::Error;

/// Errors shared by every numerical module in the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("tolerance not met after {subdivisions} subdivisions (error estimate {error_estimate:.3e}, target {target:.3e})")]
    ToleranceNotMet {
        subdivisions: usize,
        error_estimate: f64,
        target: f64,
    },

    #[error("non-finite integrand sample at {point:.6e}")]
    NonFiniteSample { point: f64 },

    #[error("endpoint exponent {0} is not integrable (must be > -1)")]
    ExponentNotIntegrable(f64),

    #[error("tail estimate {estimate:.3e} exceeds tail tolerance {tol:.3e} at cutoff {cutoff:.3e}")]
    TailNotCertified {
        estimate: f64,
        tol: f64,
        cutoff: f64,
    },

    #[error("hypergeometric series did not converge within {0} terms")]
    SeriesNotConverged(usize),

    #[error("divergent parameter combination: {0}")]
    DivergentParameters(String),

    #[error("difference stencil leaves the domain: y = {y:.6e}, h = {h:.3e}")]
    StencilOutOfDomain { y: f64, h: f64 },

    #[error("ill-conditioned quotient: reference transform {0:.3e} below threshold")]
    IllConditionedQuotient(f64),

    #[error("multiplier quotient spread {spread:.3e} across references exceeds {limit:.3e}")]
    QuotientUnstable { spread: f64, limit: f64 },

    #[error("norm divergence: {0}")]
    NormDivergence(String),

    #[error("degenerate substitution: kernel form requires x > 0")]
    DegenerateSubstitution,

    #[error("argument z = {z:.6e} outside admissible window [{lo:.6e}, {hi:.6e}]")]
    OutsideWindow { z: f64, lo: f64, hi: f64 },

    #[error("calibration residual {residual:.3e} above ceiling {ceiling:.3e}")]
    CalibrationFailed { residual: f64, ceiling: f64 },

    #[error("maximal-function denominator vanished while numerator {0:.3e} > 0")]
    DominationDenominatorZero(f64),

    #[error("unknown test function: {0}")]
    UnknownFunction(String),

    #[error("zero input norm for {0}")]
    ZeroInputNorm(String),
}

pub type Result<T> = std::result::Result<T, Error>;
