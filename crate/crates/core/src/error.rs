use thiserror::Error;

/// Domain and numerical-guard errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("overlap must satisfy 0 < x < 1, got {0}")]
    OverlapRange(f64),

    #[error("qubit count must be at least 1")]
    QubitCount,

    #[error("control must satisfy |u| <= 1, got {0}")]
    ControlBound(f64),

    #[error("segment duration must be positive and finite, got {0}")]
    Duration(f64),

    #[error("duration must be non-negative, got {0}")]
    NegativeDuration(f64),

    #[error("need at least {min} {what}, got {got}")]
    TooFew {
        what: &'static str,
        min: usize,
        got: usize,
    },

    #[error("first and last bangs (2 * t1 = {two_t1}) must fit strictly inside tf = {tf}")]
    BangOverrun { two_t1: f64, tf: f64 },

    #[error("switching-time relation is singular at t1 = {0} (sin t1 = 0)")]
    TangentSingular(f64),

    #[error("closed-form optimum undefined for x = {0} (cos t1 leaves [-1, 1])")]
    OptimumUndefined(f64),

    #[error("theta = {0} is inside the polar guard band")]
    PoleBand(f64),

    #[error("phi = {0} has sin(phi) = 0; coordinate frame degenerate there")]
    PhiPole(f64),

    #[error("point is not on the singular arc (alpha = {alpha})")]
    NotOnArc { alpha: f64 },

    #[error("sweep range must satisfy 1 <= n_min <= n_max <= 60, got {lo}..={hi}")]
    SweepRange { lo: u32, hi: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
