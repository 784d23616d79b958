use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The pair (chi, tau) cannot come from a simply connected 4-manifold.
    #[error("non-realizable characteristic numbers chi={chi}, tau={tau}: {reason}")]
    NonRealizable { chi: i64, tau: i64, reason: String },

    #[error("degenerate polarization: {0}")]
    DegeneratePolarization(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("metric is not positive definite at {point:?}")]
    SingularMetric { point: [f64; 4] },

    #[error("finite-difference step {step} reaches the chart puncture from {point:?}")]
    StepTooLarge { point: [f64; 4], step: f64 },

    #[error("quadrature unconverged for {quantity}: relative change {change:.3e} on refinement")]
    QuadratureUnconverged { quantity: String, change: f64 },
}
