use thiserror::Error;

/// Failures raised by the library. Messages are meant for end users.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("phase singular on z-axis: {what} evaluated at rho = {rho:e}")]
    AxisSingular { what: &'static str, rho: f64 },
    #[error("path crosses gauge string (closest approach {distance:e} to the z-axis)")]
    PathCrossesGaugeString { distance: f64 },
    #[error("non-finite integrand value at node {node}")]
    NonFinite { node: String },
    #[error("quadrature order {order} cannot resolve exp(-i p.s/hbar) at |p| = {p}; need order >= {required}")]
    Oscillation { order: usize, required: usize, p: f64 },
    #[error("grid too coarse: requested momentum extent {requested} exceeds Nyquist limit {limit}")]
    Nyquist { requested: f64, limit: f64 },
    #[error("grid too small: {0}")]
    GridTooSmall(String),
    #[error("finite-difference step {step:e} below the 1e-6 floor")]
    StepUnderflow { step: f64 },
    #[error("derivative order {order} exceeds the supported total of {max}")]
    OrderTooHigh { order: usize, max: usize },
    #[error("quadrature did not converge: estimated error {estimate:e} above tolerance {tolerance:e}")]
    NotConverged { estimate: f64, tolerance: f64 },
    #[error("unsupported combination: {0}")]
    Unsupported(String),
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error("kinetic and potential energy integrals diverge separately (axis cutoff dependence {drift:e}); use the combined integrand")]
    DivergentSplit { drift: f64 },
    #[error("density {value:e} too small to divide out at this point")]
    ZeroDensity { value: f64 },
    #[error("momentum quadrature tail {tail:e} above tolerance")]
    TailTooLarge { tail: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
