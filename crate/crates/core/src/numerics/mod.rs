//! Quadrature, Fourier, finite-difference and automatic-differentiation kernels.

pub mod adaptive;
pub mod diff;
pub mod fourier;
pub mod grid;
pub mod jet;
pub mod parallel;
pub mod quadrature;

pub use adaptive::{breakpoints, integrate_adaptive, AdaptiveSpec, Estimate, QuadValue};
pub use diff::{central_weights, mixed_derivative, DiffStencil, MAX_TOTAL_ORDER};
pub use fourier::{fourier_momentum, inverse_fourier_momentum};
pub use grid::{Axis, Grid3, NamedAxis, SampledField};
pub use jet::Jet;
pub use quadrature::{integrate, Domain, QuadKind, QuadratureSpec, Rule1D};
