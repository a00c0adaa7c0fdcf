//! Explicit viscous solution through the Hopf-Cole transform.
//!
//! theta = exp(-(1/2eps) int u) solves theta_t = eps theta_xx - H(x) theta / (2 eps); the two
//! half-lines are glued at x = 0 by the common boundary value g(t) and matched fluxes.

pub mod field;
pub mod kernel;
pub mod residual;
pub mod split;
pub mod trace;

use thiserror::Error;

use crate::quadrature::QuadError;

pub use field::{field_point, heat, heat_left, heat_right, velocity, FieldPoint, HalfLine, LogHeatValue};
pub use residual::{pde_residual_theta, viscous_weak_residual, WeakGrid};
pub use split::{split_terms_left, split_terms_right, SplitTerms};
pub use trace::{boundary_g, source_kernel_f, BoundaryTrace};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ViscousError {
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error("time {t} outside the trace range [0, {end}]")]
    OutOfRange { t: f64, end: f64 },
    #[error("theta is not positive at ({x}, {t}); quadrature tolerance too loose")]
    InvalidSign { x: f64, t: f64 },
    #[error("theta vanished at ({x}, {t}); cannot form the velocity quotient")]
    DivisionUnstable { x: f64, t: f64 },
    #[error("boundary value g({t}) = {value} is not positive")]
    NonPositiveTrace { t: f64, value: f64 },
    #[error("{what} overflowed at t = {t}")]
    Overflow { what: &'static str, t: f64 },
    #[error("{0}")]
    Domain(String),
}
