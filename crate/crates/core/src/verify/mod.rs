//! Cross-checks between the viscous solution, its inviscid limit, and the jump conditions the
//! limit has to satisfy.

pub mod convergence;
pub mod inviscid;
pub mod jumps;
pub mod report;
pub mod test_function;

use thiserror::Error;

use crate::initial_data::DataError;
use crate::variational::VariationalError;
use crate::viscous::ViscousError;

pub use convergence::{convergence_study, ConvergenceReport};
pub use inviscid::{inviscid_weak_residual, InviscidField, LimitField, PiecewiseField};
pub use jumps::{flux_jump_at_source, interface_entropy_measure, one_sided_limits, rankine_hugoniot_at_interface, Which};
pub use report::{CheckRecord, VerifyReport, SCHEMA_VERSION};
pub use test_function::TestFunction;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error(transparent)]
    Viscous(#[from] ViscousError),
    #[error(transparent)]
    Variational(#[from] VariationalError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("no jump at the interface at t = {t}: one-sided values {left} and {right}")]
    NotAShock { t: f64, left: f64, right: f64 },
    #[error("{0}")]
    Domain(String),
}
