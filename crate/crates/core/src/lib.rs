//! Burgers' equation with a point source: explicit viscous solution, inviscid limit, and checks
//! tying the two together.

// `!(x > 0.0)` is used on purpose: it rejects NaN along with the bad range
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// quadrature nodes are tabulated to more digits than a double holds
#![allow(clippy::excessive_precision)]

pub mod cli;
pub mod initial_data;
pub mod par;
pub mod quadrature;
pub mod specfun;
pub mod variational;
pub mod verify;
pub mod viscous;

pub use initial_data::{DataError, InitialData, Viscosity};
pub use quadrature::QuadratureSpec;
pub use variational::{SearchSpec, Side};
