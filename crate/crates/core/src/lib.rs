//! Numerical toolkit for contact flows, logarithmic potentials and
//! quasiconformal maps on the first Heisenberg group.

pub mod construct;
pub mod contact;
pub mod error;
pub mod flow;
pub mod grid;
pub mod group;
pub mod iterate;
pub mod metric;
pub mod potential;
pub mod quadrature;

pub use error::{Error, Result};
pub use group::{Point, QuadratureConfig};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
