//! Numerical laboratory for the Reeb flow of a two-degree-of-freedom
//! Hamiltonian whose energy surface `H = 1/2` is a star-shaped 3-sphere.
//!
//! The crate computes the three binding orbits and their periods,
//! Conley–Zehnder indices (winding intervals, closed-form linearizations and
//! asymptotic-operator spectra), linking and self-linking numbers, the explicit
//! pseudo-holomorphic leaves of the `y2 = 0` ansatz, and assembles everything
//! into a hypothesis report.

pub mod config;
pub mod eigen;
pub mod error;
pub mod index;
pub mod knots;
pub mod leaves;
pub mod model;
pub mod ode;
pub mod orbits;
pub mod path;
pub mod plot;
pub mod spectrum;
pub mod validate;

pub use config::{Config, Preset};
pub use error::{Error, Result};
pub use model::{HamiltonianParams, State4};
