//! Inverse scattering, spectral evolution and long-time asymptotics for the
//! fifth-order modified KdV equation
//!
//! ```text
//! q_t = q_xxxxx + 30 q^4 q_x - 10 q^2 q_xxx - 40 q q_x q_xx - 10 q_x^3
//! ```
//!
//! The crate is organised bottom-up: [`phase`] and [`special`] are pure
//! functions, [`scattering`] maps potentials to reflection data, [`evolution`]
//! integrates the PDE, [`scalar_rhp`] and [`model_rhp`] build the pieces of the
//! steepest-descent analysis, [`asymptotics`] assembles the leading-order
//! prediction and [`harness`] compares it with the simulation.

pub mod asymptotics;
pub mod error;
pub mod evolution;
pub mod harness;
pub mod model_rhp;
pub mod phase;
pub mod quad;
pub mod scalar_rhp;
pub mod scattering;
pub mod special;
pub mod spline;

pub use error::{Error, Result};
pub use num_complex::Complex64;
