//! Stationary Vlasov–Poisson equilibria confined by an external magnetic field.

pub mod characteristics;
pub mod density;
pub mod elliptic;
pub mod equilibrium;
pub mod error;
pub mod model;
pub mod quadrature;

pub use error::{Error, Result};
