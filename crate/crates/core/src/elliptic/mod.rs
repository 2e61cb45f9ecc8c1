//! Structured grids, the discrete operator `−L + K`, and linear solves.

mod field;
mod grid;
mod mms;
mod operator;

pub use field::ScalarField;
pub use grid::{build_grid, Arms, Grid, Lattice, NodeKind};
pub use mms::{least_squares_slope, mms_convergence, mms_error};
pub use operator::{assemble_operator, solve_linear, BoundaryData, DiscreteOperator, LinearSolver, DIRECT_LIMIT};
