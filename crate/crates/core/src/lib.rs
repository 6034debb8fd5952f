//! Exact parametric Wardrop equilibria for single-commodity networks with
//! piecewise-linear edge costs.
//!
//! The solver follows the equilibrium as the s–t demand `λ` grows from zero,
//! pivoting between regions of the potential space and maintaining the
//! inverse of the reduced Laplacian with rank-one updates. All arithmetic is
//! exact.

pub mod cli;
pub mod costs;
pub mod degeneracy;
pub mod error;
pub mod homotopy;
pub mod instances;
pub mod io;
pub mod linalg;
pub mod network;
pub mod number;
pub mod oracle;

pub use costs::{evaluate_cost, evaluate_inverse, invert_cost, InverseCost, PiecewiseLinearCost};
pub use error::{Error, Result};
pub use homotopy::{run, sample, SolutionCurve, SolverOptions};
pub use instances::InstanceBundle;
pub use network::{build_network, Network};
pub use number::{ExtendedRational, Rational};
