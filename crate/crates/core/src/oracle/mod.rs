//! Independent validators for the analytic modules.
//!
//! Nothing here calls the analytic gradient code. Gradients are checked
//! against central differences of values, harmonicity against a 5-point
//! Laplacian, and Green values against a finite-difference Poisson solve
//! that uses no series at all.

mod boundary;
mod fd;
mod grid;
mod poisson;
mod suites;

pub use boundary::{boundary_residual, BOUNDARY_Q_CAP};
pub use fd::{central_gradient, fd_harmonic_check, laplacian_report, FDReport};
pub use grid::{grid_minimize_two_point, GridOptimum};
pub use poisson::{fd_poisson_green, PolarGrid};
pub use suites::{run_suite, sample_interior_points, CheckResult, Suite, ValidationSummary};
