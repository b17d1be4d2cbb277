//! Green and Robin functions of a planar annulus, the point-vortex type
//! functional built from them, and solvers for its critical configurations.
//! Those configurations are the candidate concentration sets for
//! `-Δu = λ e^u / ∫ e^u` with zero Dirichlet data.
//!
//! The crate is organized bottom-up:
//!
//! - [`geometry`] and [`series`]: the annulus `a < |x| < b`, point types, and
//!   the truncation policy for every Fourier series below.
//! - [`green`]: the Green function, its regular part, the Robin function and
//!   their gradients, from an explicit Fourier expansion.
//! - [`functional`]: the functional `F` on `l`-point configurations and the
//!   residual whose zeros are its critical points.
//! - [`solver`]: the scalar radius equation for antipodal pairs, a
//!   multi-start critical-point search, and two-point diagnostics.
//! - [`oracle`]: finite-difference and brute-force validators.
//!
//! ```
//! use annulus_core::{Annulus, solver::solve_r0};
//!
//! let ann = Annulus::new(1.0, 2.0)?;
//! let sol = solve_r0(&ann, 1e-12)?;
//! assert!(sol.r0 > 2f64.sqrt() && sol.r0 < 2f64.powf(0.75));
//! # Ok::<(), annulus_core::Error>(())
//! ```

pub mod error;
pub mod functional;
pub mod geometry;
pub mod green;
pub mod oracle;
pub mod series;
pub mod solver;

pub use error::{Error, Result};
pub use functional::{CharResidual, Configuration};
pub use geometry::{to_polar, Annulus, PlanarPoint, PolarPoint};
pub use green::{FourierCoefficients, GradientValue};
pub use series::{auto_truncation, SeriesControl, SeriesPolicy};

// The guide's code blocks run as doctests, one module per chapter.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    mod geometry {}
    #[doc = include_str!("../../../book/src/green.md")]
    mod green {}
    #[doc = include_str!("../../../book/src/functional.md")]
    mod functional {}
    #[doc = include_str!("../../../book/src/two-points.md")]
    mod two_points {}
    #[doc = include_str!("../../../book/src/search.md")]
    mod search {}
    #[doc = include_str!("../../../book/src/validation.md")]
    mod validation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
