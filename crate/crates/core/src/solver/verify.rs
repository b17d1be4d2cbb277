use serde::Serialize;

use super::profile::solve_r0;
use super::search::CriticalPointReport;
use crate::error::{Error, Result};
use crate::functional::{
    char_residual, configuration_control, subtract_bracket, subtract_identity, Configuration,
};
use crate::geometry::Annulus;
use crate::series::SeriesPolicy;

/// Tail tolerance for the series evaluated here; `tol` is the acceptance
/// threshold, not the truncation target.
const SERIES_TOL: f64 = 1e-16;

/// Orders at which the bracketed factor is compared with its lower bound.
pub const BRACKET_ORDERS: usize = 50;

/// The subtracted two-point identity evaluated at a pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubtractCheck {
    /// `(|P2|² - |P1|²) / |P2 - P1|²`.
    pub lhs: f64,
    /// The series side.
    pub rhs: f64,
    /// `lhs - rhs`.
    pub difference: f64,
    /// `e_2·P_2 - e_1·P_1`, which `difference` must reproduce.
    pub projected_residual_difference: f64,
    /// Every bracketed factor for `m <= BRACKET_ORDERS` dominates its bound.
    pub bracket_dominates: bool,
    /// Smallest `factor - bound` seen.
    pub min_bracket_margin: f64,
}

/// Diagnostics of a candidate pair: distance from antipodality, from the
/// radius `r0`, the residual norm, and the subtracted identity.
pub fn verify_two_point(
    ann: &Annulus,
    config: &Configuration,
    tol: f64,
) -> Result<CriticalPointReport> {
    if config.len() != 2 {
        return Err(Error::InvalidArgument(format!(
            "two-point verification needs exactly 2 points (got {})",
            config.len()
        )));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    let policy = SeriesPolicy::new(SERIES_TOL)?;
    let ctrl = configuration_control(ann, config, policy)?;
    let r0 = solve_r0(ann, tol)?.r0;
    let residual = char_residual(ann, config, &ctrl)?;
    let (p1, p2) = (&config.points()[0], &config.points()[1]);
    let sides = subtract_identity(ann, p1, p2, &ctrl)?;
    let projected = residual.vectors[1].radial_part * p2.r - residual.vectors[0].radial_part * p1.r;

    let mut min_margin = f64::INFINITY;
    for m in 1..=BRACKET_ORDERS {
        let (factor, bound) = subtract_bracket(ann, p1, p2, m);
        min_margin = min_margin.min(factor - bound);
    }

    let mut report = CriticalPointReport::bare(0, config.clone(), residual.norm);
    report.converged = residual.norm < tol;
    report.diagnose(Some(r0));
    report.subtract = Some(SubtractCheck {
        lhs: sides.lhs,
        rhs: sides.rhs,
        difference: sides.lhs - sides.rhs,
        projected_residual_difference: projected,
        bracket_dominates: min_margin >= -1e-14,
        min_bracket_margin: min_margin,
    });
    Ok(report)
}
