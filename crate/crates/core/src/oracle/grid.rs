//! Initialization-free sweep for the two-point configuration.
//!
//! With the first point fixed on the ray `θ = 0`, the functional depends on
//! `(r_1, r_2, Δθ)`. It grows without bound toward either circle in the
//! radii and falls without bound toward the diagonal in `Δθ`, so the
//! critical pair is a min-max: for each pair of radius cells take the best
//! separation (largest value over `Δθ`), then the radius pair whose best
//! value is smallest.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::functional::Configuration;
use crate::geometry::{Annulus, PolarPoint};
use crate::green::{green_unchecked, robin_radius};
use crate::series::{SeriesControl, SeriesPolicy};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridOptimum {
    pub config: Configuration,
    pub r1: f64,
    pub r2: f64,
    pub delta_theta: f64,
    pub value: f64,
    /// Cell indices `(i1, i2, k)`.
    pub cell: (usize, usize, usize),
}

/// Sweeps cell centres `r = a + (i + ½)(b - a)/n` and `Δθ = (k + ½)2π/n`.
/// Cells on the diagonal (same radius cell, `Δθ` in the first or last
/// angular bin) are skipped.
pub fn grid_minimize_two_point(ann: &Annulus, n_grid: usize) -> Result<GridOptimum> {
    if n_grid < 8 {
        return Err(Error::InvalidArgument(format!(
            "grid must have at least 8 cells per axis (got {n_grid})"
        )));
    }
    let n = n_grid;
    let policy = SeriesPolicy::new(1e-12)?;
    let radius = |i: usize| ann.a() + (i as f64 + 0.5) * ann.width() / n as f64;
    let angle = |k: usize| (k as f64 + 0.5) * TAU / n as f64;

    let robin: Vec<f64> = (0..n)
        .map(|i| {
            let r = radius(i);
            let order = SeriesControl::for_radii(ann, &[r], policy).map(|c| c.m_used)?;
            Ok(robin_radius(ann, r, order))
        })
        .collect::<Result<_>>()?;

    let mut best: Option<(f64, usize, usize, usize)> = None;
    for i1 in 0..n {
        for i2 in i1..n {
            let (r1, r2) = (radius(i1), radius(i2));
            let order = SeriesControl::for_pair(ann, r1, r2, policy)?.m_used;
            let x = PolarPoint::new(r1, 0.0)?;
            let mut inner: Option<(f64, usize)> = None;
            for k in 0..n {
                if i1 == i2 && (k == 0 || k == n - 1) {
                    continue;
                }
                let y = PolarPoint::new(r2, angle(k))?;
                let value = robin[i1] + robin[i2] - 2.0 * green_unchecked(ann, &x, &y, order)?;
                if inner.is_none_or(|(v, _)| value > v) {
                    inner = Some((value, k));
                }
            }
            let Some((value, k)) = inner else { continue };
            if best.is_none_or(|(v, ..)| value < v) {
                best = Some((value, i1, i2, k));
            }
        }
    }
    let (value, i1, i2, k) = best.expect("grid has admissible cells");
    let (r1, r2, dt) = (radius(i1), radius(i2), angle(k));
    let config = Configuration::new(vec![PolarPoint::new(r1, 0.0)?, PolarPoint::new(r2, dt)?])?;
    Ok(GridOptimum {
        config,
        r1,
        r2,
        delta_theta: dt,
        value,
        cell: (i1, i2, k),
    })
}
