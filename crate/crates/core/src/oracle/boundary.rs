use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::geometry::{Annulus, PolarPoint};
use crate::green::regular_part_unchecked;

/// Largest admissible `a/|y|` and `|y|/b` for boundary sampling.
pub const BOUNDARY_Q_CAP: f64 = 0.95;

/// Max of `|u(x, y) - ln|x - y||` over `n_samples` equally spaced angles on
/// both circles, with the series cut after `order` terms.
pub fn boundary_residual(
    ann: &Annulus,
    y: &PolarPoint,
    order: usize,
    n_samples: usize,
) -> Result<f64> {
    ann.check_interior(y.r)?;
    let q = (ann.a() / y.r).max(y.r / ann.b());
    if q > BOUNDARY_Q_CAP {
        return Err(Error::InvalidArgument(format!(
            "pole too close to the boundary for sampling (ratio {q} exceeds {BOUNDARY_Q_CAP})"
        )));
    }
    if n_samples == 0 {
        return Err(Error::InvalidArgument(
            "need at least one boundary sample".into(),
        ));
    }
    let mut worst: f64 = 0.0;
    for k in 0..n_samples {
        let theta = TAU * k as f64 / n_samples as f64;
        for r in [ann.a(), ann.b()] {
            let x = PolarPoint::new(r, theta)?;
            let u = regular_part_unchecked(ann, &x, y, order);
            worst = worst.max((u - x.distance(y).ln()).abs());
        }
    }
    Ok(worst)
}
