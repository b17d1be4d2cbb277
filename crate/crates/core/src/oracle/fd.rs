use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{to_polar, Annulus, PlanarPoint, PolarPoint};
use crate::green::regular_part_unchecked;
use crate::series::{SeriesControl, SeriesPolicy};

/// Discrete-Laplacian residuals at spacings `h` and `h/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FDReport {
    pub h: f64,
    pub residual_h: f64,
    pub residual_h2: f64,
    /// `log2(residual_h / residual_h2)`; about 2 for a smooth harmonic target.
    pub order_estimate: f64,
}

fn five_point(f: &impl Fn(PlanarPoint) -> f64, x: PlanarPoint, h: f64) -> f64 {
    let e = |dx: f64, dy: f64| f(PlanarPoint::new(x.x1 + dx, x.x2 + dy));
    // pair opposite neighbours before subtracting the centre
    let sum = (e(h, 0.0) + e(-h, 0.0)) + (e(0.0, h) + e(0.0, -h));
    (sum - 4.0 * f(x)) / (h * h)
}

/// Max 5-point Laplacian of `f` over `samples` at `h` and `h/2`.
pub fn laplacian_report(
    f: impl Fn(PlanarPoint) -> f64,
    samples: &[PlanarPoint],
    h: f64,
) -> FDReport {
    let max_at = |step: f64| {
        samples
            .iter()
            .map(|&x| five_point(&f, x, step).abs())
            .fold(0.0, f64::max)
    };
    let residual_h = max_at(h);
    let residual_h2 = max_at(0.5 * h);
    FDReport {
        h,
        residual_h,
        residual_h2,
        order_estimate: (residual_h / residual_h2).log2(),
    }
}

/// Harmonicity of the regular part `u(·, y)` at each sample.
pub fn fd_harmonic_check(
    ann: &Annulus,
    y: &PolarPoint,
    samples: &[PolarPoint],
    h: f64,
) -> Result<FDReport> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "grid spacing must be positive (got {h})"
        )));
    }
    ann.check_interior(y.r)?;
    let reach = 4.0 * h;
    let mut radii = vec![y.r];
    for x in samples {
        if x.r - ann.a() < reach || ann.b() - x.r < reach {
            return Err(Error::SampleTooClose(format!(
                "sample at r = {} is within 4h = {reach} of the boundary",
                x.r
            )));
        }
        if x.distance(y) < reach {
            return Err(Error::SampleTooClose(format!(
                "sample at ({}, {}) is within 4h = {reach} of the pole",
                x.r, x.theta
            )));
        }
        radii.extend([x.r - h, x.r + h]);
    }
    // a fixed truncation is itself exactly harmonic
    let order = SeriesControl::for_radii(ann, &radii, SeriesPolicy::new(1e-14)?)?.m_used;
    let u = |p: PlanarPoint| {
        let x = to_polar(p).expect("samples stay away from the origin");
        regular_part_unchecked(ann, &x, y, order)
    };
    let planar: Vec<PlanarPoint> = samples.iter().map(PolarPoint::to_planar).collect();
    Ok(laplacian_report(u, &planar, h))
}

/// Central-difference gradient of `f` at `x`.
pub fn central_gradient(f: impl Fn(PlanarPoint) -> f64, x: PlanarPoint, h: f64) -> PlanarPoint {
    let d1 =
        (f(PlanarPoint::new(x.x1 + h, x.x2)) - f(PlanarPoint::new(x.x1 - h, x.x2))) / (2.0 * h);
    let d2 =
        (f(PlanarPoint::new(x.x1, x.x2 + h)) - f(PlanarPoint::new(x.x1, x.x2 - h))) / (2.0 * h);
    PlanarPoint::new(d1, d2)
}
