//! Green function of the annulus with Dirichlet data, its regular part, the
//! Robin function, and gradients.
//!
//! Normalization is `-Δ_x G(x, y) = 2π δ_y` with `G = 0` on both circles, so
//! `G(x, y) = -ln|x - y| + u(x, y)` with `u` harmonic in `x`. The regular
//! part has the Fourier expansion
//!
//! ```text
//! u(x, y) = A0(y) + B0(y) ln|x| - Σ_{m≥1} (1/m) (A_m(y) |x|^m + B_m(y) |x|^-m) cos m(θ - θ_y)
//! ```
//!
//! Internally every power is formed from ratios strictly below one. With
//! `ρ = (a/b)^2` and
//!
//! ```text
//! t1 = |x||y|/b²   t2 = a²|x|/(|y|b²)   t3 = a²/(|x||y|)   t4 = a²|y|/(|x|b²)
//! ```
//!
//! we have `A_m |x|^m + B_m |x|^-m = (t1^m - t2^m + t3^m - t4^m) / (1 - ρ^m)`
//! and `A_m |x|^m - B_m |x|^-m = (t1^m - t2^m - t3^m + t4^m) / (1 - ρ^m)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Annulus, PlanarPoint, PolarPoint};
use crate::series::{CompensatedSum, SeriesControl};

/// `A_m(y)` and `B_m(y)` for one order `m` (`m = 0` gives `A0`, `B0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FourierCoefficients {
    pub order: usize,
    pub a: f64,
    pub b: f64,
}

/// A gradient with its decomposition in the polar frame of the point where
/// it was evaluated: `vector = radial_part · x/|x| + tangential_part · x⊥/|x|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GradientValue {
    pub vector: PlanarPoint,
    pub radial_part: f64,
    pub tangential_part: f64,
}

impl GradientValue {
    /// Builds the gradient from its components in the frame at angle `theta`.
    pub fn from_frame(theta: f64, radial_part: f64, tangential_part: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            vector: PlanarPoint::new(
                radial_part * c - tangential_part * s,
                radial_part * s + tangential_part * c,
            ),
            radial_part,
            tangential_part,
        }
    }

    pub fn norm(&self) -> f64 {
        self.radial_part.hypot(self.tangential_part)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            vector: self.vector.scale(s),
            radial_part: s * self.radial_part,
            tangential_part: s * self.tangential_part,
        }
    }
}

pub fn coefficients(ann: &Annulus, y: &PolarPoint, m: usize) -> Result<FourierCoefficients> {
    ann.check_closed(y.r)?;
    let (a, b, r) = (ann.a(), ann.b(), y.r);
    if m == 0 {
        let l = ann.log_ratio();
        return Ok(FourierCoefficients {
            order: 0,
            a: b.ln() * (a / r).ln() / l,
            b: (r / b).ln() / l,
        });
    }
    let n = m as i32;
    let denom = 1.0 - ann.modulus().powi(n);
    // A_m = b^-m ((r/b)^m - (a²/(r b))^m) / (1 - ρ^m)
    let am = ((r / b).powi(n) - (a * a / (r * b)).powi(n)) / (denom * b.powi(n));
    // B_m = ((a²/r)^m - (a² r/b²)^m) / (1 - ρ^m)
    let bm = ((a * a / r).powi(n) - (a * a * r / (b * b)).powi(n)) / denom;
    Ok(FourierCoefficients {
        order: m,
        a: am,
        b: bm,
    })
}

/// `A0(y) + B0(y) ln|x|`, written symmetrically in the two radii.
fn log_part(ann: &Annulus, rx: f64, ry: f64) -> f64 {
    let (la, lb) = (ann.a().ln(), ann.b().ln());
    let (lx, ly) = (rx.ln(), ry.ln());
    (lb * (la - ly) + lx * (ly - lb)) / (la - lb)
}

struct Ratios {
    t1: f64,
    t2: f64,
    t3: f64,
    t4: f64,
    rho: f64,
}

impl Ratios {
    fn new(ann: &Annulus, rx: f64, ry: f64) -> Self {
        let a2 = ann.a() * ann.a();
        let b2 = ann.b() * ann.b();
        Self {
            t1: rx * ry / b2,
            t2: a2 * rx / (ry * b2),
            t3: a2 / (rx * ry),
            t4: a2 * ry / (rx * b2),
            rho: a2 / b2,
        }
    }
}

/// `Σ_{m=1}^{order} (1/m) P_m cos mφ`.
fn value_series(ann: &Annulus, rx: f64, ry: f64, phi: f64, order: usize) -> f64 {
    let k = Ratios::new(ann, rx, ry);
    let (mut p1, mut p2, mut p3, mut p4, mut pr) = (1.0, 1.0, 1.0, 1.0, 1.0);
    let (s1, c1) = phi.sin_cos();
    let (mut s, mut c) = (0.0, 1.0);
    let mut acc = CompensatedSum::new();
    for m in 1..=order {
        p1 *= k.t1;
        p2 *= k.t2;
        p3 *= k.t3;
        p4 *= k.t4;
        pr *= k.rho;
        (c, s) = (c * c1 - s * s1, s * c1 + c * s1);
        let pm = ((p1 - p2) + (p3 - p4)) / (1.0 - pr);
        acc.add(pm * c / m as f64);
    }
    acc.value()
}

/// Returns `(Σ Q_m cos mφ, Σ P_m sin mφ)`.
fn gradient_series(ann: &Annulus, rx: f64, ry: f64, phi: f64, order: usize) -> (f64, f64) {
    let k = Ratios::new(ann, rx, ry);
    let (mut p1, mut p2, mut p3, mut p4, mut pr) = (1.0, 1.0, 1.0, 1.0, 1.0);
    let (s1, c1) = phi.sin_cos();
    let (mut s, mut c) = (0.0, 1.0);
    let mut radial = CompensatedSum::new();
    let mut tangential = CompensatedSum::new();
    for _ in 1..=order {
        p1 *= k.t1;
        p2 *= k.t2;
        p3 *= k.t3;
        p4 *= k.t4;
        pr *= k.rho;
        (c, s) = (c * c1 - s * s1, s * c1 + c * s1);
        let d = 1.0 - pr;
        radial.add(((p1 - p2) - (p3 - p4)) / d * c);
        tangential.add(((p1 - p2) + (p3 - p4)) / d * s);
    }
    (radial.value(), tangential.value())
}

/// Regular part `u(x, y) = G(x, y) + ln|x - y|` on the closed annulus.
/// `x = y` is allowed.
pub fn regular_part(
    ann: &Annulus,
    x: &PolarPoint,
    y: &PolarPoint,
    ctrl: &SeriesControl,
) -> Result<f64> {
    ann.check_closed(x.r)?;
    ann.check_closed(y.r)?;
    Ok(regular_part_unchecked(ann, x, y, ctrl.m_used))
}

pub(crate) fn regular_part_unchecked(
    ann: &Annulus,
    x: &PolarPoint,
    y: &PolarPoint,
    order: usize,
) -> f64 {
    log_part(ann, x.r, y.r) - value_series(ann, x.r, y.r, x.theta - y.theta, order)
}

/// Green function for interior `x != y`.
pub fn green(ann: &Annulus, x: &PolarPoint, y: &PolarPoint, ctrl: &SeriesControl) -> Result<f64> {
    ann.check_interior(x.r)?;
    ann.check_interior(y.r)?;
    green_unchecked(ann, x, y, ctrl.m_used)
}

/// Green function with `x` allowed on either boundary circle. Validation
/// only: the series ratio is then governed by `|y|` alone.
pub fn green_closed(
    ann: &Annulus,
    x: &PolarPoint,
    y: &PolarPoint,
    ctrl: &SeriesControl,
) -> Result<f64> {
    ann.check_closed(x.r)?;
    ann.check_interior(y.r)?;
    green_unchecked(ann, x, y, ctrl.m_used)
}

pub(crate) fn green_unchecked(
    ann: &Annulus,
    x: &PolarPoint,
    y: &PolarPoint,
    order: usize,
) -> Result<f64> {
    let d2 = x.distance_squared(y);
    if d2 == 0.0 {
        return Err(Error::Singular);
    }
    // singular term last
    Ok(regular_part_unchecked(ann, x, y, order) - 0.5 * d2.ln())
}

/// Robin function `R(y) = lim_{x→y} (-ln|x - y| - G(x, y)) = -u(y, y)`.
/// Radial: the angle of `y` is never read.
pub fn robin(ann: &Annulus, y: &PolarPoint, ctrl: &SeriesControl) -> Result<f64> {
    ann.check_interior(y.r)?;
    Ok(robin_radius(ann, y.r, ctrl.m_used))
}

pub(crate) fn robin_radius(ann: &Annulus, r: f64, order: usize) -> f64 {
    let lb = ann.b().ln();
    let l = r.ln() - lb;
    let rho = ann.modulus();
    let s = r * r / (ann.b() * ann.b());
    let c = ann.a() * ann.a() / (r * r);
    let (mut ps, mut pc, mut pr) = (1.0, 1.0, 1.0);
    let mut acc = CompensatedSum::new();
    for m in 1..=order {
        ps *= s;
        pc *= c;
        pr *= rho;
        acc.add((ps - 2.0 * pr + pc) / ((1.0 - pr) * m as f64));
    }
    -(l * l) / ann.log_ratio() - lb + acc.value()
}

/// `∇_x G(x, y)` for interior `x != y`.
pub fn grad_green_x(
    ann: &Annulus,
    x: &PolarPoint,
    y: &PolarPoint,
    ctrl: &SeriesControl,
) -> Result<GradientValue> {
    ann.check_interior(x.r)?;
    ann.check_interior(y.r)?;
    grad_green_unchecked(ann, x, y, ctrl.m_used)
}

pub(crate) fn grad_green_unchecked(
    ann: &Annulus,
    x: &PolarPoint,
    y: &PolarPoint,
    order: usize,
) -> Result<GradientValue> {
    let d2 = x.distance_squared(y);
    if d2 == 0.0 {
        return Err(Error::Singular);
    }
    let (rx, ry) = (x.r, y.r);
    let phi = x.theta - y.theta;
    let b0 = (ry / ann.b()).ln() / ann.log_ratio();
    let (cos_sum, sin_sum) = gradient_series(ann, rx, ry, phi, order);
    // x - y in the frame at x: (rx - ry cos φ, ry sin φ)
    let half = (0.5 * phi).sin();
    let sep_radial = (rx - ry) + 2.0 * ry * half * half;
    let sep_tangential = ry * phi.sin();
    let radial = (b0 - cos_sum) / rx - sep_radial / d2;
    let tangential = sin_sum / rx - sep_tangential / d2;
    Ok(GradientValue::from_frame(x.theta, radial, tangential))
}

/// Full gradient `∇R(y)`. It is purely radial.
pub fn grad_robin(ann: &Annulus, y: &PolarPoint, ctrl: &SeriesControl) -> Result<GradientValue> {
    ann.check_interior(y.r)?;
    Ok(GradientValue::from_frame(
        y.theta,
        robin_slope(ann, y.r, ctrl.m_used),
        0.0,
    ))
}

/// `dR/dr`.
pub(crate) fn robin_slope(ann: &Annulus, r: f64, order: usize) -> f64 {
    let rho = ann.modulus();
    let s = r * r / (ann.b() * ann.b());
    let c = ann.a() * ann.a() / (r * r);
    let (mut ps, mut pc, mut pr) = (1.0, 1.0, 1.0);
    let mut acc = CompensatedSum::new();
    for _ in 1..=order {
        ps *= s;
        pc *= c;
        pr *= rho;
        acc.add((ps - pc) / (1.0 - pr));
    }
    2.0 * (acc.value() - (r / ann.b()).ln() / ann.log_ratio()) / r
}
