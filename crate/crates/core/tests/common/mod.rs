//! Reference evaluations written straight from the raw formulas, with plain
//! powers and no ratio rewriting. Usable for moderate orders only.
#![allow(dead_code)]

use annulus_core::{Annulus, PolarPoint};

pub fn ann(a: f64, b: f64) -> Annulus {
    Annulus::new(a, b).unwrap()
}

pub fn pt(r: f64, t: f64) -> PolarPoint {
    PolarPoint::new(r, t).unwrap()
}

/// Robin function, raw powers, `order` terms.
pub fn robin_raw(a: f64, b: f64, r: f64, order: usize) -> f64 {
    let mut sum = 0.0;
    for m in 1..=order {
        let n = m as i32;
        let d = b.powi(2 * n) - a.powi(2 * n);
        sum += (r.powi(2 * n) - 2.0 * a.powi(2 * n) + (a * b).powi(2 * n) * r.powi(-2 * n))
            / (m as f64 * d);
    }
    let l = r.ln() - b.ln();
    -(l * l) / (a / b).ln() - b.ln() + sum
}

/// Half the radial derivative of the Robin function, raw powers.
pub fn half_robin_slope_raw(a: f64, b: f64, r: f64, order: usize) -> f64 {
    let mut sum = 0.0;
    for m in 1..=order {
        let n = m as i32;
        let d = b.powi(2 * n) - a.powi(2 * n);
        sum += (r.powi(2 * n - 1) - (a * b).powi(2 * n) * r.powi(-2 * n - 1)) / d;
    }
    -(r / b).ln() / ((a / b).ln() * r) + sum
}

/// Green function from the raw coefficients `A_m`, `B_m` and a Cartesian
/// distance.
pub fn green_raw(a: f64, b: f64, x: &PolarPoint, y: &PolarPoint, order: usize) -> f64 {
    let (rx, ry) = (x.r, y.r);
    let a0 = b.ln() * (a / ry).ln() / (a / b).ln();
    let b0 = (ry / b).ln() / (a / b).ln();
    let mut sum = 0.0;
    for m in 1..=order {
        let n = m as i32;
        let d = b.powi(2 * n) - a.powi(2 * n);
        let am = (ry.powi(n) - (a * a / ry).powi(n)) / d;
        let bm = a.powi(2 * n) * ((b * b / ry).powi(n) - ry.powi(n)) / d;
        sum += (am * rx.powi(n) + bm * rx.powi(-n)) * (m as f64 * (x.theta - y.theta)).cos()
            / m as f64;
    }
    let dist = x.to_planar().sub(&y.to_planar()).norm();
    -dist.ln() + a0 + b0 * rx.ln() - sum
}

/// Bisection for the radius where the Robin gradient vanishes.
pub fn robin_critical_radius(a: f64, b: f64) -> f64 {
    let f = |r: f64| half_robin_slope_raw(a, b, r, 200);
    let (mut lo, mut hi) = (a + 1e-6 * (b - a), b - 1e-6 * (b - a));
    assert!(f(lo) < 0.0 && f(hi) > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `f(r) - g(r)` from the raw formulas, summing all orders with the
/// `(-1)^m + 1` weight.
pub fn radius_equation_raw(a: f64, b: f64, r: f64, order: usize) -> f64 {
    let f = 2.0 * (r / b).ln() / (a / b).ln() - 0.5;
    let mut g = 0.0;
    for m in 1..=order {
        let n = m as i32;
        let w = if m % 2 == 0 { 2.0 } else { 0.0 };
        g += w * (r.powi(2 * n) - (a * b).powi(2 * n) * r.powi(-2 * n))
            / (b.powi(2 * n) - a.powi(2 * n));
    }
    f - g
}

/// `e_1·P_1` for the pair `(p1, p2)`, from the raw coefficients: the radial
/// derivative of the Robin function and of the Green function in `x` taken
/// term by term and multiplied by `|P_1|`.
pub fn radial_projection_raw(
    a: f64,
    b: f64,
    p1: &PolarPoint,
    p2: &PolarPoint,
    order: usize,
) -> f64 {
    let (r1, r2) = (p1.r, p2.r);
    let phi = p1.theta - p2.theta;
    let d2 = r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * phi.cos();
    let b0 = (r2 / b).ln() / (a / b).ln();
    let mut sum = 0.0;
    for m in 1..=order {
        let n = m as i32;
        let d = b.powi(2 * n) - a.powi(2 * n);
        let am = (r2.powi(n) - (a * a / r2).powi(n)) / d;
        let bm = a.powi(2 * n) * ((b * b / r2).powi(n) - r2.powi(n)) / d;
        sum += (am * r1.powi(n) - bm * r1.powi(-n)) * (m as f64 * phi).cos();
    }
    r1 * half_robin_slope_raw(a, b, r1, order) + (r1 * r1 - r1 * r2 * phi.cos()) / d2 - b0 + sum
}
