//! Annulus geometry and the two point representations used throughout.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{Error, Result};

/// The open annulus `a < |x| < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Annulus {
    a: f64,
    b: f64,
}

impl Annulus {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a <= 0.0 || b <= 0.0 {
            return Err(Error::InvalidRadii { a, b });
        }
        if a >= b {
            return Err(Error::InvertedRadii { a, b });
        }
        Ok(Self { a, b })
    }

    /// Inner radius.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Outer radius.
    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    /// `(a/b)^2`, the ratio that appears in every coefficient denominator.
    pub fn modulus(&self) -> f64 {
        let t = self.a / self.b;
        t * t
    }

    /// `ln(a/b)`, always negative.
    pub fn log_ratio(&self) -> f64 {
        (self.a / self.b).ln()
    }

    /// Strict membership: the boundary circles are excluded.
    pub fn contains(&self, p: &PolarPoint) -> bool {
        self.contains_radius(p.r)
    }

    pub fn contains_radius(&self, r: f64) -> bool {
        self.a < r && r < self.b
    }

    pub fn contains_closed(&self, r: f64) -> bool {
        self.a <= r && r <= self.b
    }

    pub(crate) fn check_interior(&self, r: f64) -> Result<()> {
        if self.contains_radius(r) {
            Ok(())
        } else {
            Err(Error::OutsideDomain {
                r,
                a: self.a,
                b: self.b,
                kind: "open",
            })
        }
    }

    pub(crate) fn check_closed(&self, r: f64) -> Result<()> {
        if self.contains_closed(r) {
            Ok(())
        } else {
            Err(Error::OutsideDomain {
                r,
                a: self.a,
                b: self.b,
                kind: "closed",
            })
        }
    }

    /// `sqrt(ab)`, the geometric mean radius.
    pub fn geometric_mean(&self) -> f64 {
        (self.a * self.b).sqrt()
    }
}

/// A point in polar coordinates with `r > 0` and `theta` in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarPoint {
    pub r: f64,
    pub theta: f64,
}

impl PolarPoint {
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::InvalidRadius(r));
        }
        if !theta.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "angle must be finite (got {theta})"
            )));
        }
        Ok(Self {
            r,
            theta: normalize_angle(theta),
        })
    }

    pub fn to_planar(&self) -> PlanarPoint {
        let (s, c) = self.theta.sin_cos();
        PlanarPoint::new(self.r * c, self.r * s)
    }

    /// Rotates the point about the origin by `alpha` radians.
    pub fn rotated(&self, alpha: f64) -> Self {
        Self {
            r: self.r,
            theta: normalize_angle(self.theta + alpha),
        }
    }

    /// Reflects across the line through the origin at angle `beta`.
    pub fn reflected(&self, beta: f64) -> Self {
        Self {
            r: self.r,
            theta: normalize_angle(2.0 * beta - self.theta),
        }
    }

    /// Euclidean distance, computed without cancellation for nearby points.
    pub fn distance(&self, other: &PolarPoint) -> f64 {
        self.distance_squared(other).sqrt()
    }

    pub fn distance_squared(&self, other: &PolarPoint) -> f64 {
        let dr = self.r - other.r;
        let half = (0.5 * (self.theta - other.theta)).sin();
        dr * dr + 4.0 * self.r * other.r * half * half
    }
}

/// Cartesian point; also used as the carrier for gradient vectors.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct PlanarPoint {
    pub x1: f64,
    pub x2: f64,
}

impl PlanarPoint {
    pub const fn new(x1: f64, x2: f64) -> Self {
        Self { x1, x2 }
    }

    pub fn norm(&self) -> f64 {
        self.x1.hypot(self.x2)
    }

    pub fn dot(&self, other: &PlanarPoint) -> f64 {
        self.x1 * other.x1 + self.x2 * other.x2
    }

    /// `(-x2, x1)`, the counter-clockwise perpendicular.
    pub fn perp(&self) -> PlanarPoint {
        PlanarPoint::new(-self.x2, self.x1)
    }

    pub fn scale(&self, s: f64) -> PlanarPoint {
        PlanarPoint::new(s * self.x1, s * self.x2)
    }

    pub fn add(&self, other: &PlanarPoint) -> PlanarPoint {
        PlanarPoint::new(self.x1 + other.x1, self.x2 + other.x2)
    }

    pub fn sub(&self, other: &PlanarPoint) -> PlanarPoint {
        PlanarPoint::new(self.x1 - other.x1, self.x2 - other.x2)
    }

    pub fn to_polar(&self) -> Result<PolarPoint> {
        to_polar(*self)
    }
}

pub fn to_polar(p: PlanarPoint) -> Result<PolarPoint> {
    if !(p.x1.is_finite() && p.x2.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "coordinates must be finite (got ({}, {}))",
            p.x1, p.x2
        )));
    }
    let r = p.norm();
    if r == 0.0 {
        return Err(Error::DegeneratePoint);
    }
    Ok(PolarPoint {
        r,
        theta: normalize_angle(p.x2.atan2(p.x1)),
    })
}

/// Maps an angle into `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if t >= TAU {
        0.0
    } else {
        t
    }
}
