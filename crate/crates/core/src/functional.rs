//! The point-vortex type functional on `l`-point configurations and the
//! blow-up characterization residual.
//!
//! ```text
//! F(ξ_1, …, ξ_l) = Σ_i R(ξ_i) - Σ_{i≠j} G(ξ_i, ξ_j)
//! ```
//!
//! The double sum runs over **ordered** pairs, so each unordered pair is
//! counted twice. With that reading
//!
//! ```text
//! ∂F/∂ξ_i = ∇R(ξ_i) - 2 Σ_{j≠i} ∇_x G(ξ_i, ξ_j) = 2 e_i,
//! e_i     = ½ ∇R(ξ_i) - Σ_{j≠i} ∇_x G(ξ_i, ξ_j),
//! ```
//!
//! and `∇F = 0` holds exactly when every `e_i` vanishes.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{normalize_angle, Annulus, PolarPoint};
use crate::green::{self, GradientValue};
use crate::series::{CompensatedSum, SeriesControl, SeriesPolicy};

/// Ordered list of pairwise distinct points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Configuration {
    points: Vec<PolarPoint>,
}

impl Configuration {
    pub fn new(points: Vec<PolarPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyConfiguration);
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i].distance_squared(&points[j]) == 0.0 {
                    return Err(Error::Diagonal { i, j });
                }
            }
        }
        Ok(Self { points })
    }

    /// `P` and `-P` at radius `r`.
    pub fn antipodal(r: f64, theta: f64) -> Result<Self> {
        Self::regular_polygon(2, r, theta)
    }

    /// Vertices of a regular `n`-gon centred at the origin.
    pub fn regular_polygon(n: usize, r: f64, theta: f64) -> Result<Self> {
        let step = std::f64::consts::TAU / n as f64;
        let points = (0..n)
            .map(|k| PolarPoint::new(r, theta + k as f64 * step))
            .collect::<Result<Vec<_>>>()?;
        Self::new(points)
    }

    pub fn points(&self) -> &[PolarPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn radii(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.r).collect()
    }

    pub fn rotated(&self, alpha: f64) -> Self {
        Self {
            points: self.points.iter().map(|p| p.rotated(alpha)).collect(),
        }
    }

    /// Mirror image across the line through the origin at angle `beta`.
    pub fn reflected(&self, beta: f64) -> Self {
        Self {
            points: self.points.iter().map(|p| p.reflected(beta)).collect(),
        }
    }

    fn check_interior(&self, ann: &Annulus) -> Result<()> {
        self.points.iter().try_for_each(|p| ann.check_interior(p.r))
    }
}

/// The vectors `e_i` and `max_i |e_i|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharResidual {
    pub vectors: Vec<GradientValue>,
    pub norm: f64,
}

/// One truncation order for the whole configuration, from the worst ratio
/// over all pairs of radii.
pub fn configuration_control(
    ann: &Annulus,
    config: &Configuration,
    policy: SeriesPolicy,
) -> Result<SeriesControl> {
    config.check_interior(ann)?;
    SeriesControl::for_radii(ann, &config.radii(), policy)
}

pub fn hamiltonian(ann: &Annulus, config: &Configuration, ctrl: &SeriesControl) -> Result<f64> {
    config.check_interior(ann)?;
    let pts = config.points();
    let mut acc = CompensatedSum::new();
    for p in pts {
        acc.add(green::robin_radius(ann, p.r, ctrl.m_used));
    }
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            // G is symmetric; the ordered sum sees each pair twice
            acc.add(-2.0 * green::green_unchecked(ann, &pts[i], &pts[j], ctrl.m_used)?);
        }
    }
    Ok(acc.value())
}

pub fn char_residual(
    ann: &Annulus,
    config: &Configuration,
    ctrl: &SeriesControl,
) -> Result<CharResidual> {
    config.check_interior(ann)?;
    let pts = config.points();
    let vectors = pts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut radial = CompensatedSum::new();
            let mut tangential = CompensatedSum::new();
            radial.add(0.5 * green::robin_slope(ann, p.r, ctrl.m_used));
            for (j, q) in pts.iter().enumerate() {
                if j == i {
                    continue;
                }
                let g = green::grad_green_unchecked(ann, p, q, ctrl.m_used).map_err(|_| {
                    Error::Diagonal {
                        i: i.min(j),
                        j: i.max(j),
                    }
                })?;
                radial.add(-g.radial_part);
                tangential.add(-g.tangential_part);
            }
            Ok(GradientValue::from_frame(
                p.theta,
                radial.value(),
                tangential.value(),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let norm = vectors.iter().map(GradientValue::norm).fold(0.0, f64::max);
    Ok(CharResidual { vectors, norm })
}

/// `∂F/∂ξ_i` for every point; equal to `2 e_i`.
pub fn grad_hamiltonian(
    ann: &Annulus,
    config: &Configuration,
    ctrl: &SeriesControl,
) -> Result<Vec<GradientValue>> {
    Ok(char_residual(ann, config, ctrl)?
        .vectors
        .into_iter()
        .map(|e| e.scale(2.0))
        .collect())
}

/// Both sides of the identity obtained by projecting the two-point system
/// onto `P_1` and `P_2` and subtracting:
///
/// ```text
/// (|P2|² - |P1|²) / |P2 - P1|²
///   = Σ_m (|P1|^2m - |P2|^2m)/(b^2m - a^2m)
///         · {1 + (ab)^2m/(|P1||P2|)^2m - 2 a^2m cos m(θ1-θ2) / (|P1||P2|)^m}
/// ```
///
/// For any pair, `lhs - rhs = e_2·P_2 - e_1·P_1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubtractSides {
    pub lhs: f64,
    pub rhs: f64,
}

pub fn subtract_identity(
    ann: &Annulus,
    p1: &PolarPoint,
    p2: &PolarPoint,
    ctrl: &SeriesControl,
) -> Result<SubtractSides> {
    ann.check_interior(p1.r)?;
    ann.check_interior(p2.r)?;
    let d2 = p1.distance_squared(p2);
    if d2 == 0.0 {
        return Err(Error::Diagonal { i: 0, j: 1 });
    }
    let lhs = (p2.r - p1.r) * (p2.r + p1.r) / d2;

    let (a2, b2) = (ann.a() * ann.a(), ann.b() * ann.b());
    let (r1, r2) = (p1.r, p2.r);
    // every power below is of a ratio in (0, 1)
    let u1 = r1 * r1 / b2;
    let u2 = r2 * r2 / b2;
    let v1 = a2 / (r1 * r1);
    let v2 = a2 / (r2 * r2);
    let w12 = a2 * r1 / (b2 * r2);
    let w21 = a2 * r2 / (b2 * r1);
    let rho = ann.modulus();
    let (s1, c1) = normalize_angle(p1.theta - p2.theta).sin_cos();
    let (mut s, mut c) = (0.0, 1.0);
    let (mut pu1, mut pu2, mut pv1, mut pv2, mut pw12, mut pw21, mut pr) =
        (1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0);
    let mut acc = CompensatedSum::new();
    for _ in 1..=ctrl.m_used {
        pu1 *= u1;
        pu2 *= u2;
        pv1 *= v1;
        pv2 *= v2;
        pw12 *= w12;
        pw21 *= w21;
        pr *= rho;
        (c, s) = (c * c1 - s * s1, s * c1 + c * s1);
        let term = (pu1 - pu2) + (pv2 - pv1) - 2.0 * c * (pw12 - pw21);
        acc.add(term / (1.0 - pr));
    }
    Ok(SubtractSides {
        lhs,
        rhs: acc.value(),
    })
}

/// The bracketed factor of the `m`-th term of the identity above, and the
/// lower bound `(1 - (ab)^m/(|P1||P2|)^m)^2` it always dominates.
pub fn subtract_bracket(ann: &Annulus, p1: &PolarPoint, p2: &PolarPoint, m: usize) -> (f64, f64) {
    let n = m as i32;
    let prod = p1.r * p2.r;
    let x = (ann.a() * ann.b() / prod).powi(n);
    let y = (ann.a() * ann.a() / prod).powi(n);
    let factor = 1.0 + x * x - 2.0 * y * (m as f64 * (p1.theta - p2.theta)).cos();
    let bound = (1.0 - x) * (1.0 - x);
    (factor, bound)
}
