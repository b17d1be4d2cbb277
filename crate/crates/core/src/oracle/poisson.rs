//! Finite-difference solve of `-ΔG = 2π δ_y` with zero Dirichlet data on a
//! polar grid.
//!
//! The 5-point stencil in `(r, θ)` with flux-form radial differences is
//!
//! ```text
//! -[r_{i+½}(u_{i+1} - u_i) - r_{i-½}(u_i - u_{i-1})] / (r_i Δr²)
//!   - (u_{j+1} - 2u_j + u_{j-1}) / (r_i² Δθ²) = f_ij
//! ```
//!
//! Its coefficients do not depend on `θ`, so a discrete Fourier transform in
//! the periodic direction splits the system into one tridiagonal solve per
//! angular mode. The source is a single node carrying total mass `2π`.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::geometry::{Annulus, PolarPoint};

/// Nodal values on `r_i = a + iΔr` (`i = 0..=n_r`, boundary rows included)
/// and `θ_j = jΔθ` (`j = 0..n_theta`).
#[derive(Debug, Clone)]
pub struct PolarGrid {
    pub a: f64,
    pub b: f64,
    pub n_r: usize,
    pub n_theta: usize,
    pub source: (usize, usize),
    values: Vec<f64>,
}

impl PolarGrid {
    pub fn dr(&self) -> f64 {
        (self.b - self.a) / self.n_r as f64
    }

    pub fn dtheta(&self) -> f64 {
        TAU / self.n_theta as f64
    }

    pub fn radius(&self, i: usize) -> f64 {
        self.a + i as f64 * self.dr()
    }

    pub fn angle(&self, j: usize) -> f64 {
        j as f64 * self.dtheta()
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n_theta + j]
    }

    pub fn node(&self, i: usize, j: usize) -> PolarPoint {
        PolarPoint::new(self.radius(i), self.angle(j)).expect("grid radii are positive")
    }

    /// `-∮ ∂G/∂n` over both circles with one-sided second-order differences.
    pub fn flux(&self) -> f64 {
        let dr = self.dr();
        let dt = self.dtheta();
        let n = self.n_r;
        let mut outer = 0.0;
        let mut inner = 0.0;
        for j in 0..self.n_theta {
            let dudr_b = (3.0 * self.value(n, j) - 4.0 * self.value(n - 1, j)
                + self.value(n - 2, j))
                / (2.0 * dr);
            let dudr_a =
                (-3.0 * self.value(0, j) + 4.0 * self.value(1, j) - self.value(2, j)) / (2.0 * dr);
            outer -= dudr_b * self.b * dt;
            inner += dudr_a * self.a * dt;
        }
        outer + inner
    }
}

/// `y` must sit on a node: `(|y| - a)/Δr` and `θ_y/Δθ` integers.
pub fn fd_poisson_green(
    ann: &Annulus,
    y: &PolarPoint,
    n_r: usize,
    n_theta: usize,
) -> Result<PolarGrid> {
    if n_r < 64 || n_theta < 64 {
        return Err(Error::InvalidArgument(format!(
            "grid resolution must be at least 64 x 64 (got {n_r} x {n_theta})"
        )));
    }
    ann.check_interior(y.r)?;
    let dr = ann.width() / n_r as f64;
    let dt = TAU / n_theta as f64;
    let fi = (y.r - ann.a()) / dr;
    let fj = y.theta / dt;
    let (i0, j0) = (fi.round() as usize, fj.round() as usize % n_theta);
    if (fi - fi.round()).abs() > 1e-9 || (fj - fj.round()).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "pole ({}, {}) is not a grid node",
            y.r, y.theta
        )));
    }

    let radius = |i: usize| ann.a() + i as f64 * dr;
    let interior = n_r - 1;
    let mass = TAU / (radius(i0) * dr * dt);

    // mode k: tridiagonal in i = 1..n_r-1, rhs = mass at i0
    let mut modes = vec![0.0; n_theta * interior];
    let mut lower = vec![0.0; interior];
    let mut diag = vec![0.0; interior];
    let mut upper = vec![0.0; interior];
    let mut rhs = vec![0.0; interior];
    for k in 0..n_theta {
        let s = (0.5 * k as f64 * dt).sin();
        let lambda = 4.0 * s * s / (dt * dt);
        for row in 0..interior {
            let i = row + 1;
            let r = radius(i);
            let rp = r + 0.5 * dr;
            let rm = r - 0.5 * dr;
            lower[row] = -rm / (r * dr * dr);
            upper[row] = -rp / (r * dr * dr);
            diag[row] = (rp + rm) / (r * dr * dr) + lambda / (r * r);
            rhs[row] = if i == i0 { mass } else { 0.0 };
        }
        thomas(&lower, &mut diag, &upper, &mut rhs)?;
        modes[k * interior..(k + 1) * interior].copy_from_slice(&rhs);
    }

    // u_ij = (1/N) Σ_k V_k(i) cos(k (j - j0) Δθ)
    let cosines: Vec<f64> = (0..n_theta).map(|m| (m as f64 * dt).cos()).collect();
    let mut values = vec![0.0; (n_r + 1) * n_theta];
    for row in 0..interior {
        let i = row + 1;
        for j in 0..n_theta {
            let shift = (j + n_theta - j0) % n_theta;
            let mut acc = 0.0;
            for k in 0..n_theta {
                acc += modes[k * interior + row] * cosines[(k * shift) % n_theta];
            }
            values[i * n_theta + j] = acc / n_theta as f64;
        }
    }
    Ok(PolarGrid {
        a: ann.a(),
        b: ann.b(),
        n_r,
        n_theta,
        source: (i0, j0),
        values,
    })
}

/// In-place tridiagonal solve; the solution overwrites `rhs`.
fn thomas(lower: &[f64], diag: &mut [f64], upper: &[f64], rhs: &mut [f64]) -> Result<()> {
    let n = diag.len();
    for i in 1..n {
        if diag[i - 1] == 0.0 {
            return Err(Error::InvalidArgument(
                "singular finite-difference system; refine the grid".into(),
            ));
        }
        let w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    if diag[n - 1] == 0.0 {
        return Err(Error::InvalidArgument(
            "singular finite-difference system; refine the grid".into(),
        ));
    }
    rhs[n - 1] /= diag[n - 1];
    for i in (0..n - 1).rev() {
        rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
    }
    Ok(())
}
