use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Annulus;
use crate::series::{CompensatedSum, SeriesControl, SeriesPolicy};

/// The two sides of the radius equation `f(r) = g(r)` for an antipodal pair,
///
/// ```text
/// f(r) = 2 ln(r/b) / ln(a/b) - 1/2
/// g(r) = Σ_{m≥1} ((-1)^m + 1) (r^2m - (ab)^2m r^-2m) / (b^2m - a^2m)
/// ```
///
/// `f` decreases from 3/2 to -1/2 across `(a, b)` and vanishes at
/// `a^(1/4) b^(3/4)`; `g` increases from -∞ to +∞ and vanishes at `sqrt(ab)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfilePoint {
    pub r: f64,
    pub f: f64,
    pub g: f64,
}

pub fn profile(ann: &Annulus, r: f64, ctrl: &SeriesControl) -> Result<ProfilePoint> {
    ann.check_interior(r)?;
    Ok(ProfilePoint {
        r,
        f: profile_f(ann, r),
        g: profile_g(ann, r, ctrl.m_used),
    })
}

/// Truncation for evaluating the profile at radius `r`.
pub fn profile_control(ann: &Annulus, r: f64, policy: SeriesPolicy) -> Result<SeriesControl> {
    SeriesControl::for_radii(ann, &[r], policy)
}

fn profile_f(ann: &Annulus, r: f64) -> f64 {
    2.0 * (r / ann.b()).ln() / ann.log_ratio() - 0.5
}

fn profile_f_slope(ann: &Annulus, r: f64) -> f64 {
    2.0 / (r * ann.log_ratio())
}

/// Only even orders contribute, each with weight 2.
fn profile_g(ann: &Annulus, r: f64, order: usize) -> f64 {
    let (s, c, rho) = even_ratios(ann, r);
    let (mut ps, mut pc, mut pr) = (1.0, 1.0, 1.0);
    let mut acc = CompensatedSum::new();
    for _ in (2..=order).step_by(2) {
        ps *= s;
        pc *= c;
        pr *= rho;
        acc.add(2.0 * (ps - pc) / (1.0 - pr));
    }
    acc.value()
}

fn profile_g_slope(ann: &Annulus, r: f64, order: usize) -> f64 {
    let (s, c, rho) = even_ratios(ann, r);
    let (mut ps, mut pc, mut pr) = (1.0, 1.0, 1.0);
    let mut acc = CompensatedSum::new();
    for m in (2..=order).step_by(2) {
        ps *= s;
        pc *= c;
        pr *= rho;
        acc.add(2.0 * m as f64 * (ps + pc) / (1.0 - pr));
    }
    2.0 * acc.value() / r
}

/// `((r/b)^4, (a/r)^4, (a/b)^4)`: the per-step ratios over even orders.
fn even_ratios(ann: &Annulus, r: f64) -> (f64, f64, f64) {
    let s = (r / ann.b()).powi(4);
    let c = (ann.a() / r).powi(4);
    let rho = ann.modulus() * ann.modulus();
    (s, c, rho)
}

/// `(sqrt(ab), a^(1/4) b^(3/4))`, the interval that contains `r0`.
pub fn r0_bracket(ann: &Annulus) -> (f64, f64) {
    (
        ann.geometric_mean(),
        ann.a().powf(0.25) * ann.b().powf(0.75),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct R0Solution {
    pub r0: f64,
    /// `f(r0) - g(r0)`.
    pub residual: f64,
    pub bracket: [f64; 2],
    /// Final bracket certified to contain the sign change.
    pub enclosure: [f64; 2],
    pub iterations: usize,
    pub m_used: usize,
}

const COARSE_WIDTH: f64 = 1e-3;
const MAX_ITER: usize = 400;

/// Root of `f - g` on `[sqrt(ab), a^(1/4) b^(3/4)]`: bisection down to a
/// coarse width, then safeguarded Newton with the analytic derivative. The
/// returned enclosure has width below `tol` and `|f - g| < tol` at `r0`
/// whenever `tol` is above the rounding floor.
pub fn solve_r0(ann: &Annulus, tol: f64) -> Result<R0Solution> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    let (left, right) = r0_bracket(ann);
    let ctrl = SeriesControl::for_radii(ann, &[left, right], SeriesPolicy::new(1e-17)?)?;
    let order = ctrl.m_used;
    let h = |r: f64| profile_f(ann, r) - profile_g(ann, r, order);
    let dh = |r: f64| profile_f_slope(ann, r) - profile_g_slope(ann, r, order);

    // h(left) = f(left) > 0, h(right) = -g(right) < 0
    let (mut lo, mut hi) = (left, right);
    let mut iterations = 0;
    while hi - lo > COARSE_WIDTH && iterations < MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }

    let mut x = 0.5 * (lo + hi);
    while iterations < MAX_ITER {
        iterations += 1;
        let hx = h(x);
        if hx == 0.0 {
            lo = x;
            hi = x;
            break;
        }
        if hx > 0.0 {
            lo = lo.max(x);
        } else {
            hi = hi.min(x);
        }
        let slope = dh(x);
        let newton = x - hx / slope;
        let next = if slope.is_finite() && slope != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let step = (next - x).abs();
        x = next;
        if step < 0.25 * tol {
            // certify a sign change on a window of width tol around x
            let (wl, wr) = ((x - 0.5 * tol).max(lo), (x + 0.5 * tol).min(hi));
            if h(wl) >= 0.0 && h(wr) <= 0.0 {
                lo = wl;
                hi = wr;
                break;
            }
        }
        if hi - lo < tol {
            break;
        }
    }
    let r0 = x.clamp(lo, hi);
    Ok(R0Solution {
        r0,
        residual: h(r0),
        bracket: [left, right],
        enclosure: [lo, hi],
        iterations,
        m_used: order,
    })
}
