//! Truncation policy for the Fourier series of the annulus Green function.
//!
//! Every value series in this crate has its `m`-th term bounded by
//! `C q^m / m`, where `q < 1` is the slowest geometric ratio formed from the
//! radii involved and `C = 4 / (1 - (a/b)^2)` covers the four ratio powers
//! and the denominators `1 - (a/b)^2m`. The truncation order `M` is the
//! smallest one for which
//!
//! ```text
//! C q^(M+1) / ((M+1) (1 - q)) < tol
//! ```
//!
//! and is capped at `m_max`, in which case the achieved bound is reported
//! instead of an error. Derivative series lack the `1/m` factor, so their
//! tails are larger by up to a factor `M`; callers that need tight gradients
//! pass a smaller `tol`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Annulus;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_M_MAX: usize = 512;

/// Requested accuracy: a tail tolerance and a hard cap on the order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesPolicy {
    pub tol: f64,
    pub m_max: usize,
}

impl Default for SeriesPolicy {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            m_max: DEFAULT_M_MAX,
        }
    }
}

impl SeriesPolicy {
    pub fn new(tol: f64) -> Result<Self> {
        Self::with_cap(tol, DEFAULT_M_MAX)
    }

    pub fn with_cap(tol: f64, m_max: usize) -> Result<Self> {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::InvalidTolerance(tol));
        }
        if m_max == 0 {
            return Err(Error::InvalidArgument("m_max must be at least 1".into()));
        }
        Ok(Self { tol, m_max })
    }
}

/// A resolved truncation: the order actually summed and its tail bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesControl {
    pub tol: f64,
    pub m_max: usize,
    pub m_used: usize,
    /// Dominant geometric ratio.
    pub q: f64,
    /// Constant `C` multiplying the geometric tail.
    pub prefactor: f64,
    /// `C q^(M+1) / ((M+1)(1-q))` at `M = m_used`.
    pub tail_bound: f64,
}

impl SeriesControl {
    /// True when the tail bound met the requested tolerance.
    pub fn met_tolerance(&self) -> bool {
        self.tail_bound < self.tol
    }

    /// Same ratio, different order. Orders outside the policy are allowed
    /// here; this is how validation code probes the tail.
    pub fn with_order(&self, order: usize) -> Self {
        Self {
            m_used: order,
            tail_bound: self.prefactor * tail_bound(self.q, order),
            ..*self
        }
    }

    /// Truncation for a set of interior radii, counting every pair including
    /// a radius with itself (as the Robin function does).
    pub fn for_radii(ann: &Annulus, radii: &[f64], policy: SeriesPolicy) -> Result<Self> {
        auto_truncation(ann, radii, policy)
    }

    /// Truncation for a single Green evaluation `G(x, y)`. Only the cross
    /// product of the two radii matters, so one of them may sit on the
    /// boundary as long as the other is interior.
    pub fn for_pair(ann: &Annulus, rx: f64, ry: f64, policy: SeriesPolicy) -> Result<Self> {
        ann.check_closed(rx)?;
        ann.check_closed(ry)?;
        let q = pair_ratio(ann, rx, ry);
        resolve(ann, q, policy)
    }
}

fn pair_ratio(ann: &Annulus, r1: f64, r2: f64) -> f64 {
    let p = r1 * r2;
    let b2 = ann.b() * ann.b();
    let a2 = ann.a() * ann.a();
    (p / b2).max(a2 / p)
}

/// `q^(M+1) / ((M+1)(1-q))`.
pub fn tail_bound(q: f64, order: usize) -> f64 {
    let n = (order + 1) as f64;
    q.powf(n) / (n * (1.0 - q))
}

fn resolve(ann: &Annulus, q: f64, policy: SeriesPolicy) -> Result<SeriesControl> {
    if q.is_nan() || q >= 1.0 {
        return Err(Error::Divergent(q));
    }
    let prefactor = 4.0 / (1.0 - ann.modulus());
    let mut order = 1;
    let mut qn = q * q;
    let mut bound = prefactor * qn / (2.0 * (1.0 - q));
    while bound >= policy.tol && order < policy.m_max {
        order += 1;
        qn *= q;
        bound = prefactor * qn / ((order + 1) as f64 * (1.0 - q));
    }
    Ok(SeriesControl {
        tol: policy.tol,
        m_max: policy.m_max,
        m_used: order,
        q,
        prefactor,
        tail_bound: bound,
    })
}

/// Smallest order meeting `policy.tol` for every pair drawn from `radii`.
pub fn auto_truncation(
    ann: &Annulus,
    radii: &[f64],
    policy: SeriesPolicy,
) -> Result<SeriesControl> {
    if radii.is_empty() {
        return Err(Error::InvalidArgument("no radii given".into()));
    }
    SeriesPolicy::with_cap(policy.tol, policy.m_max)?;
    for &r in radii {
        ann.check_interior(r)?;
    }
    let r_min = radii.iter().copied().fold(f64::INFINITY, f64::min);
    let r_max = radii.iter().copied().fold(0.0, f64::max);
    let q = pair_ratio(ann, r_max, r_max).max(pair_ratio(ann, r_min, r_min));
    debug_assert!(q < 1.0, "interior radii always give q < 1");
    resolve(ann, q, policy)
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}
