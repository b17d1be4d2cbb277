//! Multi-start search for configurations solving `e_i = 0` for every point.
//!
//! The antipodal two-point configuration is a saddle of the functional
//! (a maximum in the angular separation, a minimum in the radii), so plain
//! descent on the functional slides into the diagonal. Each start instead
//! runs damped least squares (Levenberg–Marquardt) on the stacked residual,
//! which decreases `½ Σ|e_i|²` whatever the critical-point type, and then
//! polishes with pseudo-inverse Gauss–Newton steps. Jacobians are central
//! differences of the residual map.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::profile::solve_r0;
use super::verify::SubtractCheck;
use crate::error::{Error, Result};
use crate::functional::{char_residual, configuration_control, Configuration};
use crate::geometry::{normalize_angle, Annulus, PolarPoint};
use crate::series::SeriesPolicy;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchOptions {
    pub seed: u64,
    /// Tail tolerance for every series evaluation.
    pub series_tol: f64,
    /// Convergence requires `max_i |e_i|` below this ...
    pub residual_tol: f64,
    /// ... and a final step shorter than this.
    pub step_tol: f64,
    pub max_iter: usize,
    /// Residual level at which damped steps hand over to the polish phase.
    pub polish_threshold: f64,
    /// Starts keep this fraction of `b - a` away from both circles.
    pub boundary_margin: f64,
    /// Minimum pairwise distance of start points, as a fraction of `b - a`.
    pub min_separation: f64,
    pub max_retries: usize,
    /// Reports closer than this modulo rotation and relabeling share a cluster.
    pub cluster_threshold: f64,
    /// Angle added to every sampled start.
    pub rotation: f64,
    pub keep_history: bool,
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            series_tol: 1e-14,
            residual_tol: 1e-9,
            step_tol: 1e-12,
            max_iter: 500,
            polish_threshold: 1e-6,
            boundary_margin: 0.05,
            min_separation: 0.1,
            max_retries: 1000,
            cluster_threshold: 1e-5,
            rotation: 0.0,
            keep_history: false,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolygonDiagnostics {
    /// `max |P_i| - min |P_i|`.
    pub radii_spread: f64,
    /// Max minus min of the gaps between consecutive sorted angles.
    pub angle_gap_spread: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterationRecord {
    pub residual_norm: f64,
    pub step: f64,
    pub radii_spread: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalPointReport {
    pub start_index: usize,
    pub config: Configuration,
    pub residual_norm: f64,
    pub converged: bool,
    pub iterations: usize,
    pub descent_steps: usize,
    pub polish_steps: usize,
    /// Start samples rejected for being too close to the boundary or diagonal.
    pub retries: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub antipodality_gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius_gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polygon: Option<PolygonDiagnostics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subtract: Option<SubtractCheck>,
    /// Index of the first converged report equal to this one modulo rotation
    /// and relabeling.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cluster: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub history: Vec<IterationRecord>,
}

impl CriticalPointReport {
    pub(crate) fn bare(start_index: usize, config: Configuration, residual_norm: f64) -> Self {
        Self {
            start_index,
            config,
            residual_norm,
            converged: false,
            iterations: 0,
            descent_steps: 0,
            polish_steps: 0,
            retries: 0,
            antipodality_gap: None,
            radius_gap: None,
            r0: None,
            polygon: None,
            subtract: None,
            cluster: None,
            history: Vec::new(),
        }
    }

    /// Fills the two-point or polygon diagnostics that apply to its size.
    pub(crate) fn diagnose(&mut self, r0: Option<f64>) {
        let pts = self.config.points();
        if pts.len() == 2 {
            let sum = pts[0].to_planar().add(&pts[1].to_planar());
            self.antipodality_gap = Some(sum.norm());
            if let Some(r0) = r0 {
                self.r0 = Some(r0);
                self.radius_gap = Some(pts.iter().map(|p| (p.r - r0).abs()).fold(0.0, f64::max));
            }
        } else if pts.len() >= 3 {
            self.polygon = Some(polygon_diagnostics(&self.config));
        }
    }
}

pub fn polygon_diagnostics(config: &Configuration) -> PolygonDiagnostics {
    let radii = config.radii();
    let radii_spread = radii.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - radii.iter().copied().fold(f64::INFINITY, f64::min);
    let mut angles: Vec<f64> = config.points().iter().map(|p| p.theta).collect();
    angles.sort_by(f64::total_cmp);
    let mut gaps: Vec<f64> = angles.windows(2).map(|w| w[1] - w[0]).collect();
    gaps.push(std::f64::consts::TAU - angles[angles.len() - 1] + angles[0]);
    let angle_gap_spread = gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - gaps.iter().copied().fold(f64::INFINITY, f64::min);
    PolygonDiagnostics {
        radii_spread,
        angle_gap_spread,
    }
}

fn spread(config: &Configuration) -> f64 {
    let radii = config.radii();
    radii.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - radii.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Random start for start `index`: radii uniform in `(a + δ, b - δ)`, angles
/// uniform, resampled until points are separated. Returns the start and the
/// number of rejected samples.
pub fn sample_start(
    ann: &Annulus,
    l: usize,
    index: usize,
    opts: &SearchOptions,
) -> Result<(Configuration, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(index as u64);
    let delta = opts.boundary_margin * ann.width();
    let sep = opts.min_separation * ann.width();
    for retries in 0..=opts.max_retries {
        let pts = (0..l)
            .map(|_| {
                let r = rng.gen_range(ann.a() + delta..ann.b() - delta);
                let t = rng.gen_range(0.0..std::f64::consts::TAU);
                PolarPoint::new(r, t + opts.rotation)
            })
            .collect::<Result<Vec<_>>>()?;
        let separated = (0..l).all(|i| (i + 1..l).all(|j| pts[i].distance(&pts[j]) >= sep));
        if separated {
            return Ok((Configuration::new(pts)?, retries));
        }
    }
    Err(Error::InvalidArgument(format!(
        "could not place {l} separated points after {} retries",
        opts.max_retries
    )))
}

/// Residual in the local frame of each point: `(e_i·x̂_i, e_i·x̂_i⊥)`.
struct Problem<'a> {
    ann: &'a Annulus,
    policy: SeriesPolicy,
    min_gap: f64,
}

impl Problem<'_> {
    fn config(&self, z: &DVector<f64>) -> Option<Configuration> {
        let l = z.len() / 2;
        let (a, b) = (self.ann.a(), self.ann.b());
        let mut pts = Vec::with_capacity(l);
        for i in 0..l {
            let r = z[2 * i];
            if !(r > a + self.min_gap && r < b - self.min_gap) {
                return None;
            }
            pts.push(PolarPoint::new(r, z[2 * i + 1]).ok()?);
        }
        for i in 0..l {
            for j in i + 1..l {
                if pts[i].distance(&pts[j]) < self.min_gap {
                    return None;
                }
            }
        }
        Configuration::new(pts).ok()
    }

    /// Stacked residual and `max_i |e_i|`.
    fn residual(
        &self,
        config: &Configuration,
        order: Option<usize>,
    ) -> Option<(DVector<f64>, f64)> {
        let mut ctrl = configuration_control(self.ann, config, self.policy).ok()?;
        if let Some(m) = order {
            ctrl = ctrl.with_order(m.max(ctrl.m_used));
        }
        let res = char_residual(self.ann, config, &ctrl).ok()?;
        let mut v = DVector::zeros(2 * config.len());
        for (i, e) in res.vectors.iter().enumerate() {
            v[2 * i] = e.radial_part;
            v[2 * i + 1] = e.tangential_part;
        }
        Some((v, res.norm))
    }

    fn jacobian(&self, z: &DVector<f64>, order: usize) -> Option<DMatrix<f64>> {
        let n = z.len();
        let mut jac = DMatrix::zeros(n, n);
        let h_r = 1e-6 * self.ann.width();
        for k in 0..n {
            let h = if k % 2 == 0 { h_r } else { h_r / z[k - 1] };
            let mut zp = z.clone();
            let mut zm = z.clone();
            zp[k] += h;
            zm[k] -= h;
            let (fp, _) = self.residual(&self.config(&zp)?, Some(order))?;
            let (fm, _) = self.residual(&self.config(&zm)?, Some(order))?;
            jac.set_column(k, &((fp - fm) / (2.0 * h)));
        }
        Some(jac)
    }

    /// Length of a step in `(Δr, r Δθ)` units.
    fn step_length(&self, z: &DVector<f64>, dz: &DVector<f64>) -> f64 {
        (0..z.len() / 2)
            .map(|i| {
                let dr = dz[2 * i];
                let dt = z[2 * i] * dz[2 * i + 1];
                dr * dr + dt * dt
            })
            .sum::<f64>()
            .sqrt()
    }
}

/// Removes the common angular shift from a step. The local-frame residual is
/// exactly invariant under rotating every point, so that direction is a null
/// vector of the Jacobian; without the projection, damped steps turn rounding
/// noise along it into drift around the orbit.
fn strip_rotation(dz: &mut DVector<f64>) {
    let l = dz.len() / 2;
    let mean = (0..l).map(|i| dz[2 * i + 1]).sum::<f64>() / l as f64;
    for i in 0..l {
        dz[2 * i + 1] -= mean;
    }
}

fn to_vector(config: &Configuration) -> DVector<f64> {
    DVector::from_iterator(
        2 * config.len(),
        config.points().iter().flat_map(|p| [p.r, p.theta]),
    )
}

/// Solves `e_i = 0` from one start.
pub fn refine(
    ann: &Annulus,
    start: &Configuration,
    opts: &SearchOptions,
) -> Result<CriticalPointReport> {
    refine_indexed(ann, start, 0, opts)
}

fn refine_indexed(
    ann: &Annulus,
    start: &Configuration,
    index: usize,
    opts: &SearchOptions,
) -> Result<CriticalPointReport> {
    let problem = Problem {
        ann,
        policy: SeriesPolicy::new(opts.series_tol)?,
        min_gap: 1e-4 * ann.width(),
    };
    let mut config = start.clone();
    let mut z = to_vector(&config);
    let (mut f, mut norm) = problem
        .residual(&config, None)
        .ok_or_else(|| Error::InvalidArgument("start configuration is not admissible".into()))?;
    let mut report = CriticalPointReport::bare(index, config.clone(), norm);
    let mut lambda = 1e-3;
    let max_step = 0.25 * ann.width();

    while report.iterations < opts.max_iter {
        report.iterations += 1;
        let order = configuration_control(ann, &config, problem.policy)?.m_used + 2;
        let Some(jac) = problem.jacobian(&z, order) else {
            break;
        };
        let polish = norm < opts.polish_threshold;

        let mut accepted = None;
        if polish {
            report.polish_steps += 1;
            let dz = jac
                .clone()
                .svd(true, true)
                .solve(&(-&f), 1e-10 * jac.norm())
                .ok();
            if let Some(mut dz) = dz {
                strip_rotation(&mut dz);
                let step = problem.step_length(&z, &dz);
                if norm < opts.residual_tol && step < opts.step_tol {
                    report.converged = true;
                    record(&mut report, opts, norm, step, &config);
                    break;
                }
                let trial = &z + &dz;
                if let Some(c) = problem.config(&trial) {
                    if let Some((ft, nt)) = problem.residual(&c, None) {
                        if ft.norm() <= f.norm() {
                            accepted = Some((trial, c, ft, nt, step));
                        }
                    }
                }
            }
        }

        if accepted.is_none() {
            if !polish {
                report.descent_steps += 1;
            }
            let jt = jac.transpose();
            let normal = &jt * &jac;
            let grad = &jt * &f;
            let floor = 1e-12 * normal.diagonal().max().max(f64::MIN_POSITIVE);
            while lambda < 1e16 {
                let mut damped = normal.clone();
                for k in 0..damped.nrows() {
                    damped[(k, k)] += lambda * (normal[(k, k)] + floor);
                }
                let Some(chol) = damped.cholesky() else {
                    lambda *= 10.0;
                    continue;
                };
                let mut dz = chol.solve(&(-&grad));
                strip_rotation(&mut dz);
                let len = problem.step_length(&z, &dz);
                if len > max_step {
                    dz *= max_step / len;
                }
                let step = problem.step_length(&z, &dz);
                if norm < opts.residual_tol && step < opts.step_tol {
                    report.converged = true;
                    break;
                }
                let trial = &z + &dz;
                let candidate = problem
                    .config(&trial)
                    .and_then(|c| problem.residual(&c, None).map(|(ft, nt)| (c, ft, nt)));
                match candidate {
                    Some((c, ft, nt)) if ft.norm() < f.norm() => {
                        lambda = (lambda / 10.0).max(1e-12);
                        accepted = Some((trial, c, ft, nt, step));
                        break;
                    }
                    _ => lambda *= 10.0,
                }
            }
            if report.converged {
                record(&mut report, opts, norm, 0.0, &config);
                break;
            }
        }

        let Some((trial, c, ft, nt, step)) = accepted else {
            // damping exhausted: a local minimum of the residual norm
            break;
        };
        z = trial;
        config = c;
        f = ft;
        norm = nt;
        record(&mut report, opts, norm, step, &config);
    }

    // canonical angles
    let pts = config
        .points()
        .iter()
        .map(|p| PolarPoint::new(p.r, normalize_angle(p.theta)))
        .collect::<Result<Vec<_>>>()?;
    report.config = Configuration::new(pts)?;
    report.residual_norm = norm;
    report.converged &= norm < opts.residual_tol;
    Ok(report)
}

fn record(
    report: &mut CriticalPointReport,
    opts: &SearchOptions,
    norm: f64,
    step: f64,
    config: &Configuration,
) {
    if opts.keep_history {
        report.history.push(IterationRecord {
            residual_norm: norm,
            step,
            radii_spread: spread(config),
        });
    }
}

/// Runs `n_starts` seeded searches for `l`-point critical configurations.
/// Every start yields a report, converged or not, ordered by start index.
pub fn find_critical_points(
    ann: &Annulus,
    l: usize,
    n_starts: usize,
    opts: &SearchOptions,
) -> Result<Vec<CriticalPointReport>> {
    if l == 0 {
        return Err(Error::InvalidArgument("need at least one point".into()));
    }
    if n_starts == 0 {
        return Err(Error::InvalidArgument("need at least one start".into()));
    }
    let r0 = if l == 2 {
        Some(solve_r0(ann, 1e-14)?.r0)
    } else {
        None
    };
    let run = |index: usize| -> Result<CriticalPointReport> {
        let (start, retries) = sample_start(ann, l, index, opts)?;
        let mut report = refine_indexed(ann, &start, index, opts)?;
        report.retries = retries;
        report.diagnose(r0);
        Ok(report)
    };
    let mut reports = if opts.parallel {
        (0..n_starts)
            .into_par_iter()
            .map(run)
            .collect::<Result<Vec<_>>>()?
    } else {
        (0..n_starts).map(run).collect::<Result<Vec<_>>>()?
    };
    assign_clusters(&mut reports, opts.cluster_threshold);
    Ok(reports)
}

/// Exploratory search for `m >= 3` points. Nothing is asserted about the
/// shape of the result; each report carries radii and angular-gap spreads.
pub fn polygon_explore(
    ann: &Annulus,
    m: usize,
    n_starts: usize,
    opts: &SearchOptions,
) -> Result<Vec<CriticalPointReport>> {
    if m < 3 {
        return Err(Error::InvalidArgument(format!(
            "polygon exploration needs at least 3 points (got {m}); use verify_two_point for pairs"
        )));
    }
    find_critical_points(ann, m, n_starts, opts)
}

fn assign_clusters(reports: &mut [CriticalPointReport], threshold: f64) {
    let mut representatives: Vec<usize> = Vec::new();
    for k in 0..reports.len() {
        if !reports[k].converged {
            continue;
        }
        let hit = representatives.iter().copied().find(|&rep| {
            configuration_distance(&reports[rep].config, &reports[k].config) < threshold
        });
        reports[k].cluster = Some(match hit {
            Some(rep) => reports[rep].start_index,
            None => {
                representatives.push(k);
                reports[k].start_index
            }
        });
    }
}

/// Distance between two configurations modulo rotation and relabeling: the
/// smallest, over rotations aligning the first point of `c1` with some point
/// of `c2` and over labelings, of the largest point-to-point distance.
pub fn configuration_distance(c1: &Configuration, c2: &Configuration) -> f64 {
    if c1.len() != c2.len() {
        return f64::INFINITY;
    }
    let p = c1.points();
    let mut best = f64::INFINITY;
    for anchor in c2.points() {
        let rotated = c2.rotated(p[0].theta - anchor.theta);
        let q = rotated.points();
        let mut used = vec![false; q.len()];
        best = best.min(matching(p, q, 0, &mut used, 0.0, best));
    }
    best
}

fn matching(
    p: &[PolarPoint],
    q: &[PolarPoint],
    i: usize,
    used: &mut [bool],
    worst: f64,
    bound: f64,
) -> f64 {
    if worst >= bound {
        return bound;
    }
    if i == p.len() {
        return worst;
    }
    let mut best = bound;
    for j in 0..q.len() {
        if used[j] {
            continue;
        }
        used[j] = true;
        let d = p[i].distance(&q[j]);
        best = best.min(matching(p, q, i + 1, used, worst.max(d), best));
        used[j] = false;
    }
    best
}
