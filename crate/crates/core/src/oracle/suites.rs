//! Bundled validation runs, shared by the test suite and the command line.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{boundary_residual, central_gradient, fd_harmonic_check, fd_poisson_green};
use crate::error::Result;
use crate::functional::{configuration_control, grad_hamiltonian, hamiltonian, Configuration};
use crate::geometry::{to_polar, Annulus, PlanarPoint, PolarPoint};
use crate::green::{grad_green_x, grad_robin, green, robin, GradientValue};
use crate::series::{SeriesControl, SeriesPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Green,
    Gradients,
    Poisson,
    All,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: &'static str,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationSummary {
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

const SEED: u64 = 0x5eed;
// Both are for an annulus of width 1 and scale with it: the step linearly,
// the tolerance inversely, as gradients carry units of 1/length.
const FD_STEP: f64 = 1e-5;
const GRADIENT_TOL: f64 = 1e-7;
const POISSON_RESOLUTION: usize = 256;
const POISSON_TOL: f64 = 5e-3;

/// `n` seeded interior points whose radii keep `r²/b²` and `a²/r²` at most
/// `q_max`; falls back to the middle half of the annulus when that band is
/// empty.
pub fn sample_interior_points(ann: &Annulus, n: usize, q_max: f64, seed: u64) -> Vec<PolarPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lo = ann.a() / q_max.sqrt();
    let mut hi = ann.b() * q_max.sqrt();
    if lo >= hi {
        lo = ann.a() + 0.25 * ann.width();
        hi = ann.b() - 0.25 * ann.width();
    }
    (0..n)
        .map(|_| {
            let r = rng.gen_range(lo..hi);
            let t = rng.gen_range(0.0..std::f64::consts::TAU);
            PolarPoint::new(r, t).expect("sampled radius is positive")
        })
        .collect()
}

fn check(
    suite: &'static str,
    name: &'static str,
    value: f64,
    threshold: f64,
    passed: bool,
    detail: String,
) -> CheckResult {
    CheckResult {
        suite,
        name,
        value,
        threshold,
        passed,
        detail,
    }
}

pub fn run_suite(ann: &Annulus, suite: Suite, tol: f64) -> Result<ValidationSummary> {
    let policy = SeriesPolicy::new(tol)?;
    let mut checks = Vec::new();
    if matches!(suite, Suite::Green | Suite::All) {
        checks.extend(green_suite(ann, policy)?);
    }
    if matches!(suite, Suite::Gradients | Suite::All) {
        checks.extend(gradient_suite(ann)?);
    }
    if matches!(suite, Suite::Poisson | Suite::All) {
        checks.extend(poisson_suite(ann, policy)?);
    }
    Ok(ValidationSummary {
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn green_suite(ann: &Annulus, policy: SeriesPolicy) -> Result<Vec<CheckResult>> {
    let pts = sample_interior_points(ann, 1000, 0.9, SEED);
    let mut gap: f64 = 0.0;
    let mut min_value = f64::INFINITY;
    for pair in pts.chunks_exact(2) {
        let (x, y) = (&pair[0], &pair[1]);
        let ctrl = SeriesControl::for_radii(ann, &[x.r, y.r], policy)?;
        let gxy = green(ann, x, y, &ctrl)?;
        let gyx = green(ann, y, x, &ctrl)?;
        gap = gap.max((gxy - gyx).abs());
        min_value = min_value.min(gxy.min(gyx));
    }
    let mut out = vec![
        check(
            "green",
            "symmetry",
            gap,
            2.0 * policy.tol,
            gap < 2.0 * policy.tol,
            "max |G(x,y) - G(y,x)| over 500 pairs".into(),
        ),
        check(
            "green",
            "positivity",
            min_value,
            0.0,
            min_value > 0.0,
            "min G(x,y) over 500 pairs".into(),
        ),
    ];

    let y = PolarPoint::new(ann.geometric_mean(), 0.3)?;
    let boundary = SeriesControl::for_pair(ann, ann.b(), y.r, policy)?
        .m_used
        .max(SeriesControl::for_pair(ann, ann.a(), y.r, policy)?.m_used);
    let threshold = 10.0 * policy.tol;
    out.push(match boundary_residual(ann, &y, boundary, 256) {
        Ok(res) => check(
            "green",
            "boundary",
            res,
            threshold,
            res < threshold,
            format!("order {boundary}, 256 angles per circle"),
        ),
        Err(e) => check(
            "green",
            "boundary",
            f64::NAN,
            threshold,
            false,
            e.to_string(),
        ),
    });

    let mid = PolarPoint::new(ann.geometric_mean(), 0.0)?;
    // large enough that the h² stencil error, not rounding, dominates
    let h = 0.02 * ann.width();
    let samples = [
        PolarPoint::new(ann.a() + 0.3 * ann.width(), 1.0)?,
        PolarPoint::new(ann.a() + 0.7 * ann.width(), 2.5)?,
        PolarPoint::new(ann.a() + 0.5 * ann.width(), 4.0)?,
    ];
    let rep = fd_harmonic_check(ann, &mid, &samples, h)?;
    out.push(check(
        "green",
        "harmonicity",
        rep.order_estimate,
        2.0,
        (1.5..=2.5).contains(&rep.order_estimate),
        format!(
            "residual {:e} at h = {h:e}, {:e} at h/2",
            rep.residual_h, rep.residual_h2
        ),
    ));
    Ok(out)
}

fn gradient_error(analytic: &GradientValue, fd: PlanarPoint) -> f64 {
    analytic.vector.sub(&fd).norm()
}

fn gradient_suite(ann: &Annulus) -> Result<Vec<CheckResult>> {
    let policy = SeriesPolicy::new(1e-14)?;
    let step = FD_STEP * ann.width();
    let limit = GRADIENT_TOL / ann.width();
    let pts = sample_interior_points(ann, 400, 0.85, SEED + 1);
    let min_sep = 0.25 * ann.width();

    let mut green_err: f64 = 0.0;
    let mut pairs = 0;
    for pair in pts.chunks_exact(2) {
        let (x, y) = (pair[0], pair[1]);
        if x.distance(&y) < min_sep {
            continue;
        }
        pairs += 1;
        let ctrl =
            SeriesControl::for_radii(ann, &[x.r - 2.0 * step, x.r + 2.0 * step, y.r], policy)?;
        let analytic = grad_green_x(ann, &x, &y, &ctrl)?;
        let fd = central_gradient(
            |p| green(ann, &to_polar(p).unwrap(), &y, &ctrl).unwrap(),
            x.to_planar(),
            step,
        );
        green_err = green_err.max(gradient_error(&analytic, fd));
    }

    let mut robin_err: f64 = 0.0;
    for y in pts.iter().take(200) {
        let ctrl = SeriesControl::for_radii(ann, &[y.r - 2.0 * step, y.r + 2.0 * step], policy)?;
        let analytic = grad_robin(ann, y, &ctrl)?;
        let fd = central_gradient(
            |p| robin(ann, &to_polar(p).unwrap(), &ctrl).unwrap(),
            y.to_planar(),
            step,
        );
        robin_err = robin_err.max(gradient_error(&analytic, fd));
    }

    let mut ham_err: f64 = 0.0;
    let mut configs = 0;
    let mut cursor = pts.iter().copied().cycle().skip(1);
    while configs < 200 {
        let l = 2 + configs % 2;
        let candidate: Vec<PolarPoint> = cursor.by_ref().take(l).collect();
        let separated =
            (0..l).all(|i| (i + 1..l).all(|j| candidate[i].distance(&candidate[j]) >= min_sep));
        if !separated {
            continue;
        }
        configs += 1;
        let cfg = Configuration::new(candidate.clone())?;
        // fixed order so the difference quotients see one smooth function
        let base = configuration_control(ann, &cfg, policy)?;
        let ctrl = base.with_order(base.m_used + 4);
        let analytic = grad_hamiltonian(ann, &cfg, &ctrl)?;
        for i in 0..l {
            let fd = central_gradient(
                |p| {
                    let mut pts = candidate.clone();
                    pts[i] = to_polar(p).unwrap();
                    hamiltonian(ann, &Configuration::new(pts).unwrap(), &ctrl).unwrap()
                },
                candidate[i].to_planar(),
                step,
            );
            ham_err = ham_err.max(gradient_error(&analytic[i], fd));
        }
    }

    Ok(vec![
        check(
            "gradients",
            "grad_green_x",
            green_err,
            limit,
            green_err <= limit,
            format!("{pairs} pairs, h = {step:e}"),
        ),
        check(
            "gradients",
            "grad_robin",
            robin_err,
            limit,
            robin_err <= limit,
            format!("200 points, h = {step:e}"),
        ),
        check(
            "gradients",
            "grad_hamiltonian",
            ham_err,
            limit,
            ham_err <= limit,
            format!("{configs} configurations (l = 2, 3), h = {step:e}"),
        ),
    ])
}

fn poisson_suite(ann: &Annulus, policy: SeriesPolicy) -> Result<Vec<CheckResult>> {
    let n = POISSON_RESOLUTION;
    let y = PolarPoint::new(ann.a() + 0.5 * ann.width(), 0.0)?;
    let grid = fd_poisson_green(ann, &y, n, n)?;
    let exclusion = 0.2 * ann.width();
    let mut worst: f64 = 0.0;
    for i in 1..n {
        for j in 0..n {
            let x = grid.node(i, j);
            if x.distance(&y) <= exclusion {
                continue;
            }
            let ctrl = SeriesControl::for_radii(ann, &[x.r, y.r], policy)?;
            worst = worst.max((grid.value(i, j) - green(ann, &x, &y, &ctrl)?).abs());
        }
    }
    let flux = grid.flux();
    let rel = (flux - std::f64::consts::TAU).abs() / std::f64::consts::TAU;
    Ok(vec![
        check(
            "poisson",
            "agreement",
            worst,
            POISSON_TOL,
            worst <= POISSON_TOL,
            format!("{n} x {n} grid, nodes farther than {exclusion} from the pole"),
        ),
        check(
            "poisson",
            "flux",
            rel,
            0.01,
            rel < 0.01,
            format!("boundary flux {flux}, expected 2π"),
        ),
    ])
}
