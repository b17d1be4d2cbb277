//! End-to-end acceptance run. Prints one line per criterion and exits
//! nonzero when any of them fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use annulus_core::functional::{
    char_residual, configuration_control, subtract_bracket, subtract_identity,
};
use annulus_core::oracle::{grid_minimize_two_point, run_suite, Suite};
use annulus_core::solver::{
    find_critical_points, polygon_explore, profile, solve_r0, SearchOptions,
};
use annulus_core::{Annulus, Configuration, PolarPoint, SeriesControl, SeriesPolicy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GEOMETRIES: [(f64, f64); 4] = [(1.0, 2.0), (0.5, 1.0), (1.0, 5.0), (2.0, 3.0)];

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn ann(a: f64, b: f64) -> Annulus {
    Annulus::new(a, b).unwrap()
}

fn r0_bracket() -> Outcome {
    let mut worst_residual: f64 = 0.0;
    let mut slowest = Duration::ZERO;
    let mut inside = true;
    for (a, b) in GEOMETRIES {
        let t = Instant::now();
        let sol = solve_r0(&ann(a, b), 1e-13).unwrap();
        slowest = slowest.max(t.elapsed());
        inside &= (a * b).sqrt() < sol.r0 && sol.r0 < a.powf(0.25) * b.powf(0.75);
        worst_residual = worst_residual.max(sol.residual.abs());
    }
    let passed = inside && worst_residual < 1e-12 && slowest < Duration::from_secs(1);
    outcome(
        passed,
        format!("inside bracket: {inside}, max |f-g| = {worst_residual:.2e}, slowest {slowest:?}"),
    )
}

fn profile_zeros() -> Outcome {
    let policy = SeriesPolicy::new(1e-17).unwrap();
    let mut g_zero: f64 = 0.0;
    let mut f_zero: f64 = 0.0;
    let mut ends: f64 = 0.0;
    for (a, b) in GEOMETRIES {
        let an = ann(a, b);
        let at = |r: f64| {
            profile(
                &an,
                r,
                &SeriesControl::for_radii(&an, &[r], policy).unwrap(),
            )
            .unwrap()
        };
        g_zero = g_zero.max(at((a * b).sqrt()).g.abs());
        f_zero = f_zero.max(at(a.powf(0.25) * b.powf(0.75)).f.abs());
        let eps = 1e-6 * (b - a);
        ends = ends
            .max((at(a + eps).f - 1.5).abs())
            .max((at(b - eps).f + 0.5).abs());
    }
    let passed = g_zero <= 1e-12 && f_zero <= 1e-14 && ends <= 1e-4;
    outcome(passed, format!("|g(sqrt(ab))| = {g_zero:.2e}, |f(a^1/4 b^3/4)| = {f_zero:.2e}, endpoint error {ends:.2e}"))
}

fn two_point_search() -> Outcome {
    let an = ann(1.0, 2.0);
    let r0 = solve_r0(&an, 1e-14).unwrap().r0;
    let t = Instant::now();
    let reports = find_critical_points(&an, 2, 20, &SearchOptions::default()).unwrap();
    let elapsed = t.elapsed();
    let converged: Vec<_> = reports.iter().filter(|r| r.converged).collect();
    let mut anti: f64 = 0.0;
    let mut radius: f64 = 0.0;
    for r in &converged {
        let p = r.config.points();
        anti = anti.max(p[0].to_planar().add(&p[1].to_planar()).norm());
        radius = radius.max(p.iter().map(|q| (q.r - r0).abs()).fold(0.0, f64::max));
    }
    let passed =
        converged.len() >= 15 && anti < 1e-6 && radius < 1e-6 && elapsed < Duration::from_secs(30);
    outcome(
        passed,
        format!(
            "{}/20 converged, max |P1+P2| = {anti:.2e}, max ||P_i|-r0| = {radius:.2e}, {elapsed:?}",
            converged.len()
        ),
    )
}

fn characterization() -> Outcome {
    let an = ann(1.0, 2.0);
    let r0 = solve_r0(&an, 1e-14).unwrap().r0;
    let policy = SeriesPolicy::new(1e-16).unwrap();
    let norm = |r1: f64, r2: f64| {
        let cfg = Configuration::new(vec![
            PolarPoint::new(r1, 0.0).unwrap(),
            PolarPoint::new(r2, PI).unwrap(),
        ])
        .unwrap();
        let ctrl = configuration_control(&an, &cfg, policy).unwrap();
        char_residual(&an, &cfg, &ctrl).unwrap().norm
    };
    let base = norm(r0, r0);
    let bumped = [
        norm(1.01 * r0, r0),
        norm(r0, 1.01 * r0),
        norm(0.99 * r0, r0),
        norm(r0, 0.99 * r0),
    ];
    let weakest = bumped.iter().copied().fold(f64::INFINITY, f64::min);
    let passed = base < 1e-8 && weakest >= 1e3 * base;
    outcome(
        passed,
        format!(
            "norm at r0 = {base:.2e}, smallest perturbed norm = {weakest:.2e} (ratio {:.1e})",
            weakest / base
        ),
    )
}

fn subtract_signs() -> Outcome {
    let an = ann(1.0, 2.0);
    let policy = SeriesPolicy::new(1e-14).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut lhs_max = f64::NEG_INFINITY;
    let mut rhs_min = f64::INFINITY;
    let mut margin = f64::INFINITY;
    let mut n = 0;
    while n < 100 {
        let r1: f64 = rng.gen_range(1.05..1.95);
        let r2: f64 = rng.gen_range(1.05..1.95);
        if (r1 - r2).abs() < 1e-3 {
            continue;
        }
        let (big, small) = if r1 > r2 { (r1, r2) } else { (r2, r1) };
        let p1 = PolarPoint::new(big, rng.gen_range(0.0..2.0 * PI)).unwrap();
        let p2 = PolarPoint::new(small, rng.gen_range(0.0..2.0 * PI)).unwrap();
        let ctrl = SeriesControl::for_radii(&an, &[big, small], policy).unwrap();
        let sides = subtract_identity(&an, &p1, &p2, &ctrl).unwrap();
        lhs_max = lhs_max.max(sides.lhs);
        rhs_min = rhs_min.min(sides.rhs);
        for m in 1..=50 {
            let (factor, bound) = subtract_bracket(&an, &p1, &p2, m);
            margin = margin.min(factor - bound);
        }
        n += 1;
    }
    let passed = lhs_max < 0.0 && rhs_min >= -1e-12 && margin >= -1e-14;
    outcome(
        passed,
        format!(
            "max LHS = {lhs_max:.3e}, min RHS = {rhs_min:.3e}, min bracket margin = {margin:.2e}"
        ),
    )
}

fn suite_outcome(suite: Suite, limit: Duration) -> Outcome {
    let t = Instant::now();
    let summary = run_suite(&ann(1.0, 2.0), suite, 1e-10).unwrap();
    let elapsed = t.elapsed();
    let parts: Vec<String> = summary
        .checks
        .iter()
        .map(|c| {
            format!(
                "{} {:.2e}{}",
                c.name,
                c.value,
                if c.passed { "" } else { " FAIL" }
            )
        })
        .collect();
    outcome(
        summary.passed && elapsed < limit,
        format!("{}; {elapsed:?}", parts.join(", ")),
    )
}

fn grid_oracle() -> Outcome {
    let an = ann(1.0, 2.0);
    let r0 = solve_r0(&an, 1e-14).unwrap().r0;
    let n = 64;
    let best = grid_minimize_two_point(&an, n).unwrap();
    let dtheta = (best.delta_theta - PI).abs();
    let dr = (best.r1 - r0).abs().max((best.r2 - r0).abs());
    let passed = dtheta < 2.0 * PI / n as f64 && dr < an.width() / n as f64;
    outcome(
        passed,
        format!(
            "|dtheta - pi| = {dtheta:.4}, max |r_i - r0| = {dr:.4}, cell {:.4}",
            an.width() / n as f64
        ),
    )
}

fn polygon() -> Outcome {
    let reports = polygon_explore(&ann(1.0, 2.0), 3, 20, &SearchOptions::default()).unwrap();
    let converged: Vec<_> = reports.iter().filter(|r| r.converged).collect();
    let with_diagnostics = converged.iter().filter(|r| r.polygon.is_some()).count();
    let spreads = converged
        .iter()
        .filter_map(|r| r.polygon)
        .fold((0.0f64, 0.0f64), |(rs, gs), d| {
            (rs.max(d.radii_spread), gs.max(d.angle_gap_spread))
        });
    outcome(
        with_diagnostics >= 10,
        format!(
            "{}/20 converged with diagnostics; largest radii spread {:.2e}, largest gap spread {:.2e} (reported only)",
            with_diagnostics, spreads.0, spreads.1
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("r0 bracket and residual", r0_bracket),
        ("profile zeros and endpoint values", profile_zeros),
        ("two-point search is antipodal at r0", two_point_search),
        (
            "characteristic residual at r0 and under perturbation",
            characterization,
        ),
        (
            "subtracted identity signs and bracket bound",
            subtract_signs,
        ),
        ("Green function property suite", || {
            suite_outcome(Suite::Green, Duration::from_secs(10))
        }),
        ("finite-difference Poisson agreement", || {
            suite_outcome(Suite::Poisson, Duration::from_secs(60))
        }),
        ("analytic gradients against central differences", || {
            suite_outcome(Suite::Gradients, Duration::MAX)
        }),
        ("grid sweep locates the antipodal optimum", grid_oracle),
        ("triangle exploration diagnostics", polygon),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let result = run();
        if !result.passed {
            failures += 1;
        }
        println!(
            "[{}] {:>2}. {name}: {}",
            if result.passed { "PASS" } else { "FAIL" },
            k + 1,
            result.detail
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
