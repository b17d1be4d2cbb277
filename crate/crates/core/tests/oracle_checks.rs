mod common;

use std::f64::consts::PI;

use annulus_core::green::green;
use annulus_core::oracle::{
    boundary_residual, fd_harmonic_check, fd_poisson_green, grid_minimize_two_point,
    laplacian_report, run_suite, Suite,
};
use annulus_core::solver::solve_r0;
use annulus_core::{Error, PlanarPoint, SeriesControl, SeriesPolicy};
use common::{ann, pt};

fn probes() -> Vec<PlanarPoint> {
    vec![
        PlanarPoint::new(1.2, 0.3),
        PlanarPoint::new(-0.4, 1.5),
        PlanarPoint::new(0.9, -1.1),
    ]
}

#[test]
fn stencil_annihilates_constants() {
    let rep = laplacian_report(|_| 3.7, &probes(), 1e-3);
    assert!(rep.residual_h < 1e-12 && rep.residual_h2 < 1e-12);
}

#[test]
fn stencil_is_second_order_on_log() {
    let rep = laplacian_report(|p| p.norm().ln(), &probes(), 1e-2);
    assert!(
        (1.5..=2.5).contains(&rep.order_estimate),
        "{}",
        rep.order_estimate
    );
}

#[test]
fn regular_part_is_harmonic() {
    let an = ann(1.0, 2.0);
    let rep = fd_harmonic_check(&an, &pt(1.5, 0.0), &[pt(1.4, PI / 3.0)], 1e-3).unwrap();
    assert!(
        (1.5..=2.5).contains(&rep.order_estimate),
        "{}",
        rep.order_estimate
    );
    assert!(rep.residual_h < 10.0 * 1e-6);
}

#[test]
fn harmonic_check_rejects_samples_near_boundary_or_pole() {
    let an = ann(1.0, 2.0);
    let y = pt(1.5, 0.0);
    assert!(matches!(
        fd_harmonic_check(&an, &y, &[pt(1.002, 1.0)], 1e-3),
        Err(Error::SampleTooClose(_))
    ));
    assert!(matches!(
        fd_harmonic_check(&an, &y, &[pt(1.501, 0.0)], 1e-3),
        Err(Error::SampleTooClose(_))
    ));
}

#[test]
fn boundary_residual_without_series_is_the_full_tail() {
    let an = ann(1.0, 2.0);
    let r: f64 = 1.5;
    let res = boundary_residual(&an, &pt(r, 0.3), 0, 256).unwrap();
    // the M = 0 error is the whole log series, largest where x lines up with y
    let expected = (-(1.0 - r / 2.0).ln()).max(-(1.0 - 1.0 / r).ln());
    assert!(
        (res - expected).abs() < 1e-3 * expected,
        "{res} vs {expected}"
    );
}

#[test]
fn boundary_residual_shrinks_with_order() {
    let an = ann(1.0, 2.0);
    let y = pt(1.5, 0.3);
    let mut prev = f64::INFINITY;
    for m in [1, 2, 4, 8, 16, 32, 64] {
        let res = boundary_residual(&an, &y, m, 256).unwrap();
        assert!(res <= prev);
        prev = res;
    }
    let order = SeriesControl::for_pair(&an, 2.0, 1.5, SeriesPolicy::new(1e-10).unwrap())
        .unwrap()
        .m_used;
    assert!(boundary_residual(&an, &y, order, 256).unwrap() < 1e-9);
}

#[test]
fn boundary_residual_enforces_ratio_cap() {
    let an = ann(1.0, 2.0);
    assert!(boundary_residual(&an, &pt(1.95, 0.0), 10, 64).is_err());
    assert!(boundary_residual(&an, &pt(1.02, 0.0), 10, 64).is_err());
}

#[test]
fn poisson_error_falls_with_resolution() {
    let an = ann(1.0, 2.0);
    let y = pt(1.5, 0.0);
    let policy = SeriesPolicy::new(1e-12).unwrap();
    let worst = |n: usize| {
        let grid = fd_poisson_green(&an, &y, n, n).unwrap();
        let mut w: f64 = 0.0;
        for i in 1..n {
            for j in 0..n {
                let x = grid.node(i, j);
                if x.distance(&y) > 0.2 {
                    let c = SeriesControl::for_radii(&an, &[x.r, 1.5], policy).unwrap();
                    w = w.max((grid.value(i, j) - green(&an, &x, &y, &c).unwrap()).abs());
                }
            }
        }
        w
    };
    let (e64, e128) = (worst(64), worst(128));
    assert!(e128 < e64, "{e128} vs {e64}");
}

#[test]
fn poisson_solution_is_mirror_symmetric() {
    let an = ann(1.0, 2.0);
    let n = 64;
    let grid = fd_poisson_green(&an, &pt(1.5, 0.0), n, n).unwrap();
    for i in 1..n {
        for j in 1..n / 2 {
            assert!((grid.value(i, j) - grid.value(i, n - j)).abs() < 1e-12);
        }
    }
    assert!((grid.flux() - 2.0 * PI).abs() < 0.01 * 2.0 * PI);
}

#[test]
fn richardson_extrapolated_poisson_matches_series() {
    let an = ann(1.0, 2.0);
    let (x, y) = (pt(1.5, 0.0), pt(1.5, PI));
    let ctrl = SeriesControl::for_radii(&an, &[1.5], SeriesPolicy::new(1e-14).unwrap()).unwrap();
    let exact = green(&an, &x, &y, &ctrl).unwrap();
    let coarse = fd_poisson_green(&an, &y, 128, 128).unwrap().value(64, 0);
    let fine = fd_poisson_green(&an, &y, 256, 256).unwrap().value(128, 0);
    let extrapolated = (4.0 * fine - coarse) / 3.0;
    assert!(exact > 0.0);
    assert!((fine - exact).abs() < 2e-8);
    assert!(
        (extrapolated - exact).abs() < 1e-9,
        "{extrapolated} vs {exact}"
    );
}

#[test]
fn poisson_rejects_coarse_grids_and_off_node_poles() {
    let an = ann(1.0, 2.0);
    assert!(fd_poisson_green(&an, &pt(1.5, 0.0), 32, 64).is_err());
    assert!(fd_poisson_green(&an, &pt(1.5, 0.01), 64, 64).is_err());
}

#[test]
fn grid_sweep_finds_the_antipodal_cell() {
    let an = ann(1.0, 2.0);
    let r0 = solve_r0(&an, 1e-12).unwrap().r0;
    let best = grid_minimize_two_point(&an, 64).unwrap();
    assert!((best.delta_theta - PI).abs() < 2.0 * PI / 64.0);
    assert!((best.r1 - r0).abs() < 1.0 / 64.0 && (best.r2 - r0).abs() < 1.0 / 64.0);

    let coarse = grid_minimize_two_point(&an, 8).unwrap();
    assert!(
        coarse.cell.2 == 3 || coarse.cell.2 == 4,
        "{:?}",
        coarse.cell
    );
}

#[test]
fn grid_sweep_skips_the_diagonal() {
    let an = ann(1.0, 2.0);
    for n in [8, 16, 32] {
        let best = grid_minimize_two_point(&an, n).unwrap();
        let (i1, i2, k) = best.cell;
        assert!(!(i1 == i2 && (k == 0 || k == n - 1)));
        assert!(best.value.is_finite());
    }
    assert!(grid_minimize_two_point(&an, 4).is_err());
}

#[test]
fn suites_pass_on_other_geometries() {
    for (a, b) in [(0.5, 1.0), (2.0, 3.0)] {
        let summary = run_suite(&ann(a, b), Suite::Green, 1e-10).unwrap();
        assert!(summary.passed, "{:?}", summary.checks);
        let summary = run_suite(&ann(a, b), Suite::Gradients, 1e-10).unwrap();
        assert!(summary.passed, "{:?}", summary.checks);
    }
}
