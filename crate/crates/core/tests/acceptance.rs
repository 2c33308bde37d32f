//! Acceptance criteria, one test per criterion. Each prints a PASS/FAIL line
//! with the measured quantities before asserting.

mod common;

use std::time::Instant;

use bkm_core::cases::{builtin, run_case, CaseName, Report, RunOverrides};
use bkm_core::drm::DrmSystem;
use bkm_core::geometry::{EllipseDomain, KnotSet, Point2};
use bkm_core::gensol::GeneralSolutionKernel;
use bkm_core::kernels::{j0, j1, ParticularPair};
use bkm_core::linalg::factorization_count;
use bkm_core::solver::solve_linear;
use bkm_core::verify;

fn report(name: CaseName, n: usize, l: usize) -> Report<f64> {
    run_case(&builtin::<f64>(name), n, l, &RunOverrides::default()).expect("case solves")
}

fn verdict(id: u32, ok: bool, detail: String) {
    println!("criterion {id}: {} {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {id} failed: {detail}");
}

fn avg(r: &Report<f64>) -> f64 {
    r.summary.avg_abs_rel_err_pct.expect("nonzero exact values")
}

/// Largest `|u − sin x|` over 200 boundary samples of the Helmholtz case.
fn helmholtz_boundary_residual(n: usize) -> f64 {
    let case = builtin::<f64>(CaseName::Helmholtz);
    let knots = KnotSet::on_ellipse(&case.problem.domain, n, 0).unwrap();
    let sol = solve_linear(&case.problem, &knots).unwrap();
    (0..200)
        .map(|i| {
            let t = 2.0 * std::f64::consts::PI * (i as f64 + 0.5) / 200.0;
            let p = case.problem.domain.point_at(t);
            (sol.evaluate(p) - p.x.sin()).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn criterion_1_laplace() {
    let start = Instant::now();
    let r3 = report(CaseName::Laplace, 3, 0);
    let r5 = report(CaseName::Laplace, 5, 0);
    let elapsed = start.elapsed().as_secs_f64();
    let (e3, e5) = (r3.summary.max_abs_err, r5.summary.max_abs_err);
    verdict(
        1,
        e3 <= 5e-3 && e5 <= 5e-3 && elapsed < 1.0,
        format!("max abs err N=3 {e3:.2e}, N=5 {e5:.2e} (tol 5e-3); runtime {elapsed:.3} s (< 1 s)"),
    );
}

#[test]
fn criterion_2_helmholtz() {
    let e11 = report(CaseName::Helmholtz, 11, 0).summary.max_abs_err;
    let e7 = report(CaseName::Helmholtz, 7, 0).summary.max_abs_err;
    let (b5, b11) = (helmholtz_boundary_residual(5), helmholtz_boundary_residual(11));
    verdict(
        2,
        e11 <= 5e-3 && e7 <= 1e-2 && b11 < b5,
        format!("max abs err N=11 {e11:.2e} (tol 5e-3), N=7 {e7:.2e} (tol 1e-2); boundary residual N=5 {b5:.2e} > N=11 {b11:.2e}"),
    );
}

#[test]
fn criterion_3_convection_diffusion_x() {
    let with = avg(&report(CaseName::ConvDiffX, 7, 11));
    let without = avg(&report(CaseName::ConvDiffX, 7, 0));
    verdict(
        3,
        with <= 1.0 && without >= 5.0 * with,
        format!("avg |rel err| L=11 {with:.3}% (tol 1%), L=0 {without:.3}% (needs >= {:.3}%)", 5.0 * with),
    );
}

#[test]
fn criterion_4_convection_diffusion_xy() {
    let e = avg(&report(CaseName::ConvDiffXY, 7, 11));
    verdict(4, e <= 1.5, format!("avg |rel err| {e:.3}% (tol 1.5%)"));
}

#[test]
fn criterion_5_nonlinear_one_step() {
    let before = factorization_count();
    let r = report(CaseName::NonlinearPoisson, 5, 0);
    let factorizations = factorization_count() - before;
    let e = avg(&r);
    let spot = r
        .rows
        .iter()
        .find(|row| row.point == Point2::new(1.5, 0.0))
        .expect("table point (1.5, 0)");
    let spot_err = ((spot.computed - 2.25) / 2.25).abs() * 100.0;
    verdict(
        5,
        e <= 2.0 && spot_err <= 1.0 && factorizations == 2,
        format!(
            "avg |rel err| {e:.3}% (tol 2%); u(1.5, 0) = {:.4}, {spot_err:.3}% from 2.25 (tol 1%); {factorizations} factorizations",
            spot.computed
        ),
    );
}

#[test]
fn criterion_6_burger_one_step() {
    let e = avg(&report(CaseName::Burger, 5, 0));
    verdict(6, e <= 8.0, format!("avg |rel err| {e:.3}% (tol 8%)"));
}

#[test]
fn criterion_7_property_suite() {
    let mut failures = Vec::new();
    let mut check = |name: &str, value: f64, tol: f64| {
        let ok = value.is_finite() && value <= tol;
        println!("  {} {name}: {value:.3e} (tol {tol:.0e})", if ok { "ok  " } else { "FAIL" });
        if !ok {
            failures.push(name.to_string());
        }
    };

    let domain = EllipseDomain::<f64>::benchmark(Point2::origin());
    let knots = KnotSet::on_ellipse(&domain, 9, 6).unwrap();
    let mut interp = 0.0f64;
    let mut symmetry = 0.0f64;
    for pair in [
        ParticularPair::Multiquadric { shape: 1.0 },
        ParticularPair::ThinPlate,
        ParticularPair::Linear,
    ] {
        let sys = DrmSystem::build(&knots, pair).unwrap();
        let g: Vec<f64> = sys.nodes().iter().map(|p| (1.3 * p.x).sin() + p.y * p.y).collect();
        let alpha = sys.solve_alpha(&g).unwrap();
        let scale = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (p, &gi) in sys.nodes().iter().zip(&g) {
            interp = interp.max((sys.evaluate_interpolant(&alpha, *p) - gi).abs() / scale);
        }
        let a = sys.matrix();
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                symmetry = symmetry.max((a[(i, j)] - a[(j, i)]).abs());
            }
        }
    }
    check("DRM interpolation exactness", interp, 1e-9);
    check("interpolation matrix symmetry", symmetry, 0.0);

    for c in verify::pair_checks() {
        check(&c.name, c.value, 1e-6);
    }

    let mut bessel = 0.0f64;
    for i in 0..=200 {
        let x = 20.0 * i as f64 / 200.0;
        let envelope = |v: f64| v.abs().max((2.0 / (std::f64::consts::PI * x)).sqrt().min(1.0));
        let r0 = common::bessel_j_oracle(x, 0);
        let r1 = common::bessel_j_oracle(x, 1);
        bessel = bessel.max((j0(x) - r0).abs() / envelope(r0));
        bessel = bessel.max((j1(x) - r1).abs() / envelope(r1));
    }
    check("Bessel J0/J1 vs exact series on [0, 20]", bessel, 1e-10);

    for c in verify::finiteness_checks() {
        check(&c.name, c.value, 0.0);
    }
    for c in verify::residual_checks() {
        let helmholtz_family = c.name.contains("Helmholtz");
        if helmholtz_family {
            check(&c.name, c.value, 1e-5);
        }
    }
    for c in verify::normal_derivative_checks() {
        check(&c.name, c.value, 1e-6);
    }

    let mut collocation = 0.0f64;
    for name in [CaseName::Helmholtz, CaseName::Laplace, CaseName::ConvDiffX, CaseName::ConvDiffXY] {
        let case = builtin::<f64>(name);
        let r = run_case(&case, case.default_boundary, case.default_interior, &RunOverrides::default()).unwrap();
        collocation = collocation.max(r.solution.diagnostics.dirichlet_residual);
    }
    check("Dirichlet collocation residual at knots", collocation, 1e-8);

    let mut extra = 0usize;
    for name in [CaseName::NonlinearPoisson, CaseName::Burger] {
        let before = factorization_count();
        report(name, 5, 0);
        extra += (factorization_count() - before).abs_diff(2);
    }
    check("nonlinear path factorizations beyond one of A and one of J", extra as f64, 0.0);

    let kernel_helm = GeneralSolutionKernel::Helmholtz2D { lambda: 1.0f64 };
    check("Helmholtz2D J0(0) = 1", (kernel_helm.eval_2d(Point2::origin(), Point2::origin()).unwrap() - 1.0).abs(), 0.0);

    verdict(7, failures.is_empty(), format!("property suite failures: {failures:?}"));
}

#[test]
fn criterion_8_reproducibility() {
    let mut identical = true;
    for name in CaseName::ALL {
        let case = builtin::<f64>(name);
        let a = run_case(&case, case.default_boundary, case.default_interior, &RunOverrides::default()).unwrap();
        let b = run_case(&case, case.default_boundary, case.default_interior, &RunOverrides::default()).unwrap();
        identical &= a.rows.iter().zip(&b.rows).all(|(x, y)| x.computed.to_bits() == y.computed.to_bits());
    }
    verdict(
        8,
        identical,
        "reports bit-identical across runs; knot layouts are generated, so criteria 1-6 use tolerance bands".into(),
    );
}
