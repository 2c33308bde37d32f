mod common;

use std::sync::Arc;

use bkm_core::drm::{Derivative, DrmSystem, OperatorSpec};
use bkm_core::geometry::{dr_dn, EllipseDomain, KnotSet, Point2};
use bkm_core::gensol::GeneralSolutionKernel;
use bkm_core::kernels::{bessel_eval, BesselSpec, ParticularPair};
use bkm_core::linalg::hadamard;
use bkm_core::solver::{solve_linear, ProblemSpec};
use common::{bessel_i_oracle, bessel_j_oracle, fd_laplacian, Lcg};
use proptest::prelude::*;

fn domain() -> impl Strategy<Value = EllipseDomain<f64>> {
    (-2.0..2.0f64, -2.0..2.0f64, 0.5..3.0f64, 0.3..1.0f64)
        .prop_map(|(cx, cy, a, ratio)| EllipseDomain::new(Point2::new(cx, cy), a, a * ratio).unwrap())
}

fn pair() -> impl Strategy<Value = ParticularPair<f64>> {
    prop_oneof![
        (0.5..3.0f64).prop_map(|c| ParticularPair::Multiquadric { shape: c }),
        Just(ParticularPair::Linear),
        Just(ParticularPair::ThinPlate),
    ]
}

fn random_values(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = Lcg(seed);
    (0..n).map(|_| rng.next()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn interpolation_reproduces_nodal_data(d in domain(), p in pair(), n in 4usize..12, l in 0usize..6, seed: u64) {
        let knots = KnotSet::on_ellipse(&d, n, l).unwrap();
        let sys = DrmSystem::build(&knots, p).unwrap();
        let g = random_values(seed, knots.len());
        let alpha = sys.solve_alpha(&g).unwrap();
        for (i, x) in knots.positions().enumerate() {
            prop_assert!((sys.evaluate_interpolant(&alpha, x) - g[i]).abs() <= 1e-9);
        }
        // Side conditions: the RBF coefficients are orthogonal to the tail.
        let rbf = &alpha[..knots.len()];
        let sums = [
            rbf.iter().zip(knots.positions()).map(|(a, x)| a * x.x).sum::<f64>(),
            rbf.iter().zip(knots.positions()).map(|(a, x)| a * x.y).sum::<f64>(),
            rbf.iter().sum::<f64>(),
        ];
        let scale = rbf.iter().fold(1.0f64, |m, a| m.max(a.abs()));
        prop_assert!(sums.iter().all(|s| s.abs() <= 1e-9 * scale));
    }

    #[test]
    fn linear_data_is_reproduced_everywhere(d in domain(), p in pair(), n in 4usize..10, coef in prop::array::uniform3(-2.0..2.0f64)) {
        let knots = KnotSet::on_ellipse(&d, n, 1).unwrap();
        let sys = DrmSystem::build(&knots, p).unwrap();
        let lin = |x: Point2<f64>| coef[0] * x.x + coef[1] * x.y + coef[2];
        let g: Vec<f64> = knots.positions().map(lin).collect();
        let alpha = sys.solve_alpha(&g).unwrap();
        let probe = d.center() + Point2::new(0.3 * d.semi_major(), -0.2 * d.semi_minor());
        prop_assert!((sys.evaluate_interpolant(&alpha, probe) - lin(probe)).abs() <= 1e-8);
    }

    #[test]
    fn interpolation_matrix_is_symmetric(d in domain(), p in pair(), n in 3usize..12, l in 0usize..6) {
        let knots = KnotSet::on_ellipse(&d, n, l).unwrap();
        let sys = DrmSystem::build(&knots, p).unwrap();
        prop_assert!(sys.matrix().is_symmetric());
    }

    #[test]
    fn affine_map_agrees_with_direct_solve(d in domain(), c in 0.8..2.0f64, n in 5usize..9, l in 0usize..4, seed: u64) {
        let knots = KnotSet::on_ellipse(&d, n, l).unwrap();
        let sys = DrmSystem::build(&knots, ParticularPair::Multiquadric { shape: c }).unwrap();
        let op = OperatorSpec::identity().with(Derivative::Dx, -1.0).with(Derivative::Dyy, 0.5);
        let m = knots.len();
        let f = random_values(seed, m);
        let map = sys.particular_affine_map(&op, &f).unwrap();
        let mut rng = Lcg(seed ^ 0x5eed);
        for _ in 0..20 {
            let u: Vec<f64> = (0..m).map(|_| rng.next()).collect();
            let su = sys.apply_operator(&op, &u).unwrap();
            let g: Vec<f64> = f.iter().zip(&su).map(|(a, b)| a + b).collect();
            let alpha = sys.solve_alpha(&g).unwrap();
            let pu = map.p.mul_vec(&u).unwrap();
            let scale = alpha.iter().fold(1.0f64, |s, a| s.max(a.abs()));
            for (i, x) in knots.positions().enumerate() {
                let direct = sys.evaluate_up(&alpha, x);
                prop_assert!((pu[i] + map.q[i] - direct).abs() <= 1e-9 * scale, "node {}", i);
            }
        }
    }

    #[test]
    fn boundary_knots_lie_on_the_ellipse(d in domain(), n in 1usize..40) {
        let knots = KnotSet::on_ellipse(&d, n, 0).unwrap();
        for k in knots.boundary() {
            prop_assert!((d.implicit(k.position) - 1.0).abs() <= 1e-12);
            let nv = k.normal.unwrap();
            prop_assert!((nv.norm() - 1.0).abs() <= 1e-12);
            prop_assert!((k.position - d.center()).dot(nv) > 0.0);
        }
    }

    #[test]
    fn interior_knots_lie_strictly_inside(d in domain(), l in 0usize..30) {
        let knots = KnotSet::on_ellipse(&d, 6, l).unwrap();
        prop_assert_eq!(knots.n_interior(), l);
        prop_assert!(knots.interior().iter().all(|k| d.contains_strictly(k.position)));
    }

    #[test]
    fn dr_dn_is_a_cosine(x in prop::array::uniform2(-5.0..5.0f64), xk in prop::array::uniform2(-5.0..5.0f64), t in 0.0..6.3f64) {
        let n = Point2::new(t.cos(), t.sin());
        let v = dr_dn(Point2::new(x[0], x[1]), Point2::new(xk[0], xk[1]), n);
        prop_assert!(v.abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn hadamard_commutes_and_has_unit_identity(a in prop::collection::vec(-1e3..1e3f64, 0..20)) {
        let b: Vec<f64> = a.iter().rev().copied().collect();
        prop_assert_eq!(hadamard(&a, &b).unwrap(), hadamard(&b, &a).unwrap());
        prop_assert_eq!(hadamard(&a, &vec![1.0; a.len()]).unwrap(), a.clone());
    }

    #[test]
    fn pair_satisfies_the_shifted_laplacian(p in pair(), r in 0.2..3.0f64) {
        let phi = |x: f64, y: f64| p.particular((x * x + y * y).sqrt());
        let lhs = fd_laplacian(phi, r, 0.0, 1e-4) + phi(r, 0.0);
        let rhs = p.rbf(r);
        prop_assert!((lhs - rhs).abs() <= 1e-6 * rhs.abs().max(1.0), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn bessel_functions_match_the_series_oracle(x in 0.0..20.0f64) {
        let envelope = (2.0 / (std::f64::consts::PI * x)).sqrt().min(1.0);
        for (spec, order) in [(BesselSpec::J0, 0), (BesselSpec::J1, 1)] {
            let want = bessel_j_oracle(x, order);
            let got = bessel_eval(spec, x).unwrap();
            prop_assert!((got - want).abs() <= 1e-10 * want.abs().max(envelope), "J{} at {}", order, x);
        }
        for (spec, order) in [(BesselSpec::I0, 0), (BesselSpec::I1, 1)] {
            let want = bessel_i_oracle(x, order);
            let got = bessel_eval(spec, x).unwrap();
            prop_assert!((got - want).abs() <= 1e-10 * want.abs().max(1e-300), "I{} at {}", order, x);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dirichlet_knots_are_reproduced(d in domain(), c in 0.8..3.0f64, n in 5usize..12, l in 0usize..5, coef in prop::array::uniform3(-2.0..2.0f64)) {
        let b1 = move |x: Point2<f64>| coef[0] * x.x + coef[1] * x.y + coef[2];
        let mut problem = ProblemSpec::dirichlet(d, GeneralSolutionKernel::Helmholtz2D { lambda: 1.0 }, ParticularPair::Multiquadric { shape: c }, Arc::new(b1));
        problem.source_operator = OperatorSpec::identity();
        let knots = KnotSet::on_ellipse(&d, n, l).unwrap();
        let sol = solve_linear(&problem, &knots).unwrap();
        for k in knots.boundary() {
            prop_assert!((sol.evaluate(k.position) - b1(k.position)).abs() <= 1e-8);
        }
    }

    #[test]
    fn knot_csv_round_trips(d in domain(), n in 1usize..20, l in 0usize..15) {
        let knots = KnotSet::on_ellipse(&d, n, l).unwrap();
        let mut buf = Vec::new();
        knots.write_csv(&mut buf).unwrap();
        let back = KnotSet::<f64>::read_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(back, knots);
    }
}
