use super::*;
use crate::{c64, C64};

fn cfg() -> ode::IntegratorConfig {
    ode::IntegratorConfig::default()
}

#[test]
fn exponential_growth_hits_e() {
    let sys = (1usize, |_z: C64, y: &[C64], dy: &mut [C64]| dy[0] = y[0]);
    let path = ode::PathSpec::segment(c64(0.0, 0.0), c64(1.0, 0.0));
    let t = ode::integrate_ode(&sys, &[c64(1.0, 0.0)], &path, &cfg()).unwrap();
    let e = t.last().y[0];
    assert!((e - c64(std::f64::consts::E, 0.0)).norm() < 1e-9, "y(1) = {e}");
}

#[test]
fn unit_circle_rotation_preserves_modulus() {
    let sys = (1usize, |_z: C64, y: &[C64], dy: &mut [C64]| {
        dy[0] = y[0] * c64(0.0, 1.0)
    });
    let path = ode::PathSpec::segment(c64(0.0, 0.0), c64(2.0 * std::f64::consts::PI, 0.0));
    let t = ode::integrate_ode(&sys, &[c64(1.0, 0.0)], &path, &cfg()).unwrap();
    let y = t.last().y[0];
    assert!((y - c64(1.0, 0.0)).norm() < 1e-8, "y(2pi) = {y}");
    for s in &t.samples {
        assert!((s.y[0].norm() - 1.0).abs() < 1e-9, "modulus drift");
    }
}

#[test]
fn quadratic_blowup_reports_pole() {
    // y' = y^2, y(0) = 1 has the movable pole 1/(1-t) at t = 1.
    let sys = (1usize, |_z: C64, y: &[C64], dy: &mut [C64]| {
        dy[0] = y[0] * y[0]
    });
    let path = ode::PathSpec::segment(c64(0.0, 0.0), c64(2.0, 0.0));
    match ode::integrate_ode(&sys, &[c64(1.0, 0.0)], &path, &cfg()) {
        Err(ode::OdeError::PoleDetected { param, .. }) => {
            assert!((param - 1.0).abs() < 0.05, "pole near t=1, got {param}");
        }
        other => panic!("expected PoleDetected, got {other:?}"),
    }
}

#[test]
fn polyline_matches_concatenated_segments() {
    let sys = (1usize, |z: C64, y: &[C64], dy: &mut [C64]| {
        dy[0] = y[0] * z
    });
    let a = c64(0.0, 0.0);
    let b = c64(0.7, 0.3);
    let c = c64(1.2, -0.4);
    let poly = ode::PathSpec::polyline(vec![a, b, c]);
    let t_all = ode::integrate_ode(&sys, &[c64(1.0, 0.5)], &poly, &cfg()).unwrap();
    let t1 = ode::integrate_ode(&sys, &[c64(1.0, 0.5)], &ode::PathSpec::segment(a, b), &cfg()).unwrap();
    let t2 = ode::integrate_ode(&sys, &t1.last().y, &ode::PathSpec::segment(b, c), &cfg()).unwrap();
    let d = (t_all.last().y[0] - t2.last().y[0]).norm();
    assert!(d < 1e-7, "polyline vs segments differ by {d}");
}

#[test]
fn tightening_tolerance_is_self_consistent() {
    let sys = (2usize, |z: C64, y: &[C64], dy: &mut [C64]| {
        dy[0] = y[1];
        dy[1] = -y[0] * z; // Airy-like, complex path
    });
    let path = ode::PathSpec::segment(c64(0.0, 0.0), c64(2.0, 1.0));
    let loose = ode::IntegratorConfig {
        rtol: 1e-8,
        atol: 1e-10,
        ..cfg()
    };
    let tight = ode::IntegratorConfig {
        rtol: 5e-9,
        atol: 5e-11,
        ..cfg()
    };
    let y0 = [c64(1.0, 0.0), c64(0.0, 0.2)];
    let a = ode::integrate_ode(&sys, &y0, &path, &loose).unwrap();
    let b = ode::integrate_ode(&sys, &y0, &path, &tight).unwrap();
    let d: f64 = a
        .last()
        .y
        .iter()
        .zip(&b.last().y)
        .map(|(p, q)| (p - q).norm())
        .sum();
    // halving rtol changes the terminal state by less than 10x the error scale
    assert!(d < 10.0 * 1e-8, "self-consistency gap {d}");
}

#[test]
fn forbidden_point_clearance_is_enforced() {
    let path = ode::PathSpec::segment(c64(-1.0, 0.0), c64(1.0, 0.0));
    assert!(path.check_forbidden(&[c64(0.0, 1e-5)], None).is_err());
    assert!(path.check_forbidden(&[c64(0.0, 0.5)], None).is_ok());
}

#[test]
fn dense_eval_interpolates() {
    let sys = (1usize, |_z: C64, y: &[C64], dy: &mut [C64]| dy[0] = y[0]);
    let path = ode::PathSpec::segment(c64(0.0, 0.0), c64(1.0, 0.0));
    let t = ode::integrate_ode(&sys, &[c64(1.0, 0.0)], &path, &cfg()).unwrap();
    for k in 0..10 {
        let s = 0.05 + 0.09 * k as f64;
        let y = t.eval(s)[0];
        assert!((y - c64(s.exp(), 0.0)).norm() < 1e-8);
    }
}

#[test]
fn off_path_continuation_matches_closed_form() {
    let sys = (1usize, |_z: C64, y: &[C64], dy: &mut [C64]| dy[0] = y[0]);
    let path = ode::PathSpec::segment(c64(0.0, 0.0), c64(1.0, 0.0));
    let t = ode::integrate_ode(&sys, &[c64(1.0, 0.0)], &path, &cfg()).unwrap();
    let dense = ode::DenseSolution::new(&sys, &t, cfg());
    let target = c64(0.6, 0.3);
    let y = dense.eval_at(target).unwrap()[0];
    assert!((y - target.exp()).norm() < 1e-9, "exp continuation off path");
}

#[test]
fn wirtinger_of_holomorphic_monomial() {
    let mut g = grid::Grid2D::covering(0.5, 1.5, -0.5, 0.5, 41, 41).unwrap();
    g.fill_with(|z| z * z);
    let d = grid::wirtinger_derivatives(&g).unwrap();
    let mut max_dz_err: f64 = 0.0;
    let mut max_dzb: f64 = 0.0;
    for i in 2..g.nx - 2 {
        for j in 2..g.ny - 2 {
            let z = g.z(i, j);
            max_dz_err = max_dz_err.max((d.dz.get(i, j) - 2.0 * z).norm());
            max_dzb = max_dzb.max(d.dzb.get(i, j).norm());
        }
    }
    // second derivatives of z^2 are constant, so central differences are exact
    assert!(max_dz_err < 1e-12, "dz error {max_dz_err}");
    assert!(max_dzb < 1e-12, "dzb of holomorphic field {max_dzb}");
}

#[test]
fn wirtinger_mixed_of_z_zbar() {
    let mut g = grid::Grid2D::covering(-0.4, 0.6, 0.1, 1.1, 21, 21).unwrap();
    g.fill_with(|z| z * z.conj());
    let d = grid::wirtinger_derivatives(&g).unwrap();
    for i in 2..g.nx - 2 {
        for j in 2..g.ny - 2 {
            assert!((d.dzdzb.get(i, j) - c64(1.0, 0.0)).norm() < 1e-11);
        }
    }
}

#[test]
fn wirtinger_exponential_second_order() {
    // f = exp(z + 2 zbar): dz f = f, dzb f = 2f, dzdzb f = 2f
    let evaluate = |n: usize| -> (f64, f64) {
        let mut g = grid::Grid2D::covering(0.0, 0.6, 0.1, 0.7, n, n).unwrap();
        g.fill_with(|z| (z + 2.0 * z.conj()).exp());
        let d = grid::wirtinger_derivatives(&g).unwrap();
        let mut err: f64 = 0.0;
        for i in 2..g.nx - 2 {
            for j in 2..g.ny - 2 {
                let z = g.z(i, j);
                let f = (z + 2.0 * z.conj()).exp();
                err = err
                    .max((d.dz.get(i, j) - f).norm())
                    .max((d.dzb.get(i, j) - 2.0 * f).norm())
                    .max((d.dzdzb.get(i, j) - 2.0 * f).norm());
            }
        }
        (g.dx, err)
    };
    let (h1, e1) = evaluate(21);
    let (h2, e2) = evaluate(41);
    let order = (e1 / e2).ln() / (h1 / h2).ln();
    assert!(order > 1.8, "observed order {order}");
    // spot check against the frozen value at z0 = 0.3 + 0.4i
    let z0 = c64(0.3, 0.4);
    let f = (z0 + 2.0 * z0.conj()).exp();
    assert!((f - c64(2.2654444864148087, -0.95781456628393875)).norm() < 1e-15);
}

#[test]
fn holomorphic_dzb_converges_at_order_two() {
    let run = |n: usize| -> (f64, f64) {
        let mut g = grid::Grid2D::covering(0.2, 1.0, -0.3, 0.5, n, n).unwrap();
        g.fill_with(|z| z * z * z + 2.0 * z);
        let d = grid::wirtinger_derivatives(&g).unwrap();
        (g.dx, d.dzb.interior_max(2).max(1e-18))
    };
    // cubic has exact central differences; use exp(z) instead for a nonzero floor
    let run_exp = |n: usize| -> (f64, f64) {
        let mut g = grid::Grid2D::covering(0.2, 1.0, -0.3, 0.5, n, n).unwrap();
        g.fill_with(|z| z.exp());
        let d = grid::wirtinger_derivatives(&g).unwrap();
        (g.dx, d.dzb.interior_max(2))
    };
    let _ = run;
    let pairs: Vec<(f64, f64)> = [21, 41, 81].iter().map(|&n| run_exp(n)).collect();
    let slope = convergence::convergence_order(&pairs).unwrap();
    assert!((slope - 2.0).abs() < 0.1, "dzb order {slope}");
}

#[test]
fn laplacian_convergence_study() {
    // FD Laplacian of sin(x) sin(y) converges at order 2 to -2 sin sin
    let run = |n: usize| -> (f64, f64) {
        let mut g = grid::Grid2D::covering(0.0, 1.0, 0.0, 1.0, n, n).unwrap();
        g.fill_with(|z| c64((z.re).sin() * (z.im).sin(), 0.0));
        let d = grid::wirtinger_derivatives(&g).unwrap();
        let mut err: f64 = 0.0;
        for i in 2..g.nx - 2 {
            for j in 2..g.ny - 2 {
                let exact = -2.0 * (g.x(i)).sin() * (g.y(j)).sin() / 4.0;
                err = err.max((d.dzdzb.get(i, j) - c64(exact, 0.0)).norm());
            }
        }
        (g.dx, err)
    };
    let pairs: Vec<(f64, f64)> = [33, 65, 129].iter().map(|&n| run(n)).collect();
    let slope = convergence::convergence_order(&pairs).unwrap();
    assert!((slope - 2.0).abs() < 0.1, "laplacian order {slope}");
}

#[test]
fn grid_too_small_is_rejected() {
    assert!(grid::Grid2D::new(0.0, 0.0, 0.1, 0.1, 4, 9).is_err());
}
