use super::*;
use crate::c64;
use proptest::prelude::*;

/// Constant-field exact solution: u = u0, H = h0, Q = R = h0 e^{u0} / 2, c = 0.
struct ConstantSolution {
    u0: C64,
    h0: C64,
}

impl AnalyticFields for ConstantSolution {
    fn at(&self, _z: C64, _zb: C64) -> FieldsPoint {
        let q = self.h0 * self.u0.exp() * 0.5;
        FieldsPoint {
            u: self.u0,
            h: self.h0,
            q,
            r: q,
        }
    }
    fn c(&self) -> C64 {
        c64(0.0, 0.0)
    }
}

fn flat_plane(n: usize) -> FieldGrid {
    let mut u = Grid2D::covering(-1.0, 1.0, -1.0, 1.0, n, n).unwrap();
    u.fill_with(|_| c64(0.3, 0.0));
    let h = {
        let mut g = u.like();
        g.fill_with(|_| c64(0.0, 0.0));
        g
    };
    FieldGrid {
        q: h.clone(),
        r: h.clone(),
        h,
        u,
        c: c64(0.0, 0.0),
    }
}

#[test]
fn flat_plane_residuals_vanish() {
    let f = flat_plane(17);
    let rep = gc_residuals(&f).unwrap();
    for r in &rep.residuals {
        assert!(r.max_norm < 1e-14, "{}: {}", r.name, r.max_norm);
    }
    let zc = zero_curvature_residual(&f).unwrap();
    for r in &zc.residuals {
        assert!(r.max_norm < 1e-14, "{}: {}", r.name, r.max_norm);
    }
    let k = curvatures(&f).unwrap();
    assert!(k.k_alg.interior_max(0) < 1e-14);
    assert!(k.k_geom.interior_max(1) < 1e-14);
}

fn manufactured(n: usize) -> FieldGrid {
    let mut u = Grid2D::covering(0.1, 0.9, 0.2, 1.0, n, n).unwrap();
    u.fill_with(|z| c64(z.re.sin() * z.im.cos(), 0.0));
    let mut h = u.like();
    h.fill_with(|z| c64(z.re * z.re, 0.0));
    let mut q = u.like();
    q.fill_with(|z| z * z * z);
    let mut r = u.like();
    r.fill_with(|z| z.conj() * z.conj() * z.conj());
    FieldGrid {
        u,
        h,
        q,
        r,
        c: c64(1.0, 0.0),
    }
}

/// Analytic residuals of the manufactured fields, used as the oracle:
/// u = sin x cos y, H = x^2, Q = z^3, R = zb^3, c = 1.
fn manufactured_exact(z: C64) -> (C64, C64, C64) {
    let (x, y) = (z.re, z.im);
    let u = c64(x.sin() * y.cos(), 0.0);
    let eu = u.exp();
    let u_zzb = c64(-0.5 * x.sin() * y.cos(), 0.0);
    let h = c64(x * x, 0.0);
    let q = z * z * z;
    let r = z.conj() * z.conj() * z.conj();
    let gauss = u_zzb + (h * h - c64(1.0, 0.0)) * eu * 0.5 - 2.0 * q * r / eu;
    let h_z = c64(x, 0.0); // (H_x - i H_y)/2 with H_y = 0
    let codazzi_q = -h_z * eu * 0.5; // Q holomorphic
    let codazzi_r = -h_z * eu * 0.5; // H_zb = x as well
    (gauss, codazzi_q, codazzi_r)
}

#[test]
fn manufactured_fields_match_symbolic_oracle() {
    let run = |n: usize| -> (f64, f64) {
        let f = manufactured(n);
        let g = gc_residual_grids(&f).unwrap();
        let mut err: f64 = 0.0;
        for i in 2..f.nx() - 2 {
            for j in 2..f.ny() - 2 {
                let z = f.u.z(i, j);
                let (eg, ec1, ec2) = manufactured_exact(z);
                err = err
                    .max((g.gauss.get(i, j) - eg).norm())
                    .max((g.codazzi_q.get(i, j) - ec1).norm())
                    .max((g.codazzi_r.get(i, j) - ec2).norm());
            }
        }
        (f.spacing(), err)
    };
    let pairs: Vec<(f64, f64)> = [17, 33, 65].iter().map(|&n| run(n)).collect();
    let slope = crate::numerics::convergence_order(&pairs).unwrap();
    assert!(slope > 1.8, "FD residuals approach the symbolic ones at order {slope}");
}

#[test]
fn zero_curvature_is_a_dressing_of_gc_residuals() {
    // entrywise: [[E_G/2, -e^{-u/2} E_C1], [-e^{-u/2} E_C2, -E_G/2]]
    let f = manufactured(41);
    let zc = zero_curvature_grids(&f).unwrap();
    let mut err: f64 = 0.0;
    for i in 3..f.nx() - 3 {
        for j in 3..f.ny() - 3 {
            let z = f.u.z(i, j);
            let (eg, ec1, ec2) = manufactured_exact(z);
            let emh = (-f.u.get(i, j) * 0.5).exp();
            err = err
                .max((zc[0].get(i, j) - eg * 0.5).norm())
                .max((zc[1].get(i, j) + emh * ec1).norm())
                .max((zc[2].get(i, j) + emh * ec2).norm())
                .max((zc[3].get(i, j) + eg * 0.5).norm());
        }
    }
    assert!(err < 5e-3, "dressing mismatch {err}");
}

#[test]
fn curvature_identities() {
    // u=0, H=1, Q=R=0, c=0: totally umbilic, K = H^2 = 1
    let mut u = Grid2D::covering(-1.0, 1.0, -1.0, 1.0, 9, 9).unwrap();
    u.fill_with(|_| c64(0.0, 0.0));
    let mut h = u.like();
    h.fill_with(|_| c64(1.0, 0.0));
    let mut q = u.like();
    q.fill_with(|_| c64(0.0, 0.0));
    let f = FieldGrid {
        u,
        h,
        r: q.clone(),
        q,
        c: c64(0.0, 0.0),
    };
    let k = curvatures(&f).unwrap();
    assert!((k.k_alg.get(4, 4) - c64(1.0, 0.0)).norm() < 1e-15);
    assert!((k.principal_plus.get(4, 4) - c64(1.0, 0.0)).norm() < 1e-15);
    assert!((k.principal_minus.get(4, 4) - c64(1.0, 0.0)).norm() < 1e-15);
}

#[test]
fn k_alg_minus_k_geom_is_proportional_to_gauss_residual() {
    let f = manufactured(33);
    let k = curvatures(&f).unwrap();
    let g = gc_residual_grids(&f).unwrap();
    for i in 2..f.nx() - 2 {
        for j in 2..f.ny() - 2 {
            let lhs = k.k_alg.get(i, j) - k.k_geom.get(i, j);
            let rhs = 2.0 * (-f.u.get(i, j)).exp() * g.gauss.get(i, j);
            assert!((lhs - rhs).norm() < 1e-10, "proportionality gap at ({i},{j})");
        }
    }
}

#[test]
fn frame_oracle_and_tracelessness() {
    let mut u = Grid2D::covering(-1.0, 1.0, -1.0, 1.0, 9, 9).unwrap();
    u.fill_with(|_| c64(0.0, 0.0));
    let mut h = u.like();
    h.fill_with(|_| c64(2.0, 0.0));
    let mut q = u.like();
    q.fill_with(|_| c64(1.0, 0.0));
    let f = FieldGrid {
        u,
        h,
        r: q.clone(),
        q,
        c: c64(0.0, 0.0),
    };
    let (um, vm) = frame_matrices(&f, 4, 4).unwrap();
    let expect = Mat2::new(c64(0.0, 0.0), c64(-1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0));
    assert!((um - expect).max_norm() < 1e-14, "U = {um:?}");
    assert!((vm - expect).max_norm() < 1e-14, "V = {vm:?}");
    assert!(frame_matrices(&f, 0, 4).is_err(), "boundary point refused");
}

proptest! {
    #[test]
    fn frames_are_traceless(u in -1.0..1.0f64, hre in -2.0..2.0f64, him in -1.0..1.0f64,
                            qre in -2.0..2.0f64, qim in -2.0..2.0f64, c in -1.0..1.0f64,
                            uz_re in -1.0..1.0f64, uz_im in -1.0..1.0f64) {
        let p = FieldsPoint {
            u: c64(u, 0.1),
            h: c64(hre, him),
            q: c64(qre, qim),
            r: c64(qim, qre),
        };
        let (um, vm) = frame_matrices_point(&p, c64(uz_re, uz_im), c64(uz_im, uz_re), c64(c, 0.0));
        prop_assert!(um.trace().norm() < 1e-14);
        prop_assert!(vm.trace().norm() < 1e-14);
    }

    #[test]
    fn involution_is_an_involution(u in -1.0..1.0f64, h in -2.0..2.0f64,
                                   q_re in 0.5..2.0f64, c in -1.0..1.0f64) {
        let c = c64(c, 0.0);
        let q = c64(q_re, 0.3);
        let p = FieldsPoint { u: c64(u, 0.2), h: c64(h, -0.1), q, r: q - c };
        let once = involution_point(&p, c, 1e-9).unwrap();
        let twice = involution_point(&once, c, 1e-9).unwrap();
        prop_assert!((twice.u - p.u).norm() < 1e-14);
        prop_assert!((twice.h - p.h).norm() < 1e-14);
        prop_assert!((twice.q - p.q).norm() < 1e-14);
        prop_assert!((twice.r - p.r).norm() < 1e-14);
    }
}

#[test]
fn involution_fixed_point_example() {
    // (u, H, Q, R) = (0.3, 2, 1.5, 0.5) with c = 1: image (-0.3, 2, 1.5, 0.5)
    let p = FieldsPoint {
        u: c64(0.3, 0.0),
        h: c64(2.0, 0.0),
        q: c64(1.5, 0.0),
        r: c64(0.5, 0.0),
    };
    let img = involution_point(&p, c64(1.0, 0.0), 1e-12).unwrap();
    assert_eq!(img.u, c64(-0.3, 0.0));
    assert_eq!(img.h, c64(2.0, 0.0));
    assert_eq!(img.q, c64(1.5, 0.0));
    assert_eq!(img.r, c64(0.5, 0.0));
    // condition violated
    let bad = FieldsPoint { q: c64(2.5, 0.0), ..p };
    assert!(matches!(
        involution_point(&bad, c64(1.0, 0.0), 1e-12),
        Err(SurfaceError::ConditionViolated { .. })
    ));
}

#[test]
fn involution_maps_constant_solution_to_solution() {
    let src = ConstantSolution {
        u0: c64(0.4, 0.1),
        h0: c64(1.3, -0.2),
    };
    let f = src.sample(-0.5, 0.5, -0.5, 0.5, 17, 17).unwrap();
    let rep = gc_residuals(&f).unwrap();
    assert!(rep.residuals.iter().all(|r| r.max_norm < 1e-12));
    let inv = involution_grid(&f, 1e-10).unwrap();
    let rep2 = gc_residuals(&inv).unwrap();
    assert!(
        rep2.residuals.iter().all(|r| r.max_norm < 1e-12),
        "involuted constant solution stays a solution"
    );
}

#[test]
fn conformal_identity_and_invariance() {
    let src = ConstantSolution {
        u0: c64(0.2, 0.0),
        h0: c64(1.0, 0.3),
    };
    // identity map leaves fields unchanged
    let ident = ConformalTransformed::new(
        &src,
        |z| (z, c64(1.0, 0.0)),
        |zb| (zb, c64(1.0, 0.0)),
    );
    let p0 = src.at(c64(0.7, 0.2), c64(0.7, -0.2));
    let p1 = ident.at(c64(0.7, 0.2), c64(0.7, -0.2));
    assert!((p0.u - p1.u).norm() < 1e-15);
    assert!((p0.q - p1.q).norm() < 1e-15);

    // G1 = z^2, G2 = zb^2 produces nonconstant fields that still solve GC
    let run = |n: usize| -> (f64, f64) {
        let tr = ConformalTransformed::new(
            &src,
            |z| (z * z, 2.0 * z),
            |zb| (zb * zb, 2.0 * zb),
        );
        let f = tr.sample(1.0, 1.6, 0.2, 0.8, n, n).unwrap();
        let rep = gc_residuals(&f).unwrap();
        let worst = rep.residuals.iter().map(|r| r.max_norm).fold(0.0, f64::max);
        (f.spacing(), worst)
    };
    let pairs: Vec<(f64, f64)> = [33, 65, 129].iter().map(|&n| run(n)).collect();
    let slope = crate::numerics::convergence_order(&pairs).unwrap();
    assert!(slope > 1.8, "conformal image converges at order {slope}");
}

#[test]
fn conformal_composition_law() {
    let src = ConstantSolution {
        u0: c64(0.2, 0.0),
        h0: c64(1.0, 0.3),
    };
    let g = |z: C64| (z * z, 2.0 * z);
    let gt = |z: C64| (z + c64(0.3, 0.0), c64(1.0, 0.0));
    // transform by G then by G~ equals transform by the composition G~ after G
    let first = ConformalTransformed::new(&src, g, g);
    let then = ConformalTransformed::new(&first, gt, gt);
    let composed = ConformalTransformed::new(
        &src,
        |z| {
            let (w, dw) = gt(z);
            let (v, dv) = g(w);
            (v, dv * dw)
        },
        |zb| {
            let (w, dw) = gt(zb);
            let (v, dv) = g(w);
            (v, dv * dw)
        },
    );
    let z = c64(0.9, 0.25);
    let a = then.at(z, z.conj());
    let b = composed.at(z, z.conj());
    assert!((a.u - b.u).norm() < 1e-13);
    assert!((a.h - b.h).norm() < 1e-13);
    assert!((a.q - b.q).norm() < 1e-13);
    assert!((a.r - b.r).norm() < 1e-13);
}

#[test]
fn predicates_on_constant_solution_and_vanishing_field() {
    let src = ConstantSolution {
        u0: c64(0.4, 0.0),
        h0: c64(1.3, 0.0),
    };
    let f = src.sample(-0.5, 0.5, -0.5, 0.5, 17, 17).unwrap();
    let rep = predicate_report(&f).unwrap();
    assert!(rep.residuals.iter().all(|r| r.max_norm < 1e-12));

    let zero = flat_plane(9);
    assert!(matches!(
        predicate_report(&zero),
        Err(SurfaceError::FieldVanishes { .. })
    ));
}

