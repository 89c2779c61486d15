//! The PDE layer: field grids, Gauss-Codazzi residuals, curvatures, the 2x2
//! frame matrices with their zero-curvature residual, the two invariances and
//! the Bonnet/isothermic surface predicates.
//!
//! The four unknowns (u, H, Q, R) are treated as independent complex fields;
//! R plays the role of the conjugate Hopf coefficient but no reality
//! constraint is imposed.

use crate::mat2::Mat2;
use crate::numerics::grid::{wirtinger_derivatives, Grid2D, GridError};
use crate::report::ResidualReport;
use crate::{c64, C64};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SurfaceError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("point ({i}, {j}) is on the invalid boundary ring")]
    BoundaryPoint { i: usize, j: usize },
    #[error("field {field} vanishes at grid point ({i}, {j})")]
    FieldVanishes { field: &'static str, i: usize, j: usize },
    #[error("involution condition Q - R = c violated: |Q - R - c| = {gap:e}")]
    ConditionViolated { gap: f64 },
    #[error("conformal map has a degenerate Jacobian at z = {z}")]
    DegenerateJacobian { z: C64 },
}

/// Complex fields (u, H, Q, R) on a rectangular grid, with the space-form
/// constant c.
#[derive(Debug, Clone)]
pub struct FieldGrid {
    pub u: Grid2D,
    pub h: Grid2D,
    pub q: Grid2D,
    pub r: Grid2D,
    pub c: C64,
}

/// Field values at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldsPoint {
    pub u: C64,
    pub h: C64,
    pub q: C64,
    pub r: C64,
}

/// An analytic field configuration that can be evaluated at arbitrary
/// independent complex arguments (z, zbar); sampling the real slice
/// zbar = conj(z) produces a FieldGrid.
pub trait AnalyticFields: Sync {
    fn at(&self, z: C64, zb: C64) -> FieldsPoint;
    fn c(&self) -> C64;

    fn sample(&self, x0: f64, x1: f64, y0: f64, y1: f64, nx: usize, ny: usize) -> Result<FieldGrid, GridError> {
        let mut u = Grid2D::covering(x0, x1, y0, y1, nx, ny)?;
        let mut h = u.like();
        let mut q = u.like();
        let mut r = u.like();
        let rows: Vec<Vec<FieldsPoint>> = (0..nx)
            .into_par_iter()
            .map(|i| {
                (0..ny)
                    .map(|j| {
                        let z = c64(u.x(i), u.y(j));
                        self.at(z, z.conj())
                    })
                    .collect()
            })
            .collect();
        for (i, row) in rows.iter().enumerate() {
            for (j, f) in row.iter().enumerate() {
                u.set(i, j, f.u);
                h.set(i, j, f.h);
                q.set(i, j, f.q);
                r.set(i, j, f.r);
            }
        }
        Ok(FieldGrid {
            u,
            h,
            q,
            r,
            c: self.c(),
        })
    }
}

impl FieldGrid {
    pub fn nx(&self) -> usize {
        self.u.nx
    }
    pub fn ny(&self) -> usize {
        self.u.ny
    }

    pub fn at(&self, i: usize, j: usize) -> FieldsPoint {
        FieldsPoint {
            u: self.u.get(i, j),
            h: self.h.get(i, j),
            q: self.q.get(i, j),
            r: self.r.get(i, j),
        }
    }

    /// Spacing used as the refinement parameter in convergence studies.
    pub fn spacing(&self) -> f64 {
        self.u.dx.max(self.u.dy)
    }
}

/// The three Gauss-Codazzi residual grids:
/// gauss   = u_zzb + (H^2 - c^2) e^u / 2 - 2 Q R e^{-u}
/// codazzi_q = Q_zb - H_z e^u / 2
/// codazzi_r = R_z - H_zb e^u / 2
pub struct GcResiduals {
    pub gauss: Grid2D,
    pub codazzi_q: Grid2D,
    pub codazzi_r: Grid2D,
}

pub fn gc_residual_grids(f: &FieldGrid) -> Result<GcResiduals, SurfaceError> {
    let du = wirtinger_derivatives(&f.u)?;
    let dq = wirtinger_derivatives(&f.q)?;
    let dr = wirtinger_derivatives(&f.r)?;
    let dh = wirtinger_derivatives(&f.h)?;
    let mut gauss = f.u.like();
    let mut cq = f.u.like();
    let mut cr = f.u.like();
    let nan = c64(f64::NAN, f64::NAN);
    for g in [&mut gauss, &mut cq, &mut cr] {
        g.values.fill(nan);
        g.invalid_margin = f.u.invalid_margin + 1;
    }
    let c2 = f.c * f.c;
    for i in 1..f.nx() - 1 {
        for j in 1..f.ny() - 1 {
            let p = f.at(i, j);
            let eu = p.u.exp();
            gauss.set(
                i,
                j,
                du.dzdzb.get(i, j) + (p.h * p.h - c2) * eu * 0.5 - 2.0 * p.q * p.r / eu,
            );
            cq.set(i, j, dq.dzb.get(i, j) - dh.dz.get(i, j) * eu * 0.5);
            cr.set(i, j, dr.dz.get(i, j) - dh.dzb.get(i, j) * eu * 0.5);
        }
    }
    Ok(GcResiduals {
        gauss,
        codazzi_q: cq,
        codazzi_r: cr,
    })
}

/// Interior norms of the three Gauss-Codazzi residuals.
pub fn gc_residuals(f: &FieldGrid) -> Result<ResidualReport, SurfaceError> {
    let g = gc_residual_grids(f)?;
    let mut rep = ResidualReport::default();
    let m = 2;
    rep.push("gauss", g.gauss.interior_max(m), g.gauss.interior_l2(m));
    rep.push("codazzi_q", g.codazzi_q.interior_max(m), g.codazzi_q.interior_l2(m));
    rep.push("codazzi_r", g.codazzi_r.interior_max(m), g.codazzi_r.interior_l2(m));
    Ok(rep)
}

/// Curvature grids: the algebraic total curvature H^2 - c^2 - 4 e^{-2u} Q R,
/// the geometric one -2 e^{-u} u_zzb, and the principal pair H +- sqrt(H^2-K).
pub struct Curvatures {
    pub k_alg: Grid2D,
    pub k_geom: Grid2D,
    pub principal_plus: Grid2D,
    pub principal_minus: Grid2D,
}

pub fn curvatures(f: &FieldGrid) -> Result<Curvatures, SurfaceError> {
    let du = wirtinger_derivatives(&f.u)?;
    let mut k_alg = f.u.like();
    let mut k_geom = f.u.like();
    let mut pp = f.u.like();
    let mut pm = f.u.like();
    k_geom.invalid_margin = f.u.invalid_margin + 1;
    let c2 = f.c * f.c;
    for i in 0..f.nx() {
        for j in 0..f.ny() {
            let p = f.at(i, j);
            let eu = p.u.exp();
            let ka = p.h * p.h - c2 - 4.0 * p.q * p.r / (eu * eu);
            k_alg.set(i, j, ka);
            let disc = (p.h * p.h - ka).sqrt();
            pp.set(i, j, p.h + disc);
            pm.set(i, j, p.h - disc);
            if i > 0 && i < f.nx() - 1 && j > 0 && j < f.ny() - 1 {
                k_geom.set(i, j, -2.0 * du.dzdzb.get(i, j) / eu);
            } else {
                k_geom.set(i, j, c64(f64::NAN, f64::NAN));
            }
        }
    }
    Ok(Curvatures {
        k_alg,
        k_geom,
        principal_plus: pp,
        principal_minus: pm,
    })
}

/// Frame matrices U, V at an interior point (u_z, u_zb by central FD).
pub fn frame_matrices(f: &FieldGrid, i: usize, j: usize) -> Result<(Mat2, Mat2), SurfaceError> {
    if i == 0 || j == 0 || i >= f.nx() - 1 || j >= f.ny() - 1 {
        return Err(SurfaceError::BoundaryPoint { i, j });
    }
    let fx = (f.u.get(i + 1, j) - f.u.get(i - 1, j)) / (2.0 * f.u.dx);
    let fy = (f.u.get(i, j + 1) - f.u.get(i, j - 1)) / (2.0 * f.u.dy);
    let uz = (fx - fy * c64(0.0, 1.0)) * 0.5;
    let uzb = (fx + fy * c64(0.0, 1.0)) * 0.5;
    let p = f.at(i, j);
    Ok(frame_matrices_point(&p, uz, uzb, f.c))
}

/// Frame matrices from point values and the two first derivatives of u.
pub fn frame_matrices_point(p: &FieldsPoint, uz: C64, uzb: C64, c: C64) -> (Mat2, Mat2) {
    let ehalf = (p.u * 0.5).exp();
    let emhalf = (-p.u * 0.5).exp();
    let u_mat = Mat2::new(
        uz * 0.25,
        -p.q * emhalf,
        (p.h + c) * 0.5 * ehalf,
        -uz * 0.25,
    );
    let v_mat = Mat2::new(
        -uzb * 0.25,
        -(p.h - c) * 0.5 * ehalf,
        p.r * emhalf,
        uzb * 0.25,
    );
    (u_mat, v_mat)
}

/// Entrywise norms of the zero-curvature residual U_zb - V_z + [U, V].
/// On exact data the entries are the dressing
/// [[E_G/2, -e^{-u/2} E_C1], [-e^{-u/2} E_C2, -E_G/2]].
pub fn zero_curvature_residual(f: &FieldGrid) -> Result<ResidualReport, SurfaceError> {
    let grids = zero_curvature_grids(f)?;
    let mut rep = ResidualReport::default();
    let names = ["zc_11", "zc_12", "zc_21", "zc_22"];
    for (g, name) in grids.iter().zip(names) {
        rep.push(name, g.interior_max(2), g.interior_l2(2));
    }
    Ok(rep)
}

pub fn zero_curvature_grids(f: &FieldGrid) -> Result<[Grid2D; 4], SurfaceError> {
    // build U and V entry grids, then differentiate them
    let mut u_ent: Vec<Grid2D> = (0..4).map(|_| f.u.like()).collect();
    let mut v_ent: Vec<Grid2D> = (0..4).map(|_| f.u.like()).collect();
    let du = wirtinger_derivatives(&f.u)?;
    let nan = c64(f64::NAN, f64::NAN);
    for g in u_ent.iter_mut().chain(v_ent.iter_mut()) {
        g.values.fill(nan);
        g.invalid_margin = f.u.invalid_margin + 1;
    }
    for i in 1..f.nx() - 1 {
        for j in 1..f.ny() - 1 {
            let p = f.at(i, j);
            let (um, vm) = frame_matrices_point(&p, du.dz.get(i, j), du.dzb.get(i, j), f.c);
            for (k, g) in u_ent.iter_mut().enumerate() {
                g.set(i, j, um.e[k / 2][k % 2]);
            }
            for (k, g) in v_ent.iter_mut().enumerate() {
                g.set(i, j, vm.e[k / 2][k % 2]);
            }
        }
    }
    let mut out: [Grid2D; 4] = [f.u.like(), f.u.like(), f.u.like(), f.u.like()];
    for g in out.iter_mut() {
        g.values.fill(nan);
        g.invalid_margin = f.u.invalid_margin + 2;
    }
    let duz: Vec<_> = u_ent
        .iter()
        .map(|g| wirtinger_derivatives(g).map(|d| d.dzb))
        .collect::<Result<_, _>>()?;
    let dvz: Vec<_> = v_ent
        .iter()
        .map(|g| wirtinger_derivatives(g).map(|d| d.dz))
        .collect::<Result<_, _>>()?;
    for i in 2..f.nx() - 2 {
        for j in 2..f.ny() - 2 {
            let um = Mat2::new(
                u_ent[0].get(i, j),
                u_ent[1].get(i, j),
                u_ent[2].get(i, j),
                u_ent[3].get(i, j),
            );
            let vm = Mat2::new(
                v_ent[0].get(i, j),
                v_ent[1].get(i, j),
                v_ent[2].get(i, j),
                v_ent[3].get(i, j),
            );
            let duzb = Mat2::new(
                duz[0].get(i, j),
                duz[1].get(i, j),
                duz[2].get(i, j),
                duz[3].get(i, j),
            );
            let dvzm = Mat2::new(
                dvz[0].get(i, j),
                dvz[1].get(i, j),
                dvz[2].get(i, j),
                dvz[3].get(i, j),
            );
            let m = duzb - dvzm + um.commutator(&vm);
            for (k, g) in out.iter_mut().enumerate() {
                g.set(i, j, m.e[k / 2][k % 2]);
            }
        }
    }
    Ok(out)
}

/// The conformal transformation applied to an analytic field source:
/// (z, zb, e^u, H, Q, R) -> (G1, G2, G1' G2' e^u, H, G1'^2 Q, G2'^2 R).
/// The returned provider evaluates the transformed fields on the original
/// coordinates, i.e. fields~(z, zb) = weight-transformed fields(G1(z), G2(zb)).
pub struct ConformalTransformed<'a, F: AnalyticFields + ?Sized> {
    pub source: &'a F,
    pub g1: Box<dyn Fn(C64) -> (C64, C64) + Sync + 'a>,
    pub g2: Box<dyn Fn(C64) -> (C64, C64) + Sync + 'a>,
}

impl<'a, F: AnalyticFields + ?Sized> ConformalTransformed<'a, F> {
    /// g1, g2 return (value, derivative).
    pub fn new(
        source: &'a F,
        g1: impl Fn(C64) -> (C64, C64) + Sync + 'a,
        g2: impl Fn(C64) -> (C64, C64) + Sync + 'a,
    ) -> Self {
        ConformalTransformed {
            source,
            g1: Box::new(g1),
            g2: Box::new(g2),
        }
    }
}

impl<'a, F: AnalyticFields + ?Sized> AnalyticFields for ConformalTransformed<'a, F> {
    fn at(&self, z: C64, zb: C64) -> FieldsPoint {
        let (w1, d1) = (self.g1)(z);
        let (w2, d2) = (self.g2)(zb);
        let f = self.source.at(w1, w2);
        FieldsPoint {
            u: f.u + (d1 * d2).ln(),
            h: f.h,
            q: d1 * d1 * f.q,
            r: d2 * d2 * f.r,
        }
    }
    fn c(&self) -> C64 {
        self.source.c()
    }
}

/// The involution at a point: (u, H, Q, R) -> (-u, 2Q - c, (H+c)/2, (H-c)/2).
/// Only defined when Q - R = c.
pub fn involution_point(p: &FieldsPoint, c: C64, tol: f64) -> Result<FieldsPoint, SurfaceError> {
    let gap = (p.q - p.r - c).norm();
    if gap > tol {
        return Err(SurfaceError::ConditionViolated { gap });
    }
    Ok(FieldsPoint {
        u: -p.u,
        h: 2.0 * p.q - c,
        q: (p.h + c) * 0.5,
        r: (p.h - c) * 0.5,
    })
}

/// Gridwise involution; c is unchanged.
pub fn involution_grid(f: &FieldGrid, tol: f64) -> Result<FieldGrid, SurfaceError> {
    let mut out = f.clone();
    for i in 0..f.nx() {
        for j in 0..f.ny() {
            let p = involution_point(&f.at(i, j), f.c, tol)?;
            out.u.set(i, j, p.u);
            out.h.set(i, j, p.h);
            out.q.set(i, j, p.q);
            out.r.set(i, j, p.r);
        }
    }
    Ok(out)
}

/// Involuted analytic source.
pub struct Involuted<'a, F: AnalyticFields + ?Sized> {
    pub source: &'a F,
    pub tol: f64,
}

impl<'a, F: AnalyticFields + ?Sized> AnalyticFields for Involuted<'a, F> {
    fn at(&self, z: C64, zb: C64) -> FieldsPoint {
        let p = self.source.at(z, zb);
        involution_point(&p, self.source.c(), self.tol).expect("involution condition")
    }
    fn c(&self) -> C64 {
        self.source.c()
    }
}

/// Bonnet residual grids: (log Q)_zzb - (log Q)_zb (log R)_z and the mirror,
/// plus the isothermic residual (log Q - log R)_zzb.
pub struct PredicateResiduals {
    pub bonnet_q: Grid2D,
    pub bonnet_r: Grid2D,
    pub isothermic: Grid2D,
}

pub fn surface_predicates(f: &FieldGrid) -> Result<PredicateResiduals, SurfaceError> {
    for i in 0..f.nx() {
        for j in 0..f.ny() {
            if f.q.get(i, j).norm() < 1e-300 {
                return Err(SurfaceError::FieldVanishes { field: "Q", i, j });
            }
            if f.r.get(i, j).norm() < 1e-300 {
                return Err(SurfaceError::FieldVanishes { field: "R", i, j });
            }
        }
    }
    // log-derivative fields avoid branch cuts: d log Q = Q_z / Q etc.
    let dq = wirtinger_derivatives(&f.q)?;
    let dr = wirtinger_derivatives(&f.r)?;
    let nan = c64(f64::NAN, f64::NAN);
    let mut lq_z = f.u.like();
    let mut lq_zb = f.u.like();
    let mut lr_z = f.u.like();
    let mut lr_zb = f.u.like();
    for g in [&mut lq_z, &mut lq_zb, &mut lr_z, &mut lr_zb] {
        g.values.fill(nan);
        g.invalid_margin = f.u.invalid_margin + 1;
    }
    for i in 1..f.nx() - 1 {
        for j in 1..f.ny() - 1 {
            let q = f.q.get(i, j);
            let r = f.r.get(i, j);
            lq_z.set(i, j, dq.dz.get(i, j) / q);
            lq_zb.set(i, j, dq.dzb.get(i, j) / q);
            lr_z.set(i, j, dr.dz.get(i, j) / r);
            lr_zb.set(i, j, dr.dzb.get(i, j) / r);
        }
    }
    // (log Q)_zzb = d/dzb of (log Q)_z
    let dlq = wirtinger_derivatives(&lq_z)?;
    let dlr = wirtinger_derivatives(&lr_zb)?;
    let mut bq = f.u.like();
    let mut br = f.u.like();
    let mut iso = f.u.like();
    for g in [&mut bq, &mut br, &mut iso] {
        g.values.fill(nan);
        g.invalid_margin = f.u.invalid_margin + 2;
    }
    for i in 2..f.nx() - 2 {
        for j in 2..f.ny() - 2 {
            let a = dlq.dzb.get(i, j) - lq_zb.get(i, j) * lr_z.get(i, j);
            let b = dlr.dz.get(i, j) - lr_z.get(i, j) * lq_zb.get(i, j);
            bq.set(i, j, a);
            br.set(i, j, b);
            iso.set(i, j, a - b);
        }
    }
    Ok(PredicateResiduals {
        bonnet_q: bq,
        bonnet_r: br,
        isothermic: iso,
    })
}

/// Max-norm report of the Bonnet and isothermic residuals.
pub fn predicate_report(f: &FieldGrid) -> Result<ResidualReport, SurfaceError> {
    let p = surface_predicates(f)?;
    let mut rep = ResidualReport::default();
    rep.push("bonnet_q", p.bonnet_q.interior_max(3), p.bonnet_q.interior_l2(3));
    rep.push("bonnet_r", p.bonnet_r.interior_max(3), p.bonnet_r.interior_l2(3));
    rep.push("isothermic", p.isothermic.interior_max(3), p.isothermic.interior_l2(3));
    Ok(rep)
}

#[cfg(test)]
mod tests;
