//! The closed (v, h) chain of Bonnet surfaces: reduced system, first
//! integral, the third-order equation for h with its second-order
//! second-degree first integral, and the PVI / PV links.
//!
//! Conventions validated against the PDE lift: v h' = kappa^2 with
//! kappa = 4 c_z / sinh(4 c_z xi), and C = (c / c_h)^2.

use super::ReductionError;
use crate::numerics::ode::OdeSystem;
use crate::painleve::{PviParams, SdCoeffs};
use crate::{c64, C64};

/// Constants of the chain; K is the first-integral value when known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BonnetParams {
    pub c_z: C64,
    pub c_q: C64,
    pub c_h: C64,
    pub c: C64,
}

impl BonnetParams {
    /// The constant C of the reduced system, derived from the Gauss equation
    /// of the lifted fields.
    pub fn big_c(&self) -> C64 {
        let r = self.c / self.c_h;
        r * r
    }
}

/// (kappa, 4 c_z coth(4 c_z xi)) with a series fallback so the c_z -> 0 limit
/// (1/xi, 1/xi) is seamless; kappa = 4 c_z / sinh(4 c_z xi).
pub fn sinh_kernel(c_z: C64, xi: C64) -> (C64, C64) {
    let w = 4.0 * c_z * xi;
    if w.norm() < 1e-4 {
        let w2 = w * w;
        // w/sinh w = 1 - w^2/6 + 7 w^4/360, w coth w = 1 + w^2/3 - w^4/45
        let kappa = (1.0 - w2 / 6.0 + 7.0 * w2 * w2 / 360.0) / xi;
        let coth = (1.0 + w2 / 3.0 - w2 * w2 / 45.0) / xi;
        (kappa, coth)
    } else {
        let s = w.sinh();
        (4.0 * c_z / s, 4.0 * c_z * w.cosh() / s)
    }
}

/// Derivatives (v', v'', h') of the reduced system.
pub fn bonnet_rhs(p: &BonnetParams, xi: C64, v: C64, vp: C64, h: C64) -> Result<[C64; 3], ReductionError> {
    if v.norm() < 1e-14 {
        return Err(ReductionError::SingularState("v = 0".into()));
    }
    let (kappa, _) = sinh_kernel(p.c_z, xi);
    let k2 = kappa * kappa;
    let cc = p.big_c();
    let vpp = vp * vp / v - 8.0 * p.c_q * ((h * h - cc) * v - k2 / v) * v;
    let hp = k2 / v;
    Ok([vp, vpp, hp])
}

/// First integral of the reduced system.
pub fn bonnet_first_integral(p: &BonnetParams, xi: C64, v: C64, vp: C64, h: C64) -> Result<C64, ReductionError> {
    if v.norm() < 1e-14 {
        return Err(ReductionError::SingularState("v = 0".into()));
    }
    let (kappa, coth4) = sinh_kernel(p.c_z, xi);
    let k2 = kappa * kappa;
    let cc = p.big_c();
    let t = vp / v;
    Ok(t * t + 16.0 * p.c_q * ((h * h - cc) * v + k2 / v + 2.0 * coth4 * h))
}

/// Residual of the third-order equation for h:
/// (log h')'' + 8 c_q h' - kappa^2 (8 c_q (h^2 - C)/h' + 2).
pub fn bonnet_ode3_residual(
    p: &BonnetParams,
    xi: C64,
    h: C64,
    hp: C64,
    hpp: C64,
    hppp: C64,
) -> Result<C64, ReductionError> {
    if hp.norm() < 1e-14 {
        return Err(ReductionError::SingularState("h' = 0".into()));
    }
    let (kappa, _) = sinh_kernel(p.c_z, xi);
    let loghp_pp = hppp / hp - (hpp / hp) * (hpp / hp);
    let cc = p.big_c();
    Ok(loghp_pp + 8.0 * p.c_q * hp - kappa * kappa * (8.0 * p.c_q * (h * h - cc) / hp + 2.0))
}

/// Value of the second-order second-degree first integral of the h-equation;
/// constant (= K) on solutions. The c_z -> 0 limit is automatic through the
/// kernel.
pub fn bonnet_ode2_value(
    p: &BonnetParams,
    xi: C64,
    h: C64,
    hp: C64,
    hpp: C64,
) -> Result<C64, ReductionError> {
    if hp.norm() < 1e-14 {
        return Err(ReductionError::SingularState("h' = 0".into()));
    }
    let (kappa, coth4) = sinh_kernel(p.c_z, xi);
    let cc = p.big_c();
    let t = hpp / hp + 2.0 * coth4;
    Ok(t * t + 16.0 * p.c_q * (kappa * kappa * (h * h - cc) / hp + hp + 2.0 * coth4 * h))
}

/// Monodromy exponents of the PVI link for prescribed (K, C):
/// t_m = K/(8 c_z)^2, t_u = 4 c_q^2 C / c_z^2 - t_m^2, th_0^2 and th_1^2 are
/// t_m +- sqrt(t_m^2 + t_u), th_inf = 0, th_x = 1.
pub fn p6_link_thetas(p: &BonnetParams, k: C64) -> Result<PviParams, ReductionError> {
    if p.c_z.norm() < 1e-12 {
        return Err(ReductionError::BranchPreconditionFailed(
            "the PVI link needs c_z != 0 (c_z = 0 is the PV link)".into(),
        ));
    }
    let e = 8.0 * p.c_z;
    let tm = k / (e * e);
    let tu = 4.0 * p.c_q * p.c_q * p.big_c() / (p.c_z * p.c_z) - tm * tm;
    let s = (tm * tm + tu).sqrt();
    Ok(PviParams::new(
        c64(0.0, 0.0),
        (tm + s).sqrt(),
        (tm - s).sqrt(),
        c64(1.0, 0.0),
    ))
}

/// X(xi) = 1/(1 - e^{8 c_z xi}) of the PVI link, and the scale of h:
/// h = (2 c_z / c_q) X(X-1) Hu.
pub fn p6_link_x(p: &BonnetParams, xi: C64) -> C64 {
    1.0 / (1.0 - (8.0 * p.c_z * xi).exp())
}

pub fn p6_link_h_scale(p: &BonnetParams) -> C64 {
    2.0 * p.c_z / p.c_q
}

/// Coefficients of the PV master form for the c_z = 0 chain with value K:
/// Y = 4 c_q xi h, A1 = K, A2 = (8 c_q)^2 C, A3 = A4 = 0.
pub fn p5_link_coeffs(p: &BonnetParams, k: C64) -> SdCoeffs {
    let e = 8.0 * p.c_q;
    SdCoeffs::PvSd {
        a1: k,
        a2: e * e * p.big_c(),
        a3: c64(0.0, 0.0),
        a4: c64(0.0, 0.0),
    }
}

/// The reduced (v, h) flow with state [v, v', h].
#[derive(Debug, Clone, Copy)]
pub struct BonnetSystem {
    pub params: BonnetParams,
}

impl OdeSystem for BonnetSystem {
    fn dim(&self) -> usize {
        3
    }
    fn eval(&self, xi: C64, y: &[C64], dy: &mut [C64]) {
        match bonnet_rhs(&self.params, xi, y[0], y[1], y[2]) {
            Ok(d) => dy.copy_from_slice(&d),
            Err(_) => dy.fill(c64(f64::NAN, f64::NAN)),
        }
    }
}
