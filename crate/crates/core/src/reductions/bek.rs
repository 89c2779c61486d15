//! The (v, q, r) chain of surfaces with harmonic inverse mean curvature:
//! reduced system, first integral, the third-order equation for q with its
//! first integral, and the exchange with the Bonnet chain.
//!
//! Conventions validated against the PDE lift: the v-equation carries
//! 8 c_u v, the first-integral mixed term carries 1/v, and its (q + r) term
//! uses 4 c_z coth(4 c_z x).

use super::bonnet::{bonnet_ode2_value, sinh_kernel, BonnetParams};
use super::ReductionError;
use crate::numerics::ode::OdeSystem;
use crate::{c64, C64};

/// Constants of the chain; c = 0 is forced for these surfaces. theta is the
/// free constant of the field split q + i theta, r - i theta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BekParams {
    pub c_z: C64,
    pub c_q: C64,
    pub c_h: C64,
    pub c_u: C64,
    pub theta: C64,
}

impl BekParams {
    fn qr(&self, q: C64, r: C64) -> C64 {
        let i = c64(0.0, 1.0);
        (q + i * self.theta) * (r - i * self.theta)
    }
}

/// Derivatives (v', v'', q', r') of the reduced system.
pub fn bek_rhs(p: &BekParams, x: C64, v: C64, vp: C64, q: C64, r: C64) -> Result<[C64; 4], ReductionError> {
    if v.norm() < 1e-14 {
        return Err(ReductionError::SingularState("v = 0".into()));
    }
    let (kappa, _) = sinh_kernel(p.c_z, x);
    let k2 = kappa * kappa;
    let vpp = vp * vp / v
        + v * (-8.0 * p.c_u * v + k2 * (8.0 * p.c_q * p.c_q * p.qr(q, r) / (p.c_u * v) + 2.0));
    let qp = p.c_u * v / p.c_q;
    Ok([vp, vpp, qp, qp])
}

/// First integral of the reduced system.
pub fn bek_first_integral(p: &BekParams, x: C64, v: C64, vp: C64, q: C64, r: C64) -> Result<C64, ReductionError> {
    if v.norm() < 1e-14 {
        return Err(ReductionError::SingularState("v = 0".into()));
    }
    let (kappa, coth4) = sinh_kernel(p.c_z, x);
    let t = vp / v + 2.0 * coth4;
    Ok(t * t
        + 16.0 * kappa * kappa * (p.c_q * p.c_q / p.c_u) * p.qr(q, r) / v
        + 16.0 * p.c_u * v
        + 16.0 * p.c_q * coth4 * (q + r))
}

/// Residual of the third-order equation for q (with q - r = 0):
/// (log q')'' + 8 c_q q' - kappa^2 (8 c_q (q^2 + theta^2)/q' + 2).
pub fn bek_ode3_residual(
    p: &BekParams,
    x: C64,
    q: C64,
    qp: C64,
    qpp: C64,
    qppp: C64,
) -> Result<C64, ReductionError> {
    if qp.norm() < 1e-14 {
        return Err(ReductionError::SingularState("q' = 0".into()));
    }
    let (kappa, _) = sinh_kernel(p.c_z, x);
    let logqp_pp = qppp / qp - (qpp / qp) * (qpp / qp);
    let th2 = p.theta * p.theta;
    Ok(logqp_pp + 8.0 * p.c_q * qp - kappa * kappa * (8.0 * p.c_q * (q * q + th2) / qp + 2.0))
}

/// Value of the second-order second-degree first integral of the q-equation.
pub fn bek_ode2_value(p: &BekParams, x: C64, q: C64, qp: C64, qpp: C64) -> Result<C64, ReductionError> {
    if qp.norm() < 1e-14 {
        return Err(ReductionError::SingularState("q' = 0".into()));
    }
    let (kappa, coth4) = sinh_kernel(p.c_z, x);
    let th2 = p.theta * p.theta;
    let t = qpp / qp + 2.0 * coth4;
    Ok(t * t + 16.0 * p.c_q * (kappa * kappa * (q * q + th2) / qp + qp + 2.0 * coth4 * q))
}

/// The exchange with the Bonnet chain: the q-equation first integral equals
/// the h-equation one under h -> q, C -> -theta^2. Returns the Bonnet-side
/// value for comparison with `bek_ode2_value`.
pub fn exchange_ode2_via_bonnet(p: &BekParams, x: C64, f: C64, fp: C64, fpp: C64) -> Result<C64, ReductionError> {
    // build Bonnet constants with C = -theta^2: C = (c/c_h)^2 -> choose
    // c = i theta c_h so the displayed map C -> -theta^2 is realized exactly.
    let bp = BonnetParams {
        c_z: p.c_z,
        c_q: p.c_q,
        c_h: c64(1.0, 0.0),
        c: c64(0.0, 1.0) * p.theta,
    };
    bonnet_ode2_value(&bp, x, f, fp, fpp)
}

/// The reduced flow with state [v, v', q, r].
#[derive(Debug, Clone, Copy)]
pub struct BekSystem {
    pub params: BekParams,
}

impl OdeSystem for BekSystem {
    fn dim(&self) -> usize {
        4
    }
    fn eval(&self, x: C64, y: &[C64], dy: &mut [C64]) {
        match bek_rhs(&self.params, x, y[0], y[1], y[2], y[3]) {
            Ok(d) => dy.copy_from_slice(&d),
            Err(_) => dy.fill(c64(f64::NAN, f64::NAN)),
        }
    }
}
