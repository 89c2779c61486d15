//! Reduced linear representations: the ODE moving frame of the xi-reduction
//! with its trace first integral, and the codimension-two / extended PVI
//! representations with their compatibility residuals.

use crate::mat2::Mat2;
use crate::painleve::{pvi_rhs, PviParams, PviState};
use crate::reductions::lie_red::{ReducedParamsA, ReducedStateA};
use crate::reductions::ReductionError;
use crate::{c64, C64};

/// Reduced moving frame at a point of the xi-system. The off-diagonal
/// entries of Vr carry (h~ -+ c e^{a_d xi/2})/2, matching the Ur pattern;
/// with that normalization 8 tr Vr^2 reproduces the first integral exactly.
#[derive(Debug, Clone, Copy)]
pub struct ReducedFrame {
    pub u_r: Mat2,
    pub v_r: Mat2,
    /// K^ = 8 tr Vr^2.
    pub k_hat: C64,
}

/// Build the frame; sqrt(v~) takes the principal branch (callers tracking a
/// trajectory should flip `sqrt_sign` on branch crossings).
pub fn reduced_frame(
    p: &ReducedParamsA,
    s: &ReducedStateA,
    sqrt_sign: f64,
) -> Result<ReducedFrame, ReductionError> {
    if s.v.norm() < 1e-14 {
        return Err(ReductionError::SingularState("v~ = 0".into()));
    }
    let a_s = p.a_s();
    let a_d = p.a_d();
    let d = p.c * (a_d * s.xi * 0.5).exp();
    let sv = s.v.sqrt() * sqrt_sign;
    let u_r = Mat2::new(
        a_s * 0.25,
        ((s.h - d) * 0.5 - s.q / s.v) * sv * 0.5,
        ((s.h + d) * 0.5 - s.r / s.v) * sv * 0.5,
        -a_s * 0.25,
    );
    let diag = (a_d * 0.5 + s.vp / (2.0 * s.v)) * 0.5;
    let v_r = Mat2::new(
        diag,
        (-(s.h - d) * 0.5 - s.q / s.v) * sv * 0.5,
        ((s.h + d) * 0.5 + s.r / s.v) * sv * 0.5,
        -diag,
    );
    let k_hat = (v_r * v_r).trace() * 8.0;
    Ok(ReducedFrame { u_r, v_r, k_hat })
}

/// Compatibility residual -dVr/dxi + [Ur, Vr] along a trajectory, with
/// dVr/dxi approximated by a five-point stencil of frames at nearby states.
pub fn reduced_frame_compatibility(
    p: &ReducedParamsA,
    states: &[ReducedStateA; 5],
    step: f64,
) -> Result<Mat2, ReductionError> {
    let frames: Vec<ReducedFrame> = states
        .iter()
        .map(|s| reduced_frame(p, s, 1.0))
        .collect::<Result<_, _>>()?;
    let mut dv = Mat2::zero();
    let w = [1.0, -8.0, 0.0, 8.0, -1.0];
    for (f, c) in frames.iter().zip(w) {
        dv = dv + f.v_r.scale(c64(c / (12.0 * step), 0.0));
    }
    let mid = &frames[2];
    Ok(mid.u_r.commutator(&mid.v_r) - dv)
}

/// Codimension-two PVI representation (theta constrained by the reduction):
/// dPsi = Ur Psi dX + Vr Psi dt with the displayed traceless matrices.
#[derive(Debug, Clone, Copy)]
pub struct PviRep {
    pub u_r: Mat2,
    pub v_r: Mat2,
}

/// R+- of the codimension-two representation, with the matching-sign square
/// roots th_0 = th_1 = -sqrt(K)/2. That branch choice makes R- vanish
/// identically on the Riccati family (whose own convention is
/// th_0 = +sqrt(K)/2, th_1 = -sqrt(K)/2); the product R+ R- is
/// branch-independent.
pub fn codim2_r_pm(g: C64, k: C64, s: &PviState) -> (C64, C64) {
    let (x, v, vp) = (s.x, s.v, s.vp);
    let th = -(k / 4.0).sqrt();
    let txm1 = -(1.0 + g) * 0.5; // theta_X - 1 with theta_X = (1-g)/2
    let big = x * (x - 1.0) * vp;
    let base = v * (v - 1.0) * (v - x);
    let rp = big + base * (th / v - th / (v - 1.0) + txm1 / (v - x));
    let rm = big + base * (-th / v + th / (v - 1.0) + txm1 / (v - x));
    (rp, rm)
}

/// Build the codim-2 matrices; the square roots sqrt(R+ R-) and
/// sqrt(V(V-1)) take the principal branch times the supplied signs so a
/// caller can keep them continuous along a trajectory.
pub fn codim2_rep(
    g: C64,
    k: C64,
    s: &PviState,
    sign_rr: f64,
    sign_vv: f64,
) -> Result<PviRep, ReductionError> {
    let (x, v, vp) = (s.x, s.v, s.vp);
    if (v - x).norm() < 1e-13 || v.norm() < 1e-13 || (v - 1.0).norm() < 1e-13 {
        return Err(ReductionError::SingularState("V in {0, 1, X}".into()));
    }
    let (rp, rm) = codim2_r_pm(g, k, s);
    let s_rr = (rp * rm).sqrt() * sign_rr;
    let s_vv = (v * (v - 1.0)).sqrt() * sign_vv;
    let pref = 1.0 / (4.0 * x * (x - 1.0));
    let u_r = Mat2::new(
        pref * (1.0 + g) * 0.5,
        pref * s_rr / (s_vv * (v - x)) * (v - 2.0 * x + 1.0),
        pref * s_rr / (s_vv * (v - x)) * (v - 2.0 * x),
        -pref * (1.0 + g) * 0.5,
    );
    let diag = (x * (x - 1.0) * vp - v * (v - 1.0) * (1.0 + g) * 0.5) / (2.0 * (v - x));
    let off = s_rr / (2.0 * s_vv * (v - x));
    let v_r = Mat2::new(diag, -off * (v - 1.0), off * v, -diag);
    Ok(PviRep { u_r, v_r })
}

/// Compatibility residual (Vr)_X - [Ur, Vr] along the constrained PVI flow,
/// with (Vr)_X from a five-point stencil of states.
pub fn codim2_compatibility(
    g: C64,
    k: C64,
    states: &[PviState; 5],
    step: C64,
) -> Result<Mat2, ReductionError> {
    let reps: Vec<PviRep> = states
        .iter()
        .map(|s| codim2_rep(g, k, s, 1.0, 1.0))
        .collect::<Result<_, _>>()?;
    let mut dv = Mat2::zero();
    let w = [1.0, -8.0, 0.0, 8.0, -1.0];
    for (r, c) in reps.iter().zip(w) {
        dv = dv + r.v_r.scale(c64(c, 0.0) / (step * 12.0));
    }
    let mid = &reps[2];
    Ok(dv - mid.u_r.commutator(&mid.v_r))
}

/// Which matrix carries the third term of the extended Vr; the displayed
/// form repeats the upper-triangular unit, the reduction check selects the
/// lower-triangular reading.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VrThirdTerm {
    Lower,
    Upper,
}

/// Free data of the extended (codimension-zero) representation: the function
/// R with its logarithmic X-derivative along the trajectory, F(V, X) with its
/// partials, and the constant kappa.
#[derive(Debug, Clone, Copy)]
pub struct Codim0Data {
    pub r: C64,
    pub dlog_r: C64,
    pub f: C64,
    pub f_v: C64,
    pub f_x: C64,
    pub kappa: C64,
}

/// The extended representation for generic theta. The diagonal of Ur and its
/// lower-triangular entry are fixed by the off-diagonal compatibility
/// equations (the displayed a11/a21 drop F-proportional terms):
///   4 Ur11 = 2 dlog(Vr12)/dX - (S + F)(V - 2X + 1)/(X(X-1)(V-1)(V-X))
///   a21 = 2 X(X-1) V N (dlog(Vr21)/dX + 2 Ur11)/(S + F).
pub fn codim0_rep(
    p: &PviParams,
    data: &Codim0Data,
    s: &PviState,
    third: VrThirdTerm,
    sign_r: f64,
    sign_vv: f64,
) -> Result<PviRep, ReductionError> {
    let (x, v, vp) = (s.x, s.v, s.vp);
    if (v - x).norm() < 1e-13 || v.norm() < 1e-13 || (v - 1.0).norm() < 1e-13 {
        return Err(ReductionError::SingularState("V in {0, 1, X}".into()));
    }
    let big_s = x * (x - 1.0) * vp;
    let n = (big_s + data.f) * (big_s + data.f) + data.kappa * (v - x) * (v - x);
    if (big_s + data.f).norm() < 1e-13 {
        return Err(ReductionError::SingularState("S + F = 0".into()));
    }
    let vpp = pvi_rhs(p, s)?;
    let s_r = data.r.sqrt() * sign_r;
    let s_vv = (v * (v - 1.0)).sqrt() * sign_vv;

    // total derivatives along the PVI flow
    let ds = (2.0 * x - 1.0) * vp + x * (x - 1.0) * vpp;
    let df = data.f_x + data.f_v * vp;
    let dn = 2.0 * (big_s + data.f) * (ds + df) + 2.0 * data.kappa * (v - x) * (vp - 1.0);
    let dlog_vv = (2.0 * v - 1.0) * vp / (2.0 * v * (v - 1.0));

    let dlog_v12 = vp / (v - 1.0) - (vp - 1.0) / (v - x) + data.dlog_r * 0.5 - dlog_vv;
    let a11 = 2.0 * dlog_v12
        - (big_s + data.f) * (v - 2.0 * x + 1.0) / (x * (x - 1.0) * (v - 1.0) * (v - x));
    let ur11 = a11 * 0.25;

    let dlog_v21 = vp / v + dn / n - (vp - 1.0) / (v - x) - data.dlog_r * 0.5 - dlog_vv;
    let a21 = 2.0 * x * (x - 1.0) * v * n * (dlog_v21 + 2.0 * ur11) / (big_s + data.f);

    let u_r = Mat2::new(
        ur11,
        (v - 2.0 * x + 1.0) * s_r / (4.0 * x * (x - 1.0) * s_vv * (v - x)),
        a21 / (4.0 * x * (x - 1.0) * s_r * s_vv),
        -ur11,
    );
    let diag = (big_s + data.f) / (2.0 * (v - x));
    let second = -(v - 1.0) * s_r / (2.0 * s_vv * (v - x));
    let third_coef = v * n / (2.0 * s_r * s_vv * (v - x));
    let v_r = match third {
        VrThirdTerm::Lower => Mat2::new(diag, second, third_coef, -diag),
        VrThirdTerm::Upper => Mat2::new(diag, second + third_coef, c64(0.0, 0.0), -diag),
    };
    Ok(PviRep { u_r, v_r })
}

/// The reduction values of the free data: R = R+ R-, F = -(1+g)/2 V(V-1),
/// kappa = -K/4, with dlogR computed along the constrained flow.
pub fn codim0_reduction_data(g: C64, k: C64, s: &PviState) -> Result<Codim0Data, ReductionError> {
    let (x, v, vp) = (s.x, s.v, s.vp);
    let (rp, rm) = codim2_r_pm(g, k, s);
    let r = rp * rm;
    let params = crate::reductions::lie_red::generic_thetas(g, k);
    let vpp = pvi_rhs(&params, s)?;
    let big_s = x * (x - 1.0) * vp;
    let f = -(1.0 + g) * 0.5 * v * (v - 1.0);
    let ds = (2.0 * x - 1.0) * vp + x * (x - 1.0) * vpp;
    let f_v = -(1.0 + g) * 0.5 * (2.0 * v - 1.0);
    let df = f_v * vp;
    // R = (S + F)^2 - (K/4)(V - X)^2 in closed form
    let dr = 2.0 * (big_s + f) * (ds + df) - k * 0.5 * (v - x) * (vp - 1.0);
    Ok(Codim0Data {
        r,
        dlog_r: dr / r,
        f,
        f_v,
        f_x: c64(0.0, 0.0),
        kappa: -k / 4.0,
    })
}
