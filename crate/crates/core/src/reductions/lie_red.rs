//! The Lie reduction: the eta-system with one parameter g, its first
//! integral, the equivalent (a1, a2) system in xi with the change of
//! variables, the homographic triple, the W-equation, and the general
//! solution in terms of PVI.

use super::ReductionError;
use crate::numerics::ode::{
    integrate_ode, DenseSolution, IntegratorConfig, OdeSystem, PathSpec, Trajectory,
};
use crate::painleve::{
    PviParams, PviState, PviSystem,
};
use crate::{c64, C64};

const CONSTRAINT_TOL: f64 = 1e-12;

/// Parameters (g, c) of the reduced system; a reduction requires (1+g) c = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedParamsG {
    pub g: C64,
    pub c: C64,
}

impl ReducedParamsG {
    pub fn new(g: C64, c: C64) -> Result<Self, ReductionError> {
        let gap = ((g + 1.0) * c).norm();
        if gap > CONSTRAINT_TOL {
            return Err(ReductionError::ConstraintViolated(format!(
                "|(1+g) c| = {gap:e}"
            )));
        }
        Ok(ReducedParamsG { g, c })
    }
}

/// Reduced state at a point eta; the first equation is second order in v, so
/// the state carries v' as well.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedStateG {
    pub eta: C64,
    pub v: C64,
    pub vp: C64,
    pub h: C64,
    pub q: C64,
    pub r: C64,
}

fn check_eta_state(s: &ReducedStateG) -> Result<(), ReductionError> {
    if s.v.norm() < 1e-14 {
        return Err(ReductionError::SingularState("v = 0".into()));
    }
    let e = s.eta;
    if e.norm() < 1e-12 || (e - 1.0).norm() < 1e-12 || (e + 1.0).norm() < 1e-12 {
        return Err(ReductionError::SingularState("eta in {0, 1, -1}".into()));
    }
    Ok(())
}

/// Derivatives (v', v'', h', q', r') of the eta-system under the isothermic
/// closure q = r. Without the closure the system is underdetermined and the
/// call is refused.
pub fn reduced_rhs_g(
    p: &ReducedParamsG,
    s: &ReducedStateG,
    isothermic: bool,
) -> Result<[C64; 5], ReductionError> {
    if !isothermic {
        return Err(ReductionError::NonIsothermicClosure);
    }
    check_eta_state(s)?;
    let (eta, v, vp, h, q) = (s.eta, s.v, s.vp, s.h, s.q);
    let g = p.g;
    let c2 = p.c * p.c;
    let vpp = vp * vp / v
        + (v / eta) * ((h * h - c2) * v / (2.0 * eta * eta) - 2.0 * q * q / (eta * eta * v) - vp / v);
    let hp = ((1.0 + g) * h / eta - 2.0 * (1.0 - g) * q / v) / (1.0 - eta * eta);
    let qp = (-eta * v * hp + (1.0 + g) * v * h) / (2.0 * eta * eta);
    Ok([vp, vpp, hp, qp, qp])
}

/// The three displayed equations evaluated verbatim at a state with supplied
/// derivatives; zero on solutions regardless of closure.
pub fn reduced_residuals_g(
    p: &ReducedParamsG,
    s: &ReducedStateG,
    vpp: C64,
    hp: C64,
    qp: C64,
    rp: C64,
) -> [C64; 3] {
    let (eta, v, vp, h, q, r) = (s.eta, s.v, s.vp, s.h, s.q, s.r);
    let g = p.g;
    let c2 = p.c * p.c;
    let e1 = vp / v + eta * (vpp * v - vp * vp) / (v * v) - (h * h - c2) * v / (2.0 * eta * eta)
        + 2.0 * q * r / (eta * eta * v);
    let e2 = -eta * v * hp - 2.0 * eta * eta * qp + (1.0 + g) * v * h;
    let e3 = -eta * eta * v * hp - 2.0 * eta * rp + 2.0 * (1.0 - g) * r;
    [e1, e2, e3]
}

/// The first integral K of the eta-system.
pub fn first_integral_g(p: &ReducedParamsG, s: &ReducedStateG) -> Result<C64, ReductionError> {
    check_eta_state(s)?;
    let (eta, v, vp, h, q, r) = (s.eta, s.v, s.vp, s.h, s.q, s.r);
    let g = p.g;
    let c = p.c;
    let t = eta * vp / v + g;
    Ok(t * t - (h * h - c * c) * v / eta - 2.0 * (h + c) * q - 2.0 * (h - c) * r / (eta * eta)
        - 4.0 * q * r / (eta * v))
}

/// The eta-system as a complex flow with state [v, v', h, q] (q = r).
#[derive(Debug, Clone, Copy)]
pub struct EtaSystem {
    pub params: ReducedParamsG,
}

impl OdeSystem for EtaSystem {
    fn dim(&self) -> usize {
        4
    }
    fn eval(&self, eta: C64, y: &[C64], dy: &mut [C64]) {
        let s = ReducedStateG {
            eta,
            v: y[0],
            vp: y[1],
            h: y[2],
            q: y[3],
            r: y[3],
        };
        match reduced_rhs_g(&self.params, &s, true) {
            Ok([vp, vpp, hp, qp, _]) => {
                dy[0] = vp;
                dy[1] = vpp;
                dy[2] = hp;
                dy[3] = qp;
            }
            Err(_) => dy.fill(c64(f64::NAN, f64::NAN)),
        }
    }
}

/// Parameters of the xi-form of the reduction; a reduction requires a_s c = 0
/// with a_s = a1 + a2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedParamsA {
    pub a1: C64,
    pub a2: C64,
    pub c: C64,
}

impl ReducedParamsA {
    pub fn new(a1: C64, a2: C64, c: C64) -> Result<Self, ReductionError> {
        let gap = ((a1 + a2) * c).norm();
        if gap > CONSTRAINT_TOL {
            return Err(ReductionError::ConstraintViolated(format!(
                "|a_s c| = {gap:e}"
            )));
        }
        Ok(ReducedParamsA { a1, a2, c })
    }
    pub fn a_s(&self) -> C64 {
        self.a1 + self.a2
    }
    pub fn a_d(&self) -> C64 {
        self.a1 - self.a2
    }
}

/// Tilde-variable state of the xi-system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedStateA {
    pub xi: C64,
    pub v: C64,
    pub vp: C64,
    pub h: C64,
    pub q: C64,
    pub r: C64,
}

/// Derivatives (v', v'', h', q', r') of the xi-system under the image of the
/// isothermic closure, q~ = e^{2 xi} r~.
pub fn reduced_rhs_a1a2(
    p: &ReducedParamsA,
    s: &ReducedStateA,
    isothermic: bool,
) -> Result<[C64; 5], ReductionError> {
    if !isothermic {
        return Err(ReductionError::NonIsothermicClosure);
    }
    if s.v.norm() < 1e-14 {
        return Err(ReductionError::SingularState("v~ = 0".into()));
    }
    let (xi, v, vp, h, q, r) = (s.xi, s.v, s.vp, s.h, s.q, s.r);
    let a_s = p.a_s();
    let a_d = p.a_d();
    let e2xi = (2.0 * xi).exp();
    let ead = (a_d * xi).exp();
    // eq1: (log v)'' = (h^2 - c^2 e^{a_d xi}) v / 2 - 2 q r / v
    let vpp = v * ((h * h - p.c * p.c * ead) * v * 0.5 - 2.0 * q * r / v + (vp / v) * (vp / v));
    // eq2, eq3 solved together with the closure derivative
    let rhs1 = (a_s + a_d) * v * h * 0.5 + (a_s - a_d) * q;
    let rhs2 = -(a_s - a_d) * v * h * 0.5 - (a_s + a_d) * r;
    let denom = 2.0 * (e2xi - 1.0);
    if denom.norm() < 1e-12 {
        return Err(ReductionError::SingularState("e^{2 xi} = 1".into()));
    }
    let rp = (rhs1 - rhs2 - 4.0 * e2xi * r) / denom;
    let qp = e2xi * (rp + 2.0 * r);
    let hp = (rhs2 - 2.0 * rp) / v;
    Ok([vp, vpp, hp, qp, rp])
}

/// The three xi-system equations evaluated verbatim with supplied derivatives.
pub fn reduced_residuals_a1a2(
    p: &ReducedParamsA,
    s: &ReducedStateA,
    vpp: C64,
    hp: C64,
    qp: C64,
    rp: C64,
) -> [C64; 3] {
    let (xi, v, vp, h, q, r) = (s.xi, s.v, s.vp, s.h, s.q, s.r);
    let a_s = p.a_s();
    let a_d = p.a_d();
    let ead = (a_d * xi).exp();
    let e1 = (vpp * v - vp * vp) / (v * v) - (h * h - p.c * p.c * ead) * v * 0.5 + 2.0 * q * r / v;
    let e2 = 2.0 * qp + v * hp - 0.5 * (a_s + a_d) * v * h - (a_s - a_d) * q;
    let e3 = 2.0 * rp + v * hp + 0.5 * (a_s - a_d) * v * h + (a_s + a_d) * r;
    [e1, e2, e3]
}

/// First integral of the xi-system (conserved for any closure).
pub fn first_integral_a1a2(p: &ReducedParamsA, s: &ReducedStateA) -> C64 {
    let (xi, v, vp, h, q, r) = (s.xi, s.v, s.vp, s.h, s.q, s.r);
    let a_d = p.a_d();
    let ead = (a_d * xi).exp();
    let eadh = (a_d * xi * 0.5).exp();
    let t = vp / v + a_d;
    t * t - (h * h - p.c * p.c * ead) * v - 2.0 * h * (q + r) - 2.0 * p.c * eadh * (q - r)
        - 4.0 * q * r / v
}

/// The xi-system as a flow with state [v, v', h, q, r].
#[derive(Debug, Clone, Copy)]
pub struct XiSystem {
    pub params: ReducedParamsA,
}

impl OdeSystem for XiSystem {
    fn dim(&self) -> usize {
        5
    }
    fn eval(&self, xi: C64, y: &[C64], dy: &mut [C64]) {
        let s = ReducedStateA {
            xi,
            v: y[0],
            vp: y[1],
            h: y[2],
            q: y[3],
            r: y[4],
        };
        match reduced_rhs_a1a2(&self.params, &s, true) {
            Ok(d) => dy.copy_from_slice(&d),
            Err(_) => dy.fill(c64(f64::NAN, f64::NAN)),
        }
    }
}

/// Map an eta-state to the tilde variables at xi = log(eta), for a chosen a2
/// (a1 = g + 1 - a2 follows from a_s = g + 1).
pub fn eta_to_xi(a2: C64, s: &ReducedStateG, g: C64) -> (ReducedParamsA, ReducedStateA) {
    let eta = s.eta;
    let xi = eta.ln();
    let a1 = g + 1.0 - a2;
    // tilde v = e^{(2 a2 - 1) xi} v, and d/dxi = eta d/deta
    let w = |k: C64| (k * xi).exp();
    let tv = w(2.0 * a2 - 1.0) * s.v;
    // d tv / dxi = (2 a2 - 1) tv + e^{(2 a2 - 1) xi} * eta * v'
    let tvp = (2.0 * a2 - 1.0) * tv + w(2.0 * a2 - 1.0) * eta * s.vp;
    let th = w(-a2) * s.h;
    let tq = w(a2) * s.q;
    let tr = w(a2 - 2.0) * s.r;
    (
        ReducedParamsA { a1, a2, c: c64(0.0, 0.0) },
        ReducedStateA {
            xi,
            v: tv,
            vp: tvp,
            h: th,
            q: tq,
            r: tr,
        },
    )
}

/// Inverse of `eta_to_xi`.
pub fn xi_to_eta(p: &ReducedParamsA, s: &ReducedStateA) -> (C64, ReducedStateG) {
    let eta = s.xi.exp();
    let g = p.a_s() - 1.0;
    let a2 = p.a2;
    let w = |k: C64| (k * s.xi).exp();
    let v = s.v / w(2.0 * a2 - 1.0);
    // s.vp = (2 a2 - 1) tv + w * eta * v'  =>  v' = (s.vp - (2a2-1) tv)/(w * eta)
    let vp = (s.vp - (2.0 * a2 - 1.0) * s.v) / (w(2.0 * a2 - 1.0) * eta);
    (
        g,
        ReducedStateG {
            eta,
            v,
            vp,
            h: s.h / w(-a2),
            q: s.q / w(a2),
            r: s.r / w(a2 - 2.0),
        },
    )
}

/// The three displayed expressions of the homographic correspondence. They
/// are Moebius images of one PVI function; `moebius_representatives` maps
/// each back to the common V, where the on-shell equality lives.
pub fn homographic_triple(
    g: C64,
    s: &ReducedStateG,
    hp: C64,
    qp: C64,
) -> Result<[C64; 3], ReductionError> {
    check_eta_state(s)?;
    if s.q.norm() < 1e-14 || s.h.norm() < 1e-14 {
        return Err(ReductionError::SingularState("h or q = 0".into()));
    }
    let (eta, v, h, q) = (s.eta, s.v, s.h, s.q);
    let t1 = 1.0 + eta * h * v / (2.0 * q);
    let t2 = (2.0 - (1.0 - eta * eta) * eta * hp / h) / (1.0 + g);
    let d = (1.0 - eta * eta) * eta * qp / q - (1.0 - g);
    if d.norm() < 1e-14 {
        return Err(ReductionError::SingularState("T3 denominator".into()));
    }
    let t3 = 1.0 - (1.0 - g) * eta * eta / d;
    Ok([t1, t2, t3])
}

/// Map each member of the triple back to the common PVI variable V:
/// T1 = V/X, T2 = (1-g)(V-1)/((1+g)(V-X)), T3 = 1 + (1-g)(X-1)/((1+g)(V-X)),
/// with X = 1/(1 - eta^2).
pub fn moebius_representatives(g: C64, eta: C64, t: &[C64; 3]) -> [C64; 3] {
    let x = 1.0 / (1.0 - eta * eta);
    let v1 = x * t[0];
    let gm = 1.0 - g;
    let gp = 1.0 + g;
    let v2 = (t[1] * gp * x - gm) / (t[1] * gp - gm);
    let v3 = x + gm * (x - 1.0) / (gp * (t[2] - 1.0));
    [v1, v2, v3]
}

/// Residual of the second-order equation obeyed by W = eta h v / (2 q):
/// W'' minus the right side, at supplied (W, W', W'').
pub fn w_ode_residual(g: C64, k: C64, eta: C64, w: C64, wp: C64, wpp: C64) -> Result<C64, ReductionError> {
    for (val, name) in [(w, "W = 0"), (w + 1.0, "W = -1"), (w + eta * eta, "W = -eta^2")] {
        if val.norm() < 1e-13 {
            return Err(ReductionError::SingularState(name.into()));
        }
    }
    if eta.norm() < 1e-13 || (eta * eta - 1.0).norm() < 1e-13 {
        return Err(ReductionError::SingularState("eta in {0, +-1}".into()));
    }
    let e2 = eta * eta;
    let one = c64(1.0, 0.0);
    let a = 0.5 * (one / w + one / (w + 1.0) + one / (w + e2)) * wp * wp;
    let b = (one / eta - 2.0 * eta / (1.0 - e2) - 2.0 * eta / (w + e2)) * wp;
    let gp2 = (1.0 + g) * 0.5;
    let gm2 = (1.0 - g) * 0.5;
    let bracket = gp2 * gp2 - gm2 * gm2 * e2 / (w * w) + (k / 4.0) * (e2 - 1.0) / ((w + 1.0) * (w + 1.0))
        + (1.0 - k / 4.0) * e2 * (e2 - 1.0) / ((w + e2) * (w + e2));
    let c = 2.0 * w * (w + 1.0) * (w + e2) / (e2 * (1.0 - e2) * (1.0 - e2)) * bracket;
    Ok(wpp - (a - b + c))
}

/// PVI parameters of the generic reduction:
/// theta^2 = (((1+g)/2)^2, K/4, K/4, ((1-g)/2)^2), matching signs on th_0, th_1.
pub fn generic_thetas(g: C64, k: C64) -> PviParams {
    let sk = k.sqrt() * 0.5;
    PviParams::new((1.0 + g) * 0.5, sk, sk, (1.0 - g) * 0.5)
}

/// hq as a closed rational expression of (X, V, V') and (g, K).
pub fn hq_closed_form(g: C64, k: C64, x: C64, v: C64, vp: C64) -> C64 {
    let s = x * (x - 1.0) * vp;
    let b = s - (1.0 + g) * 0.5 * v * (v - 1.0);
    let num = b * b - (k / 4.0) * (v - x) * (v - x);
    2.0 * (x - 1.0) / (v * (v - 1.0) * (v - x)) * num
}

/// The general solution of the generic reduction carried by a PVI trajectory:
/// h and q by quadrature of their logarithmic X-derivatives (two scales with
/// h0 free and q0 pinned by the closed-form product), v via W = eta h v/(2q).
pub struct GenericSolution {
    pub g: C64,
    pub k: C64,
    pub h0: C64,
    pub q0: C64,
    pub params: PviParams,
    pub traj: Trajectory,
    pub cfg: IntegratorConfig,
    system: AugmentedPvi,
}

/// PVI flow augmented with the two logarithmic quadratures:
/// state [V, V', log h - log h0, log q - log q0].
#[derive(Debug, Clone, Copy)]
pub struct AugmentedPvi {
    pub params: PviParams,
    pub g: C64,
}

impl OdeSystem for AugmentedPvi {
    fn dim(&self) -> usize {
        4
    }
    fn eval(&self, x: C64, y: &[C64], dy: &mut [C64]) {
        let sys = PviSystem {
            params: self.params,
        };
        let mut pv = [c64(0.0, 0.0); 2];
        sys.eval(x, &y[..2], &mut pv);
        dy[0] = pv[0];
        dy[1] = pv[1];
        let v = y[0];
        let g = self.g;
        dy[2] = (1.0 + g) / (2.0 * (x - 1.0)) - (1.0 - g) / (2.0 * (v - x));
        dy[3] = 1.0 / (x - 1.0) - (1.0 + g) * v / (2.0 * x * (x - 1.0));
    }
}

/// Map an eta value to X = 1/(1 - eta^2).
pub fn eta_to_x(eta: C64) -> C64 {
    1.0 / (1.0 - eta * eta)
}

impl GenericSolution {
    /// Integrate from a PVI initial condition at the X-image of an eta-path.
    /// `h0` is the free gauge scale of h at the anchor.
    pub fn from_pvi(
        g: C64,
        k: C64,
        ic: &PviState,
        eta_path: &PathSpec,
        h0: C64,
        cfg: &IntegratorConfig,
    ) -> Result<Self, ReductionError> {
        if (g * g - 1.0).norm() < 1e-10 {
            return Err(ReductionError::BranchPreconditionFailed(
                "generic case needs g^2 != 1".into(),
            ));
        }
        let params = generic_thetas(g, k);
        let x_path = PathSpec::polyline(eta_path.waypoints.iter().map(|&e| eta_to_x(e)).collect());
        x_path.check_forbidden(&[c64(0.0, 0.0), c64(1.0, 0.0)], Some(1e-6))?;
        if (ic.x - x_path.waypoints[0]).norm() > 1e-9 {
            return Err(ReductionError::QuadraturePathSingular(
                "PVI initial condition must sit at the start of the eta-path image".into(),
            ));
        }
        let system = AugmentedPvi { params, g };
        let y0 = [ic.v, ic.vp, c64(0.0, 0.0), c64(0.0, 0.0)];
        let traj = integrate_ode(&system, &y0, &x_path, cfg)?;
        // q0 from the closed-form product at the anchor
        let hq0 = hq_closed_form(g, k, ic.x, ic.v, ic.vp);
        let q0 = hq0 / h0;
        Ok(GenericSolution {
            g,
            k,
            h0,
            q0,
            params,
            traj,
            cfg: cfg.clone(),
            system,
        })
    }

    /// Reduced state (v, v', h, q, r=q) at eta (or at a nearby complex eta).
    /// The hq product from the quadratures is cross-checked against the
    /// closed form at every evaluation.
    pub fn eval(&self, eta: C64) -> Result<ReducedStateG, ReductionError> {
        let x = eta_to_x(eta);
        let dense = DenseSolution::new(&self.system, &self.traj, self.cfg.clone());
        let y = dense.eval_at(x)?;
        let (v, vp, lh, lq) = (y[0], y[1], y[2], y[3]);
        let h = self.h0 * lh.exp();
        let q = self.q0 * lq.exp();
        let hq = hq_closed_form(self.g, self.k, x, v, vp);
        let gap = (h * q - hq).norm() / (1.0 + hq.norm());
        if gap > 1e-6 {
            return Err(ReductionError::ProductMismatch { gap });
        }
        let w = (v - x) / x;
        let vv = 2.0 * q * w / (eta * h);
        // v'(eta) from the logarithmic derivatives (all analytic):
        // log v = log 2q + log W - log eta - log h
        let dx_deta = 2.0 * eta * x * x;
        let s = PviState { x, v, vp };
        let _ = s;
        let dlogh_dx = (1.0 + self.g) / (2.0 * (x - 1.0)) - (1.0 - self.g) / (2.0 * (v - x));
        let dlogq_dx = 1.0 / (x - 1.0) - (1.0 + self.g) * v / (2.0 * x * (x - 1.0));
        let dw_dx = (vp * x - v) / (x * x);
        let dlogv_deta = (dlogq_dx + dw_dx / w - dlogh_dx) * dx_deta - 1.0 / eta;
        Ok(ReducedStateG {
            eta,
            v: vv,
            vp: vv * dlogv_deta,
            h,
            q,
            r: q,
        })
    }
}

/// PVI seed of the generic reduction built from the algebraic cube solution
/// (g = -1/3, K = 16/9). The cube function solves PVI with th_x = 4/3; the
/// reduction uses th_x = 2/3 (the Okamoto reflection th_x <-> 2 - th_x, which
/// negates Theta_X and fixes every Theta-square). The two are linked through
/// the Y-data: V_red is the inverse transform of Y computed on the cube branch.
pub fn generic_cube_seed(x0: C64) -> Result<(C64, C64, PviState), ReductionError> {
    use crate::painleve::{
        hamiltonian_malmquist, hamiltonian_y_derivative, inverse_okamoto, CubeBranch,
    };
    let g = c64(-1.0 / 3.0, 0.0);
    let k = c64(16.0 / 9.0, 0.0);
    let branch = CubeBranch::default();
    let cube_params = PviParams::from_re(1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0);
    let red_params = generic_thetas(g, k); // th_x = 2/3, Theta_X = -1/3
    let v_red_at = |x: C64| -> Result<C64, ReductionError> {
        let (v, vp, _) = branch.eval_with_derivs(x)?;
        let s = PviState { x, v, vp };
        let (_, y) = hamiltonian_malmquist(&cube_params, &s)?;
        let yp = hamiltonian_y_derivative(&cube_params, &s)?;
        // Y'' by a stencil on the analytic Y'
        let h = 1e-5;
        let mut yps = [c64(0.0, 0.0); 5];
        for (i, ypk) in yps.iter_mut().enumerate() {
            let xk = x + c64(h * (i as f64 - 2.0), 0.0);
            let (vk, vpk, _) = branch.eval_with_derivs(xk)?;
            *ypk = hamiltonian_y_derivative(
                &cube_params,
                &PviState {
                    x: xk,
                    v: vk,
                    vp: vpk,
                },
            )?;
        }
        let ypp = (yps[0] - yps[1] * 8.0 + yps[3] * 8.0 - yps[4]) / (12.0 * h);
        let _ = yp;
        Ok(inverse_okamoto(&red_params, x, y, yps[2], ypp, false)?)
    };
    let v0 = v_red_at(x0)?;
    let h = 1e-4;
    let mut vs = [c64(0.0, 0.0); 5];
    for (i, vk) in vs.iter_mut().enumerate() {
        *vk = v_red_at(x0 + c64(h * (i as f64 - 2.0), 0.0))?;
    }
    let vp0 = (vs[0] - vs[1] * 8.0 + vs[3] * 8.0 - vs[4]) / (12.0 * h);
    Ok((
        g,
        k,
        PviState {
            x: x0,
            v: v0,
            vp: vp0,
        },
    ))
}

#[cfg(test)]
mod tests;
