//! The sixth Painleve equation, its Malmquist Hamiltonian, the second-order
//! second-degree master equations satisfied by Y = X(X-1)H, the coefficient
//! correspondence, the inverse (Okamoto) transform, the one-parameter Riccati
//! family and the algebraic cube solution.

use crate::numerics::ode::{integrate_ode, IntegratorConfig, OdeError, OdeSystem, PathSpec, Trajectory};
use crate::{c64, C64};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PainleveError {
    #[error("singular point: {0}")]
    SingularPoint(String),
    #[error("coefficient form mismatch: expected {expected}")]
    FormMismatch { expected: &'static str },
    #[error("degenerate denominator Y' + (th_inf +- Theta_X)^2/4 = {value}")]
    DegenerateDenominator { value: C64 },
    #[error("r-system singular: theta_inf = 0")]
    SingularRSystem,
    #[error("root collision while tracking the cube-solution branch near X = {x}")]
    BranchCollision { x: C64 },
    #[error(transparent)]
    Ode(#[from] OdeError),
}

/// The four monodromy exponents.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PviParams {
    pub th_inf: C64,
    pub th_0: C64,
    pub th_1: C64,
    pub th_x: C64,
}

impl PviParams {
    pub fn new(th_inf: C64, th_0: C64, th_1: C64, th_x: C64) -> Self {
        PviParams {
            th_inf,
            th_0,
            th_1,
            th_x,
        }
    }

    pub fn from_re(a: f64, b: f64, c: f64, d: f64) -> Self {
        PviParams::new(c64(a, 0.0), c64(b, 0.0), c64(c, 0.0), c64(d, 0.0))
    }

    /// Theta_X = theta_X - 1.
    pub fn th_x_cap(&self) -> C64 {
        self.th_x - 1.0
    }
}

/// A point (X, V, V') on a PVI trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PviState {
    pub x: C64,
    pub v: C64,
    pub vp: C64,
}

const SING_TOL: f64 = 1e-12;

fn check_state(s: &PviState) -> Result<(), PainleveError> {
    let bad = |what: &str| Err(PainleveError::SingularPoint(what.to_string()));
    if s.x.norm() < SING_TOL || (s.x - 1.0).norm() < SING_TOL {
        return bad("X at a fixed singular point {0, 1}");
    }
    if s.v.norm() < SING_TOL || (s.v - 1.0).norm() < SING_TOL || (s.v - s.x).norm() < SING_TOL {
        return bad("V at a coalescing value {0, 1, X}");
    }
    Ok(())
}

/// Right side of the PVI equation: V'' as a function of (X, V, V').
pub fn pvi_rhs(p: &PviParams, s: &PviState) -> Result<C64, PainleveError> {
    check_state(s)?;
    let (x, v, vp) = (s.x, s.v, s.vp);
    let one = c64(1.0, 0.0);
    let a = 0.5 * (one / v + one / (v - 1.0) + one / (v - x)) * vp * vp;
    let b = (one / x + one / (x - 1.0) + one / (v - x)) * vp;
    let ti2 = p.th_inf * p.th_inf;
    let t02 = p.th_0 * p.th_0;
    let t12 = p.th_1 * p.th_1;
    let tx2 = p.th_x * p.th_x;
    let bracket = ti2 - t02 * x / (v * v) + t12 * (x - 1.0) / ((v - 1.0) * (v - 1.0))
        + (one - tx2) * x * (x - 1.0) / ((v - x) * (v - x));
    let c = v * (v - 1.0) * (v - x) / (2.0 * x * x * (x - 1.0) * (x - 1.0)) * bracket;
    Ok(a - b + c)
}

/// PVI as a first-order complex system with state [V, V'].
pub struct PviSystem {
    pub params: PviParams,
}

impl OdeSystem for PviSystem {
    fn dim(&self) -> usize {
        2
    }
    fn eval(&self, x: C64, y: &[C64], dy: &mut [C64]) {
        let s = PviState {
            x,
            v: y[0],
            vp: y[1],
        };
        dy[0] = y[1];
        // rhs evaluation away from singular loci; the integrator detects
        // blow-up via the pole threshold.
        dy[1] = pvi_rhs(&self.params, &s).unwrap_or(c64(f64::NAN, f64::NAN));
    }
}

/// Integrate PVI along a path avoiding the fixed singularities {0, 1}.
pub fn pvi_integrate(
    p: &PviParams,
    ic: &PviState,
    path: &PathSpec,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, PainleveError> {
    path.check_forbidden(&[c64(0.0, 0.0), c64(1.0, 0.0)], None)?;
    let sys = PviSystem { params: *p };
    Ok(integrate_ode(&sys, &[ic.v, ic.vp], path, cfg)?)
}

/// Malmquist Hamiltonian Hu and its normalization Y = X(X-1) Hu.
pub fn hamiltonian_malmquist(p: &PviParams, s: &PviState) -> Result<(C64, C64), PainleveError> {
    check_state(s)?;
    let (x, v, vp) = (s.x, s.v, s.vp);
    let ti2 = p.th_inf * p.th_inf;
    let t02 = p.th_0 * p.th_0;
    let t12 = p.th_1 * p.th_1;
    let txm12 = (p.th_x - 1.0) * (p.th_x - 1.0);
    let kin = x * (x - 1.0) * vp * vp / (4.0 * v * (v - 1.0) * (v - x));
    let pot = (-ti2 * (v - 0.5) - t02 * (x / v - 0.5) + t12 * ((x - 1.0) / (v - 1.0) - 0.5)
        - txm12 * (x * (x - 1.0) / (v - x) + x - 0.5))
        / (4.0 * x * (x - 1.0));
    let hu = kin + pot;
    Ok((hu, x * (x - 1.0) * hu))
}

/// Conjugate variables (q, p) of the polynomial Hamiltonian form.
pub fn conjugate_vars(p: &PviParams, s: &PviState) -> Result<(C64, C64), PainleveError> {
    check_state(s)?;
    let (x, v, vp) = (s.x, s.v, s.vp);
    let pp = 0.5
        * (x * (x - 1.0) * vp / (v * (v - 1.0) * (v - x)) + p.th_0 / v + p.th_1 / (v - 1.0)
            + (p.th_x - 1.0) / (v - x));
    Ok((v, pp))
}

/// Polynomial Hamiltonian in (q, p), normalized so that hqp == Hu of
/// `hamiltonian_malmquist` to round-off. The bare polynomial bracket differs
/// from the Malmquist value by an X-affine term which is subtracted here.
pub fn hqp(params: &PviParams, q: C64, p: C64, x: C64) -> Result<C64, PainleveError> {
    if x.norm() < SING_TOL || (x - 1.0).norm() < SING_TOL {
        return Err(PainleveError::SingularPoint("X in {0,1}".into()));
    }
    let ti2 = params.th_inf * params.th_inf;
    let t0 = params.th_0;
    let t1 = params.th_1;
    let txm1 = params.th_x - 1.0;
    let sum = t0 + t1 + txm1;
    let bracket = p * p
        - (t0 / q + t1 / (q - 1.0) + txm1 / (q - x)) * p
        - (ti2 - sum * sum) / (4.0 * q * (q - 1.0));
    let poly = q * (q - 1.0) * (q - x) / (x * (x - 1.0)) * bracket;
    // X-affine shift aligning the polynomial form with the Malmquist one.
    let t02 = t0 * t0;
    let t12 = t1 * t1;
    let txc = txm1;
    let txc2 = txc * txc;
    let gauge = (t02 - t12 - 4.0 * t1 * txc + ti2 - txc2) / (8.0 * (x - 1.0))
        - (t02 + 4.0 * t0 * txc - t12 - ti2 + txc2) / (8.0 * x);
    Ok(poly - gauge)
}

/// dY/dX along the PVI flow, Y = X(X-1) Hu. Uses the canonical structure:
/// the total derivative of the polynomial Hamiltonian along the flow equals
/// its explicit X-partial, shifted by the gauge term of `hqp`.
pub fn hamiltonian_y_derivative(params: &PviParams, s: &PviState) -> Result<C64, PainleveError> {
    let (q, p) = conjugate_vars(params, s)?;
    let x = s.x;
    let ti2 = params.th_inf * params.th_inf;
    let t0 = params.th_0;
    let t1 = params.th_1;
    let txm1 = params.th_x - 1.0;
    let sum = t0 + t1 + txm1;
    let b = t0 / q + t1 / (q - 1.0) + txm1 / (q - x);
    let cc = (ti2 - sum * sum) / (4.0 * q * (q - 1.0));
    let bracket = p * p - b * p - cc;
    let a = q * (q - 1.0) * (q - x) / (x * (x - 1.0));
    let da_dx = q * (q - 1.0) * (-x * (x - 1.0) - (q - x) * (2.0 * x - 1.0))
        / (x * x * (x - 1.0) * (x - 1.0));
    let db_dx = txm1 / ((q - x) * (q - x));
    let dhqp_dx = da_dx * bracket - a * db_dx * p;
    // gauge term of `hqp` and its derivative
    let t02 = t0 * t0;
    let t12 = t1 * t1;
    let txc2 = txm1 * txm1;
    let alpha = t02 - t12 - 4.0 * t1 * txm1 + ti2 - txc2;
    let beta = t02 + 4.0 * t0 * txm1 - t12 - ti2 + txc2;
    let gauge = alpha / (8.0 * (x - 1.0)) - beta / (8.0 * x);
    let dgauge = -alpha / (8.0 * (x - 1.0) * (x - 1.0)) + beta / (8.0 * x * x);
    let hu = hqp(params, q, p, x)?;
    let dhu_dx = dhqp_dx - dgauge;
    let _ = gauge;
    Ok((2.0 * x - 1.0) * hu + x * (x - 1.0) * dhu_dx)
}

/// Coefficient families of the master second-order second-degree equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SdCoeffs {
    /// Quaternary-symmetric form with roots -n_j^2.
    Okamoto { n: [C64; 4] },
    /// SD-Ia form with four complementary terms.
    SdIa { a0: C64, a2: C64, a3: C64, a4: C64 },
    /// Master equation of the PV Hamiltonian.
    PvSd { a1: C64, a2: C64, a3: C64, a4: C64 },
}

/// n_j and the SD-Ia coefficients from the monodromy exponents.
/// Returns (Okamoto form, SD-Ia form); the SD-Ia coefficients computed from
/// the thetas and recomputed from the n_j agree exactly.
pub fn theta_to_sd_coeffs(p: &PviParams) -> (SdCoeffs, SdCoeffs) {
    let tx = p.th_x_cap();
    let n1 = (p.th_inf - tx) * 0.5;
    let n2 = (p.th_inf + tx) * 0.5;
    let n3 = (p.th_1 - p.th_0) * 0.5;
    let n4 = (p.th_1 + p.th_0) * 0.5;
    let ti2 = p.th_inf * p.th_inf;
    let t02 = p.th_0 * p.th_0;
    let t12 = p.th_1 * p.th_1;
    let tx2 = tx * tx;
    let a0 = (ti2 + t02 + t12 + tx2) * 0.5;
    let a2 = -(ti2 - tx2) * (t02 - t12) * 0.25;
    let a3 = (ti2 - t12) * (t02 - tx2) * 0.25;
    let a4 = ((ti2 + tx2) * (t02 - t12) * (t02 - t12)
        + (ti2 - tx2) * (ti2 - tx2) * (t02 + t12))
        / 32.0;
    (
        SdCoeffs::Okamoto {
            n: [n1, n2, n3, n4],
        },
        SdCoeffs::SdIa { a0, a2, a3, a4 },
    )
}

/// SD-Ia coefficients recomputed from the n_j (for the exact-agreement check).
pub fn sd_coeffs_from_n(n: &[C64; 4]) -> SdCoeffs {
    let sq: Vec<C64> = n.iter().map(|v| v * v).collect();
    let a0 = (sq[0] + sq[1] + sq[2] + sq[3]) * 2.0 * 0.5;
    let a2 = n[0] * n[1] * n[2] * n[3] * 4.0;
    let s1 = n[0] + n[1] + n[2] + n[3];
    let s2 = n[0] + n[1] - n[2] - n[3];
    let s3 = n[0] - n[1] + n[2] - n[3];
    let s4 = n[0] - n[1] - n[2] + n[3];
    let a3 = -(s1 * s2 * s3 * s4) * 0.25;
    // 32 A4 = 32 sum_j (prod_{k!=j} n_k)^2
    let mut a4 = c64(0.0, 0.0);
    for j in 0..4 {
        let mut prod = c64(1.0, 0.0);
        for (k, nk) in n.iter().enumerate() {
            if k != j {
                prod *= nk;
            }
        }
        a4 += prod * prod;
    }
    SdCoeffs::SdIa { a0, a2, a3, a4 }
}

/// Left side of the selected master equation at (X, Y, Y', Y'').
pub fn sd_residual(
    coeffs: &SdCoeffs,
    x: C64,
    y: C64,
    yp: C64,
    ypp: C64,
) -> Result<C64, PainleveError> {
    match coeffs {
        SdCoeffs::Okamoto { n } => {
            let prod_n: C64 = n.iter().product();
            let xy = x * yp - y;
            let quad = yp * yp - 2.0 * yp * xy + prod_n;
            let mut quart = yp + n[0] * n[0];
            for nk in &n[1..] {
                quart *= yp + nk * nk;
            }
            let lead = x * (x - 1.0) * ypp;
            Ok(-yp * lead * lead - quad * quad + quart)
        }
        SdCoeffs::SdIa { a0, a2, a3, a4 } => {
            let xy = x * yp - y;
            let lead = x * (x - 1.0) * ypp;
            Ok(-lead * lead - 4.0 * yp * xy * xy + 4.0 * yp * yp * xy
                + *a0 * yp * yp
                + *a2 * xy
                + (*a3 + *a0 * *a0 * 0.25) * yp
                + *a4)
        }
        SdCoeffs::PvSd { a1, a2, a3, a4 } => {
            let xy = x * yp - y;
            let lead = x * ypp;
            Ok(-lead * lead - 4.0 * yp * yp * xy + *a1 * xy * xy + *a2 * xy + *a3 * yp + *a4)
        }
    }
}

/// Reconstruct V from (X, Y, Y', Y''). The second displayed sum line is read
/// as r+ - r- (`second_line_is_sum = false`, validated by round trip); the
/// alternative literal reading swaps the roles of the two lines.
pub fn inverse_okamoto(
    p: &PviParams,
    x: C64,
    y: C64,
    yp: C64,
    ypp: C64,
    second_line_is_sum: bool,
) -> Result<C64, PainleveError> {
    let ti = p.th_inf;
    let tx = p.th_x_cap();
    if ti.norm() < SING_TOL {
        return Err(PainleveError::SingularRSystem);
    }
    let dp = yp + (ti + tx) * (ti + tx) * 0.25;
    let dm = yp + (ti - tx) * (ti - tx) * 0.25;
    if dp.norm() < SING_TOL {
        return Err(PainleveError::DegenerateDenominator { value: dp });
    }
    if dm.norm() < SING_TOL {
        return Err(PainleveError::DegenerateDenominator { value: dm });
    }
    let ti2 = ti * ti;
    let tx2 = tx * tx;
    let t02 = p.th_0 * p.th_0;
    let t12 = p.th_1 * p.th_1;
    let line1 = -y - (ti2 + 3.0 * tx2) / 8.0 * (2.0 * x - 1.0) + (t12 - t02) / 8.0;
    let line2 = (-y - (3.0 * ti2 + tx2) / 8.0 * (2.0 * x - 1.0) - (t12 - t02) / 8.0) * tx / ti;
    let (sum, diff) = if second_line_is_sum {
        (line2, line1)
    } else {
        (line1, line2)
    };
    let rp = (sum + diff) * 0.5;
    let rm = (sum - diff) * 0.5;
    Ok(x + tx * 0.5 * x * (x - 1.0) * ypp / (dp * dm) + rp / dp + rm / dm)
}

/// V' of the one-parameter family that is an algebraic transform of the
/// hypergeometric function; the monodromy exponents satisfy
/// th_inf + th_0 + th_1 + th_x = 1.
pub fn riccati_rhs(p: &PviParams, x: C64, v: C64) -> Result<C64, PainleveError> {
    check_state(&PviState { x, v, vp: c64(0.0, 0.0) })?;
    let sum = p.th_0 / v + p.th_1 / (v - 1.0) + (p.th_x - 1.0) / (v - x);
    Ok(-sum * v * (v - 1.0) * (v - x) / (x * (x - 1.0)))
}

/// Sign convention of the Riccati family for reduction parameters (g, K):
/// th_inf = (1+g)/2, th_0 = sqrt(K)/2, th_1 = -sqrt(K)/2, th_x = (1-g)/2.
pub fn riccati_params(g: C64, k: C64) -> PviParams {
    let sk = k.sqrt();
    PviParams::new((1.0 + g) * 0.5, sk * 0.5, -sk * 0.5, (1.0 - g) * 0.5)
}

/// PVI as a Riccati flow with state [V].
pub struct RiccatiSystem {
    pub params: PviParams,
}

impl OdeSystem for RiccatiSystem {
    fn dim(&self) -> usize {
        1
    }
    fn eval(&self, x: C64, y: &[C64], dy: &mut [C64]) {
        dy[0] = riccati_rhs(&self.params, x, y[0]).unwrap_or(c64(f64::NAN, f64::NAN));
    }
}

/// Cubic of the algebraic cube solution: -X^2 + 3XV - 3XV^2 + 2XV^3 - V^3.
pub fn cube_poly(x: C64, v: C64) -> C64 {
    -x * x + 3.0 * x * v - 3.0 * x * v * v + 2.0 * x * v * v * v - v * v * v
}

fn cube_poly_dv(x: C64, v: C64) -> C64 {
    3.0 * x - 6.0 * x * v + 6.0 * x * v * v - 3.0 * v * v
}

fn cube_poly_dx(x: C64, v: C64) -> C64 {
    -2.0 * x + 3.0 * v - 3.0 * v * v + 2.0 * v * v * v
}

/// The branch of the cube solution anchored by continuity at (x_anchor,
/// v_anchor); at X = 1 the cubic factors as (V-1)^3 so the natural anchor is
/// V(1) = 1. Newton polishing from the previous sample tracks the branch.
pub struct CubeBranch {
    pub x_anchor: C64,
    pub v_anchor: C64,
}

impl Default for CubeBranch {
    fn default() -> Self {
        // X = 1 is the triple collision of the cubic, so the default anchor sits
        // at X = 1/2 on the branch that reaches V = 1 there.
        CubeBranch {
            x_anchor: c64(0.5, 0.0),
            v_anchor: c64(0.5 + 3f64.sqrt() / 6.0, 0.0),
        }
    }
}

impl CubeBranch {
    /// Value V(x) tracked along the straight path anchor -> x.
    pub fn eval(&self, x: C64) -> Result<C64, PainleveError> {
        let nsteps = ((x - self.x_anchor).norm() / 1e-3).ceil().max(1.0) as usize;
        let mut v = self.v_anchor;
        for k in 1..=nsteps {
            let xk = self.x_anchor + (x - self.x_anchor) * (k as f64 / nsteps as f64);
            // first-order predictor along the branch, then Newton
            let fv = cube_poly_dv(xk, v);
            if fv.norm() > 1e-14 {
                let fx = cube_poly_dx(xk, v);
                let dx = (x - self.x_anchor) / nsteps as f64;
                v -= fx / fv * dx;
            }
            let mut converged = false;
            for _ in 0..300 {
                let f = cube_poly(xk, v);
                let fv = cube_poly_dv(xk, v);
                if fv.norm() < 1e-30 {
                    return Err(PainleveError::BranchCollision { x: xk });
                }
                let step = f / fv;
                v -= step;
                // linear convergence near a multiple root still passes this
                if step.norm() < 1e-13 * (1.0 + v.norm()) {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(PainleveError::BranchCollision { x: xk });
            }
        }
        Ok(v)
    }

    /// (V, V', V'') by implicit differentiation of the cubic.
    pub fn eval_with_derivs(&self, x: C64) -> Result<(C64, C64, C64), PainleveError> {
        let v = self.eval(x)?;
        let fv = cube_poly_dv(x, v);
        if fv.norm() < 1e-13 {
            return Err(PainleveError::BranchCollision { x });
        }
        let fx = cube_poly_dx(x, v);
        let vp = -fx / fv;
        let fxx = c64(-2.0, 0.0);
        let fxv = 3.0 - 6.0 * v + 6.0 * v * v;
        let fvv = -6.0 * x + 12.0 * x * v - 6.0 * v;
        let vpp = -(fxx + 2.0 * fxv * vp + fvv * vp * vp) / fv;
        Ok((v, vp, vpp))
    }

    /// All finite roots of the cubic at x (Newton from perturbed starts with
    /// deflation); used by tests against the branch-tracked value.
    pub fn all_roots(x: C64) -> Vec<C64> {
        // coefficients of (2x-1) v^3 - 3x v^2 + 3x v - x^2
        let c3 = 2.0 * x - 1.0;
        let c2 = -3.0 * x;
        let c1 = 3.0 * x;
        let c0 = -x * x;
        solve_cubic(c3, c2, c1, c0)
    }
}

/// Roots of c3 v^3 + c2 v^2 + c1 v + c0 (degenerate leading coefficient
/// falls back to the quadratic/linear case).
pub fn solve_cubic(c3: C64, c2: C64, c1: C64, c0: C64) -> Vec<C64> {
    if c3.norm() < 1e-14 {
        if c2.norm() < 1e-14 {
            if c1.norm() < 1e-14 {
                return vec![];
            }
            return vec![-c0 / c1];
        }
        let disc = (c1 * c1 - 4.0 * c2 * c0).sqrt();
        return vec![(-c1 + disc) / (2.0 * c2), (-c1 - disc) / (2.0 * c2)];
    }
    // depressed cubic via Cardano
    let a = c2 / c3;
    let b = c1 / c3;
    let c = c0 / c3;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let disc = (q * q * 0.25 + p * p * p / 27.0).sqrt();
    let mut u3 = -q * 0.5 + disc;
    if u3.norm() < 1e-18 {
        u3 = -q * 0.5 - disc;
    }
    let u = u3.powf(1.0 / 3.0);
    let omega = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let mut roots = Vec::with_capacity(3);
    for k in 0..3 {
        let uk = u * omega.powu(k);
        let t = if uk.norm() > 1e-18 { uk - p / (3.0 * uk) } else { uk };
        let mut v = t - a / 3.0;
        // Newton polish
        for _ in 0..50 {
            let f = ((c3 * v + c2) * v + c1) * v + c0;
            let df = (3.0 * c3 * v + 2.0 * c2) * v + c1;
            if df.norm() < 1e-16 {
                break;
            }
            let step = f / df;
            v -= step;
            if step.norm() < 1e-15 * (1.0 + v.norm()) {
                break;
            }
        }
        roots.push(v);
    }
    roots
}
