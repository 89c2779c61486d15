//! Embedded Dormand-Prince 5(4) integration of complex-state ODE systems
//! along real-parametrized paths in the complex plane.
//!
//! The state is a vector of complex numbers, the independent variable runs
//! along a straight segment or polyline; a movable pole is reported (not
//! continued through) when any state component exceeds `pole_threshold`.

use crate::C64;
use thiserror::Error;

/// Right-hand side of dY/dzeta = f(zeta, Y) with complex independent variable.
pub trait OdeSystem {
    fn dim(&self) -> usize;
    fn eval(&self, zeta: C64, y: &[C64], dy: &mut [C64]);
}

impl<F> OdeSystem for (usize, F)
where
    F: Fn(C64, &[C64], &mut [C64]),
{
    fn dim(&self) -> usize {
        self.0
    }
    fn eval(&self, zeta: C64, y: &[C64], dy: &mut [C64]) {
        (self.1)(zeta, y, dy)
    }
}

/// A path in the complex plane: a straight segment or a polyline of waypoints,
/// parametrized by cumulative arclength.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct PathSpec {
    pub waypoints: Vec<C64>,
}

#[derive(Debug, Error)]
pub enum OdeError {
    #[error("path must contain at least two distinct consecutive waypoints")]
    DegeneratePath,
    #[error("path passes within clearance {clearance:e} of forbidden point {point}")]
    ForbiddenPointTooClose { point: C64, clearance: f64 },
    #[error("movable pole detected near parameter {param}: |state| = {magnitude:e}")]
    PoleDetected { param: f64, magnitude: f64 },
    #[error("step size underflow at parameter {param}")]
    StepUnderflow { param: f64 },
    #[error("exceeded {max_steps} steps at parameter {param}")]
    MaxStepsExceeded { max_steps: usize, param: f64 },
    #[error("invalid integrator configuration: {0}")]
    BadConfig(String),
    #[error("state not finite at parameter {param}")]
    NonFiniteState { param: f64 },
}

impl PathSpec {
    pub fn segment(start: C64, end: C64) -> Self {
        PathSpec {
            waypoints: vec![start, end],
        }
    }

    pub fn polyline(points: Vec<C64>) -> Self {
        PathSpec { waypoints: points }
    }

    /// A circular arc approximated by a fine polyline, radius |center-start|.
    pub fn arc(center: C64, radius: f64, phi0: f64, phi1: f64, n: usize) -> Self {
        let pts = (0..=n)
            .map(|k| {
                let phi = phi0 + (phi1 - phi0) * k as f64 / n as f64;
                center + C64::from_polar(radius, phi)
            })
            .collect();
        PathSpec { waypoints: pts }
    }

    pub fn validate(&self) -> Result<(), OdeError> {
        if self.waypoints.len() < 2 {
            return Err(OdeError::DegeneratePath);
        }
        for w in self.waypoints.windows(2) {
            if (w[1] - w[0]).norm() == 0.0 {
                return Err(OdeError::DegeneratePath);
            }
        }
        Ok(())
    }

    pub fn total_length(&self) -> f64 {
        self.waypoints
            .windows(2)
            .map(|w| (w[1] - w[0]).norm())
            .sum()
    }

    /// Distance from the path to a point.
    pub fn distance_to(&self, p: C64) -> f64 {
        let mut best = f64::INFINITY;
        for w in self.waypoints.windows(2) {
            let (a, b) = (w[0], w[1]);
            let ab = b - a;
            let t = ((p - a).re * ab.re + (p - a).im * ab.im) / ab.norm_sqr();
            let t = t.clamp(0.0, 1.0);
            best = best.min((a + ab * t - p).norm());
        }
        best
    }

    /// Check clearance of all forbidden points; default clearance is 1e-3 of
    /// the path length when `clearance` is not given.
    pub fn check_forbidden(&self, forbidden: &[C64], clearance: Option<f64>) -> Result<(), OdeError> {
        let clr = clearance.unwrap_or(1e-3 * self.total_length());
        for &p in forbidden {
            if self.distance_to(p) < clr {
                return Err(OdeError::ForbiddenPointTooClose {
                    point: p,
                    clearance: clr,
                });
            }
        }
        Ok(())
    }

    /// zeta(s) and dzeta/ds at arclength s.
    pub fn at(&self, s: f64) -> (C64, C64) {
        let mut acc = 0.0;
        for w in self.waypoints.windows(2) {
            let len = (w[1] - w[0]).norm();
            if s <= acc + len || w[1] == *self.waypoints.last().unwrap() {
                let t = ((s - acc) / len).clamp(0.0, 1.0);
                let dir = (w[1] - w[0]) / len;
                if s <= acc + len {
                    return (w[0] + (w[1] - w[0]) * t, dir);
                }
            }
            acc += len;
        }
        let w = &self.waypoints[self.waypoints.len() - 2..];
        let len = (w[1] - w[0]).norm();
        (w[1], (w[1] - w[0]) / len)
    }
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct IntegratorConfig {
    pub rtol: f64,
    pub atol: f64,
    pub max_step: f64,
    pub pole_threshold: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rtol: 1e-10,
            atol: 1e-12,
            max_step: f64::INFINITY,
            pole_threshold: 1e8,
            max_steps: 1_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<(), OdeError> {
        if !(self.rtol > 0.0 && self.atol > 0.0) {
            return Err(OdeError::BadConfig("tolerances must be positive".into()));
        }
        if !(self.pole_threshold > 1.0) {
            return Err(OdeError::BadConfig("pole_threshold must exceed 1".into()));
        }
        Ok(())
    }
}

/// One accepted step of the trajectory: arclength parameter, position on the
/// path, state and state derivative with respect to the parameter.
#[derive(Debug, Clone)]
pub struct Sample {
    pub s: f64,
    pub zeta: C64,
    pub y: Vec<C64>,
    pub dyds: Vec<C64>,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub path: PathSpec,
}

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory has samples")
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// States at the path waypoints (the integrator lands on each corner
    /// exactly, so these carry no interpolation error).
    pub fn at_waypoints(&self) -> Vec<(C64, Vec<C64>)> {
        let mut out = Vec::with_capacity(self.path.waypoints.len());
        let mut k = 0usize;
        for smp in &self.samples {
            if k < self.path.waypoints.len() && (smp.zeta - self.path.waypoints[k]).norm() < 1e-10 {
                out.push((smp.zeta, smp.y.clone()));
                k += 1;
            }
        }
        out
    }

    /// Cubic Hermite interpolation of the state at parameter s (in range).
    pub fn eval(&self, s: f64) -> Vec<C64> {
        let n = self.samples.len();
        assert!(n >= 2, "need at least two samples");
        let mut i = match self
            .samples
            .binary_search_by(|smp| smp.s.partial_cmp(&s).unwrap())
        {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        };
        // polyline corners repeat the parameter with a new direction; step
        // past zero-length intervals
        while i + 2 < n && self.samples[i + 1].s <= s {
            i += 1;
        }
        let (a, b) = (&self.samples[i], &self.samples[i + 1]);
        let h = b.s - a.s;
        if h <= 0.0 {
            return a.y.clone();
        }
        let t = ((s - a.s) / h).clamp(0.0, 1.0);
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        (0..a.y.len())
            .map(|k| {
                a.y[k] * h00 + a.dyds[k] * (h10 * h) + b.y[k] * h01 + b.dyds[k] * (h11 * h)
            })
            .collect()
    }
}

// Dormand-Prince 5(4) tableau.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const CNODES: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const ERR: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrate along the whole path, recording every accepted step. Stepping
/// never crosses a polyline corner: each segment is integrated to its end
/// so the direction stays smooth within every Runge-Kutta step. The corner
/// sample is duplicated, once with each direction, for Hermite interpolation.
pub fn integrate_ode<S: OdeSystem + ?Sized>(
    sys: &S,
    ic: &[C64],
    path: &PathSpec,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, OdeError> {
    path.validate()?;
    cfg.validate()?;
    let mut all = Trajectory {
        samples: Vec::new(),
        path: path.clone(),
    };
    let mut y = ic.to_vec();
    let mut s0 = 0.0;
    for w in path.waypoints.windows(2) {
        let samples = integrate_segment(sys, &y, w[0], w[1], cfg, s0)?;
        s0 = samples.last().unwrap().s;
        y = samples.last().unwrap().y.clone();
        all.samples.extend(samples);
    }
    Ok(all)
}

/// Dormand-Prince 5(4) over one straight segment a -> b, parametrized by
/// s0 + arclength.
fn integrate_segment<S: OdeSystem + ?Sized>(
    sys: &S,
    ic: &[C64],
    a: C64,
    b: C64,
    cfg: &IntegratorConfig,
    s0: f64,
) -> Result<Vec<Sample>, OdeError> {
    let n = sys.dim();
    assert_eq!(ic.len(), n, "initial state dimension mismatch");
    let span = (b - a).norm();
    let dir = (b - a) / span;
    let zeta_at = |t: f64| a + dir * t;
    let f = |t: f64, y: &[C64], out: &mut [C64]| {
        sys.eval(zeta_at(t), y, out);
        for v in out.iter_mut() {
            *v *= dir;
        }
    };

    let mut t = 0.0;
    let mut y = ic.to_vec();
    let mut k = vec![vec![C64::new(0.0, 0.0); n]; 7];
    f(t, &y, &mut k[0]);
    if y.iter().chain(k[0].iter()).any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(OdeError::NonFiniteState { param: s0 });
    }

    let mut h = (span / 100.0).min(cfg.max_step).max(1e-12);
    let mut samples = vec![Sample {
        s: s0,
        zeta: a,
        y: y.clone(),
        dyds: k[0].clone(),
    }];

    let safety = 0.9;
    let beta = 0.04;
    let expo = 0.2 - beta * 0.75;
    let mut err_old: f64 = 1e-4;
    let mut steps = 0usize;
    let mut ytmp = vec![C64::new(0.0, 0.0); n];
    let mut y5 = vec![C64::new(0.0, 0.0); n];

    while t < span - 1e-14 * span.max(1.0) {
        if steps >= cfg.max_steps {
            return Err(OdeError::MaxStepsExceeded {
                max_steps: cfg.max_steps,
                param: s0 + t,
            });
        }
        steps += 1;
        h = h.min(span - t).min(cfg.max_step);
        if h < 1e-14 * span.max(1.0) {
            return Err(OdeError::StepUnderflow { param: s0 + t });
        }

        for stage in 0..6 {
            for i in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for (j, kj) in k.iter().enumerate().take(stage + 1) {
                    let aij = A[stage][j];
                    if aij != 0.0 {
                        acc += kj[i] * aij;
                    }
                }
                ytmp[i] = y[i] + acc * h;
            }
            f(t + CNODES[stage] * h, &ytmp, &mut k[stage + 1]);
        }
        // the sixth stage argument is the 5th-order solution (FSAL)
        y5.copy_from_slice(&ytmp);

        let mut err: f64 = 0.0;
        for i in 0..n {
            let mut e = C64::new(0.0, 0.0);
            for (j, kj) in k.iter().enumerate() {
                if ERR[j] != 0.0 {
                    e += kj[i] * ERR[j];
                }
            }
            let e = (e * h).norm();
            let sc = cfg.atol + cfg.rtol * y[i].norm().max(y5[i].norm());
            err += (e / sc) * (e / sc);
        }
        err = (err / n as f64).sqrt();

        if err <= 1.0 {
            t += h;
            std::mem::swap(&mut y, &mut y5);
            let last = k[6].clone();
            k[0].copy_from_slice(&last);
            if y.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
                return Err(OdeError::NonFiniteState { param: s0 + t });
            }
            let mag = y.iter().map(|v| v.norm()).fold(0.0, f64::max);
            if mag > cfg.pole_threshold {
                return Err(OdeError::PoleDetected {
                    param: s0 + t,
                    magnitude: mag,
                });
            }
            samples.push(Sample {
                s: s0 + t,
                zeta: zeta_at(t),
                y: y.clone(),
                dyds: k[0].clone(),
            });
            let fac = (err.max(1e-16)).powf(expo) / err_old.powf(beta);
            let fac = (fac / safety).clamp(0.2, 5.0);
            h /= fac;
            err_old = err.max(1e-4);
        } else {
            let fac = (err.powf(0.2) / safety).clamp(0.2, 10.0);
            h /= fac;
        }
    }
    Ok(samples)
}

/// Dense access to a trajectory, including short re-integrations to points
/// off the stored path (used for analytic continuation to nearby complex
/// arguments of the reduced variables).
pub struct DenseSolution<'a, S: OdeSystem + ?Sized> {
    pub sys: &'a S,
    pub traj: &'a Trajectory,
    pub cfg: IntegratorConfig,
}

impl<'a, S: OdeSystem + ?Sized> DenseSolution<'a, S> {
    pub fn new(sys: &'a S, traj: &'a Trajectory, cfg: IntegratorConfig) -> Self {
        DenseSolution { sys, traj, cfg }
    }

    /// State at the complex point `zeta`, computed by locating the nearest
    /// stored sample and integrating along the straight segment to `zeta`.
    pub fn eval_at(&self, zeta: C64) -> Result<Vec<C64>, OdeError> {
        let (mut best_i, mut best_d) = (0usize, f64::INFINITY);
        for (i, smp) in self.traj.samples.iter().enumerate() {
            let d = (smp.zeta - zeta).norm();
            if d < best_d {
                best_d = d;
                best_i = i;
            }
        }
        let smp = &self.traj.samples[best_i];
        if best_d < 1e-14 {
            return Ok(smp.y.clone());
        }
        let seg = PathSpec::segment(smp.zeta, zeta);
        let t = integrate_ode(self.sys, &smp.y, &seg, &self.cfg)?;
        Ok(t.last().y.clone())
    }
}
