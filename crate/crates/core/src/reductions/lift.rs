//! Lifts of reduced trajectories back to analytic field configurations on
//! the (z, zbar) plane.
//!
//! Every lift implements `AnalyticFields`, so grids at any resolution, the
//! conformal transform, the involution and the symmetry-flow checks all
//! compose with it.

use super::bek::{BekParams, BekSystem};
use super::bonnet::{BonnetParams, BonnetSystem};
use super::branches::BranchSolution;
use super::lie_red::{EtaSystem, ReducedParamsG, ReducedStateG};
use super::{lie_red::GenericSolution, ReductionError};
use crate::gauss_codazzi::{AnalyticFields, FieldsPoint};
use crate::numerics::ode::{integrate_ode, DenseSolution, IntegratorConfig, PathSpec, Trajectory};
use crate::{c64, C64};

/// Source of reduced-state values for the power-law (Table 1) lift.
pub enum EtaSource {
    /// A trajectory of the eta-system along an arc, re-integrated off-path
    /// when needed.
    Trajectory {
        system: EtaSystem,
        traj: Trajectory,
        cfg: IntegratorConfig,
    },
    /// A closed-form or PVI-carried branch.
    Branch(Box<dyn BranchSolution + Sync>),
    /// The generic PVI-built solution.
    Generic(GenericSolution),
}

impl EtaSource {
    pub fn eval(&self, eta: C64) -> Result<ReducedStateG, ReductionError> {
        match self {
            EtaSource::Trajectory { system, traj, cfg } => {
                let dense = DenseSolution::new(system, traj, cfg.clone());
                let y = dense.eval_at(eta)?;
                Ok(ReducedStateG {
                    eta,
                    v: y[0],
                    vp: y[1],
                    h: y[2],
                    q: y[3],
                    r: y[3],
                })
            }
            EtaSource::Branch(b) => b.eval(eta),
            EtaSource::Generic(gs) => gs.eval(eta),
        }
    }
}

/// Power-law lift of an eta-trajectory:
/// e^u = z^{2g} v(eta), H = z^{-1-g} h(eta), Q = R = z^{g-1} q(eta),
/// eta = z / zbar.
pub struct GenericLift {
    pub g: C64,
    pub c: C64,
    pub source: EtaSource,
}

impl GenericLift {
    pub fn from_trajectory(
        params: ReducedParamsG,
        ic: &ReducedStateG,
        eta_path: &PathSpec,
        cfg: &IntegratorConfig,
    ) -> Result<Self, ReductionError> {
        let system = EtaSystem { params };
        let y0 = [ic.v, ic.vp, ic.h, ic.q];
        let traj = integrate_ode(&system, &y0, eta_path, cfg)?;
        Ok(GenericLift {
            g: params.g,
            c: params.c,
            source: EtaSource::Trajectory {
                system,
                traj,
                cfg: cfg.clone(),
            },
        })
    }

    pub fn from_branch(b: Box<dyn BranchSolution + Sync>) -> Self {
        GenericLift {
            g: b.g(),
            c: b.c(),
            source: EtaSource::Branch(b),
        }
    }

    pub fn from_generic(gs: GenericSolution) -> Self {
        GenericLift {
            g: gs.g,
            c: c64(0.0, 0.0),
            source: EtaSource::Generic(gs),
        }
    }

    pub fn fields_at(&self, z: C64, zb: C64) -> Result<FieldsPoint, ReductionError> {
        if z.norm() < 1e-12 || zb.norm() < 1e-12 {
            return Err(ReductionError::DomainSingular("z or zbar = 0".into()));
        }
        let eta = z / zb;
        let s = self.source.eval(eta)?;
        let lz = z.ln();
        Ok(FieldsPoint {
            u: 2.0 * self.g * lz + s.v.ln(),
            h: ((-1.0 - self.g) * lz).exp() * s.h,
            q: ((self.g - 1.0) * lz).exp() * s.q,
            r: ((self.g - 1.0) * lz).exp() * s.r,
        })
    }
}

impl AnalyticFields for GenericLift {
    fn at(&self, z: C64, zb: C64) -> FieldsPoint {
        self.fields_at(z, zb).expect("lift evaluation inside domain")
    }
    fn c(&self) -> C64 {
        self.c
    }
}

/// Bonnet-family lift:
/// e^u = 4 (c_q/c_h^2) v(xi), H = c_h h(xi), xi = (z + zbar)/2,
/// Q = (2 c_q/c_h) 4 c_z sinh(2 c_z zbar) / (sinh(2 c_z z) sinh(4 c_z xi)),
/// R the mirror image.
pub struct BonnetLift {
    pub params: BonnetParams,
    pub system: BonnetSystem,
    pub traj: Trajectory,
    pub cfg: IntegratorConfig,
}

impl BonnetLift {
    /// Integrate the (v, h) system over a real xi-interval.
    pub fn new(
        params: BonnetParams,
        v0: C64,
        vp0: C64,
        h0: C64,
        xi_range: (f64, f64),
        cfg: &IntegratorConfig,
    ) -> Result<Self, ReductionError> {
        let system = BonnetSystem { params };
        let path = PathSpec::segment(c64(xi_range.0, 0.0), c64(xi_range.1, 0.0));
        let traj = integrate_ode(&system, &[v0, vp0, h0], &path, cfg)?;
        Ok(BonnetLift {
            params,
            system,
            traj,
            cfg: cfg.clone(),
        })
    }

    fn q_factor(&self, a: C64, b: C64, xi: C64) -> C64 {
        // 4 c_z sinh(2 c_z a) / (sinh(2 c_z b) sinh(4 c_z xi)); c_z -> 0
        // limit a/(b 2 xi) restored by series
        let cz = self.params.c_z;
        if (4.0 * cz * xi).norm() < 1e-6 {
            let sa = 2.0 * cz * a;
            let sb = 2.0 * cz * b;
            let num = a * (1.0 + sa * sa / 6.0);
            let den = b * (1.0 + sb * sb / 6.0);
            let w = 4.0 * cz * xi;
            num / (den * xi * (1.0 + w * w / 6.0))
        } else {
            4.0 * cz * (2.0 * cz * a).sinh() / ((2.0 * cz * b).sinh() * (4.0 * cz * xi).sinh())
        }
    }

    pub fn fields_at(&self, z: C64, zb: C64) -> Result<FieldsPoint, ReductionError> {
        let xi = (z + zb) * 0.5;
        let dense = DenseSolution::new(&self.system, &self.traj, self.cfg.clone());
        let y = dense.eval_at(xi)?;
        let (v, h) = (y[0], y[2]);
        let p = &self.params;
        let pref = 2.0 * p.c_q / p.c_h;
        Ok(FieldsPoint {
            u: (4.0 * p.c_q / (p.c_h * p.c_h)).ln() + v.ln(),
            h: p.c_h * h,
            q: pref * self.q_factor(zb, z, xi),
            r: pref * self.q_factor(z, zb, xi),
        })
    }
}

impl AnalyticFields for BonnetLift {
    fn at(&self, z: C64, zb: C64) -> FieldsPoint {
        self.fields_at(z, zb).expect("bonnet lift evaluation")
    }
    fn c(&self) -> C64 {
        self.params.c
    }
}

/// HIMC-family lift (c = 0):
/// 1/H = (2 c_z/c_h)(coth(2 c_z z) + coth(2 c_z zbar)), e^u = 4 c_u v(x)/H^2,
/// Q = (4 c_q/c_h)(2 c_z/sinh(2 c_z z))^2 (q(x) + i theta),
/// R = (4 c_q/c_h)(2 c_z/sinh(2 c_z zbar))^2 (r(x) - i theta), x = (z + zbar)/2.
pub struct BekLift {
    pub params: BekParams,
    pub system: BekSystem,
    pub traj: Trajectory,
    pub cfg: IntegratorConfig,
}

impl BekLift {
    pub fn new(
        params: BekParams,
        v0: C64,
        vp0: C64,
        q0: C64,
        r0: C64,
        x_range: (f64, f64),
        cfg: &IntegratorConfig,
    ) -> Result<Self, ReductionError> {
        let system = BekSystem { params };
        let path = PathSpec::segment(c64(x_range.0, 0.0), c64(x_range.1, 0.0));
        let traj = integrate_ode(&system, &[v0, vp0, q0, r0], &path, cfg)?;
        Ok(BekLift {
            params,
            system,
            traj,
            cfg: cfg.clone(),
        })
    }

    pub fn fields_at(&self, z: C64, zb: C64) -> Result<FieldsPoint, ReductionError> {
        let x = (z + zb) * 0.5;
        let dense = DenseSolution::new(&self.system, &self.traj, self.cfg.clone());
        let y = dense.eval_at(x)?;
        let (v, q, r) = (y[0], y[2], y[3]);
        let p = &self.params;
        let cz = p.c_z;
        let hinv = (2.0 * cz / p.c_h) * (1.0 / (2.0 * cz * z).tanh() + 1.0 / (2.0 * cz * zb).tanh());
        if hinv.norm() < 1e-14 {
            return Err(ReductionError::DomainSingular("H pole".into()));
        }
        let h = 1.0 / hinv;
        let i = c64(0.0, 1.0);
        let sz = (2.0 * cz / (2.0 * cz * z).sinh()) * (2.0 * cz / (2.0 * cz * z).sinh());
        let szb = (2.0 * cz / (2.0 * cz * zb).sinh()) * (2.0 * cz / (2.0 * cz * zb).sinh());
        Ok(FieldsPoint {
            u: (4.0 * p.c_u * v).ln() - 2.0 * h.ln(),
            h,
            q: 4.0 * p.c_q / p.c_h * sz * (q + i * p.theta),
            r: 4.0 * p.c_q / p.c_h * szb * (r - i * p.theta),
        })
    }
}

impl AnalyticFields for BekLift {
    fn at(&self, z: C64, zb: C64) -> FieldsPoint {
        self.fields_at(z, zb).expect("bek lift evaluation")
    }
    fn c(&self) -> C64 {
        c64(0.0, 0.0)
    }
}
