//! The three reduction chains of the Gauss-Codazzi system: the closed (v, h)
//! chain behind Bonnet surfaces, the (v, q, r) chain behind surfaces with
//! harmonic inverse mean curvature, and the Lie reduction in eta = z/zbar with
//! its generic (PVI) and g = +-1 branches, plus the lifts back to field grids.

pub mod bek;
pub mod bonnet;
pub mod branches;
pub mod lie_red;
pub mod lift;

pub use bek::BekParams;
pub use bonnet::BonnetParams;
pub use lie_red::{ReducedParamsG, ReducedStateG};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error("singular reduced state: {0}")]
    SingularState(String),
    #[error("reduction constraint violated: {0}")]
    ConstraintViolated(String),
    #[error("the unconstrained reduced system is underdetermined; integration requires the isothermic closure")]
    NonIsothermicClosure,
    #[error("branch precondition failed: {0}")]
    BranchPreconditionFailed(String),
    #[error("quadrature path hits a singular locus: {0}")]
    QuadraturePathSingular(String),
    #[error("hq quadrature and closed form disagree by {gap:e} (branch error)")]
    ProductMismatch { gap: f64 },
    #[error("domain hits a singular factor: {0}")]
    DomainSingular(String),
    #[error("requested point is {dist:e} away from the stored trajectory")]
    ExtrapolationBeyondTrajectory { dist: f64 },
    #[error(transparent)]
    Ode(#[from] crate::numerics::ode::OdeError),
    #[error(transparent)]
    Painleve(#[from] crate::painleve::PainleveError),
}
