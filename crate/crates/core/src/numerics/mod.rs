//! Numerical backbone: adaptive complex ODE integration along paths in the
//! complex plane, Wirtinger finite differences on 2D grids, and convergence
//! order estimation.

pub mod convergence;
pub mod fd;
pub mod grid;
pub mod ode;

#[cfg(test)]
mod tests;

pub use convergence::convergence_order;
pub use grid::{wirtinger_derivatives, Grid2D, GridError, WirtingerDerivs};
pub use ode::{
    integrate_ode, DenseSolution, IntegratorConfig, OdeError, OdeSystem, PathSpec, Trajectory,
};
