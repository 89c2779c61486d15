//! Numerical verification laboratory for the symmetry reductions of the
//! Gauss-Codazzi equations of conformally parametrized surfaces.
//!
//! The crate is organized around the chain
//! PDE (Gauss-Codazzi) -> Lie reduction -> coupled ODE systems -> Painleve VI,
//! with residual evaluators, first integrals and lifts at every stage so each
//! link can be certified numerically.

pub mod frames;
pub mod gauss_codazzi;
pub mod lie;
pub mod mat2;
pub mod numerics;
pub mod painleve;
pub mod reductions;
pub mod report;

/// Complex scalar used throughout the numeric modules.
pub type C64 = num_complex::Complex<f64>;

/// Shorthand constructor.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
