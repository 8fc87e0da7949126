//! Special functions: complex gamma, complex erf and closed-form
//! quadratic-phase segment integrals.

mod erf;
mod gamma;
mod quadphase;

pub use erf::{erf_complex, ERF_ENVELOPE};
pub use gamma::{complex_gamma, ln_gamma, POLE_TOLERANCE};
pub use quadphase::{quad_phase_integral, QuadPhase, CURVATURE_THRESHOLD};

/// Complex scalar used throughout the crate.
pub type ComplexValue = num_complex::Complex64;
