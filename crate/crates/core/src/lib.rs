//! Unruh-DeWitt detector response on non-uniformly accelerated worldlines in
//! thermal fields, acceleration-induced transparency (AIT), and the resulting
//! two-detector entanglement.
//!
//! The pipeline is
//! [`worldline`] → [`amplitudes`] → [`fieldstate`] → [`entanglement`],
//! with [`sweep`] orchestrating parameter scans and file output.

pub mod amplitudes;
pub mod entanglement;
pub mod error;
pub mod fieldstate;
pub mod optimize;
pub mod quadrature;
pub mod specfun;
pub mod sweep;
pub mod worldline;

pub use error::{Error, Result};
pub use num_complex::Complex64;
