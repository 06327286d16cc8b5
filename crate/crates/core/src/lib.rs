//! Generalized rational variable projection.
//!
//! Signals are approximated in Malmquist–Takenaka (MT) rational bases whose
//! inverse poles and pole configuration are chosen by a multi-dimensional
//! particle swarm that moves in the Poincaré disc. The crate packages this as
//! a lossy ECG codec with a bit-exact file format and a set of distortion
//! metrics.

pub mod architecture;
pub mod codec;
pub mod disc;
pub mod error;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod mt;
pub mod quant;
pub mod swarm;
pub mod varpro;
pub mod wavelet;

pub use error::{Error, Result};
pub use num_complex::Complex64;
