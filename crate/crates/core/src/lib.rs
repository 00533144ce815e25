//! Canonical quantization of the electromagnetic field in a wavelet basis.
//!
//! `mra` builds the 1D wavelet families, `coeffs` the plane-wave ↔ wavelet
//! basis change, `field` the mode functions and coupling Hamiltonian,
//! `dynamics` single-excitation evolution and observables, and `cli` the
//! configuration-driven experiment runner.

pub mod cli;
pub mod coeffs;
pub mod dynamics;
pub mod error;
pub mod field;
pub mod io;
pub mod mra;

pub use error::{Error, Result};
