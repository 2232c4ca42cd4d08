//! Dually symmetric electrodynamics toolkit.
//!
//! Modules:
//! - [`algebra`]: complex numbers, quaternions, cyclic `[0,1]`-matrix bases
//! - [`dualsym`]: dual and hyperbolic-dual transformations of `(E, H)` pairs
//! - [`cavity`]: classical 1D cavity solutions, Maxwell and Cauchy–Riemann residuals
//! - [`fockquant`]: time-, space- and space-time-local quantization on truncated Fock spaces
//! - [`currents`]: Noether charges, 4-currents, spirality
//! - [`resonance`]: spin-wave resonance amplitudes and dispersion fits
//! - [`sshliquid`]: Fermi-liquid SSH gap equation, band energies, ground state
//! - [`cli`]: the `duplex-em` command-line driver

pub mod algebra;
pub mod cavity;
pub mod cli;
pub mod constants;
pub mod currents;
pub mod dualsym;
pub mod error;
pub mod fockquant;
pub mod quad;
pub mod resonance;
pub mod sshliquid;

pub use error::{Error, Result};
