//! Coherent interaction of a free-electron quantum wavepacket with an optical
//! near field.
//!
//! The library models a single relativistic electron as a Gaussian wavepacket
//! in the longitudinal coordinate, propagates it through a finite-length
//! near-field interaction region with a split-step spectral solver, and
//! provides the closed-form first-order theory alongside for comparison.
//! Diagnostics cover momentum spectra, Wigner phase-space distributions,
//! regime classification (point-particle acceleration, PINEM sidebands,
//! anomalous PINEM fringes) and ensemble averaging over shot-to-shot jitter.
//!
//! All quantities are SI internally. Momenta are carried relative to the
//! carrier `p0` where a comoving frame is in use; public structs say which
//! convention they store.

pub mod analysis;
pub mod constants;
pub mod error;
pub mod exec;
mod fft;
pub mod kinematics;
pub mod perturbation;
pub mod propagator;
pub mod regimes;
pub mod wavepacket;
pub mod wigner;

pub use error::Error;

/// Convenience result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
