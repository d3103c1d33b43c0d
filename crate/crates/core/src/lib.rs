//! Rogue waves of the focusing nonlinear Schrödinger equation
//!
//! ```text
//! i ψ_t + ½ ψ_xx + |ψ|² ψ = 0
//! ```
//!
//! propagated with a split-step Fourier method and subjected to repeated
//! projective measurements onto a spatial window ("Zeno" observation).
//!
//! The crate is organised bottom-up:
//!
//! - [`grid`]: periodic lattice, wavenumbers, observation windows, density integrals.
//! - [`analytic`]: closed-form Akhmediev breather, Peregrine and Akhmediev-Peregrine
//!   solutions plus a finite-difference NLSE residual check.
//! - [`solver`]: the split-step stepper (Lie and Strang splittings).
//! - [`zeno`]: evolve / project / renormalise cycle and survival bookkeeping.
//! - [`spectrum`]: centred Fourier spectra and spectrograms.
//! - [`scenario`]: configuration files, figure presets and CSV export.

pub mod analytic;
pub mod error;
pub mod fft;
pub mod grid;
pub mod scenario;
pub mod solver;
pub mod spectrum;
pub mod zeno;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub(crate) use rustfft::num_complex;
