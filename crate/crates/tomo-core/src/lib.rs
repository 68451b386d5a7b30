//! Tomographic-probability toolkit for continuous-variable and spin states.
//!
//! Every quantum state is represented by a positive marginal distribution
//! (tomogram) `w(X, mu, nu)` of the observable `X = mu q + nu p`. The crate
//! provides the maps between tomograms and wave functions, density kernels
//! and Wigner functions, closed-form oscillator states, overlap and moment
//! functionals, exact propagators for quadratic Hamiltonians, and spin
//! tomography with density-matrix reconstruction.
//!
//! Units are `hbar = m = omega = 1`. Wigner functions are normalized as
//! `∫ W dq dp / (2 pi) = 1`.
//!
//! The crate is `no_std` (with `alloc`) unless the `std` feature is on.

#![cfg_attr(not(any(feature = "std", test)), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod analytic;
pub mod error;
pub mod evolution;
pub mod grid;
pub mod linalg;
mod par;
pub mod special;
pub mod spin;
pub mod states;
pub mod statistics;
pub mod transforms;

pub use error::{Result, TomoError};
pub use grid::{Array2, Grid1D};
pub use states::{
    AnalyticTomogram, DensityKernel, OpticalSamples, PhaseDensity, SliceQuadrature, SpinState, SpinTomogram,
    SymplecticFrame, Tomogram, Validate, Violation, WaveFunction, WignerGrid,
};
