//! Core dynamics of the general Ericksen--Leslie model for nematic liquid
//! crystals on the periodic unit torus.
//!
//! The crate is organised around the pieces a simulation needs:
//!
//! * [`coefficients`] -- the six Leslie viscosities, derived material
//!   constants and the algebraic regime classification that decides which
//!   energy law applies.
//! * [`spectral`] -- periodic scalar/vector/tensor fields with Fourier
//!   transforms, exact spectral differentiation, Leray projection and
//!   two-thirds dealiasing.
//! * [`constitutive`] -- pointwise constitutive quantities: the
//!   Ginzburg--Landau force, kinematic transport terms, the Leslie and
//!   Ericksen stresses and the conservative/dissipative stress split.
//! * [`solver`] -- semi-implicit pseudo-spectral time integration of the
//!   coupled velocity/director system.
//! * [`diagnostics`] -- energy, dissipation and higher-order functionals,
//!   energy-law residuals and the term-by-term expansion of d/dt A(t).
//! * [`linstab`] -- plane-wave linear stability: the coefficient functions
//!   g, p, q, the flow-alignment angles, dispersion roots and the unstable
//!   mode construction.
//!
//! Everything here is `no_std` + `alloc`; IO, file formats and the command
//! line live in the companion `elc-cli` crate.

#![no_std]
// Index-based loops mirror the tensor index notation of the formulas.
#![allow(clippy::needless_range_loop)]

extern crate alloc;
#[cfg(any(feature = "std", test))]
extern crate std;

pub mod coefficients;
pub mod constitutive;
pub mod diagnostics;
mod error;
pub mod linstab;
mod math;
pub mod prng;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
