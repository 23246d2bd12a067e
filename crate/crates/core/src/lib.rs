//! Dyadic multifractal analysis.
//!
//! The crate is organised around [`dyadic::CoefficientField`]: every
//! instantiation (Haar expansions, Poisson extensions, Fourier and Dirichlet
//! series) produces a per-level array of nonnegative coefficients, and the
//! estimators in [`dyadic`] turn such a field into pointwise exponents and
//! box-counting spectra.

pub mod dirichlet;
pub mod dyadic;
pub mod error;
pub mod fourier;
pub mod haar;
pub mod io;
pub mod poisson;
pub mod sets;
mod sum;

pub use error::{Error, Result};
