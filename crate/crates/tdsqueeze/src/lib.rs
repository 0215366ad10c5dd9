//! Squeezed and number-operator states of the one-dimensional Schroedinger
//! equation with time-dependent quadratic Hamiltonians
//! V(x, tau) = g2(tau) x^2 + g1(tau) x + g0(tau), in units hbar = m = 1.
//!
//! The pipeline: a classical basis (chi1, chi2) of the oscillator equation
//! fixes a complex solution xi; auxiliary tau-functions built from xi and
//! the driving term define symmetry generators, number-state wavefunctions,
//! squeezed-state expansions, and closed-form observables. Every layer
//! carries residual checks (`verify`) against independent oracles.

pub mod algebra;
pub mod auxiliary;
pub mod classical;
pub mod config;
pub mod error;
pub mod grid;
pub mod observables;
pub mod ode;
pub mod potential;
pub mod quad;
pub mod squeeze;
pub mod states;
pub mod verify;

pub use error::{Error, Result};
