//! Limiting eigenvalue laws of Wigner and Wishart ensembles built on daisy-graph
//! (Vinberg) matrix spaces.
//!
//! The crate samples the random ensembles, evaluates the closed-form limits
//! (including the Lambert-Tsallis inverse function), solves the generic
//! variance-profile fixed-point equation numerically, and compares empirical
//! spectra with the theory.

pub mod ensembles;
pub mod error;
pub mod lambert_tsallis;
pub mod law;
pub mod poly;
pub mod profile_solver;
pub mod quadrature;
pub mod wigner_limit;
pub mod wishart_limit;

pub use error::{Error, Result};
pub use law::{Atom, SpectralLaw, ZeroBehavior};
