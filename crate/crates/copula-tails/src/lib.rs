//! Tail analysis of multivariate Archimedean copulas.
//!
//! An Archimedean copula is determined by its generator `phi` through
//! `C(u_1, ..., u_d) = phi_inv(phi(u_1) + ... + phi(u_d))`.  This crate
//! builds generators (23 parametric families plus five transforms),
//! evaluates copula and rectangle probabilities exactly, classifies the
//! upper and lower tail into the six asymptotic regimes, evaluates the
//! corresponding limit formulas, and verifies each limit against
//! finite-scale probabilities on geometric grids.

pub mod classify;
pub mod error;
pub mod eval;
pub mod extrapolate;
pub mod generator;
pub mod harness;
pub mod limits;
pub mod quadrature;

pub use error::{CopulaError, Result};
pub use generator::{
    apply_transform, make_generator, parse_spec, Generator, GeneratorHandle, Kappa, Registry,
};
