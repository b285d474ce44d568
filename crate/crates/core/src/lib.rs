//! Singular values, signed generalized eigenvalues and perturbation series
//! of PT-symmetric anharmonic oscillators `H(g) = H0 + i·g·W` in a truncated
//! Hermite-function basis.

pub mod basis;
pub mod borel;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod operators;
pub mod perturbation;
pub mod potential;
pub mod quadrature;
pub mod verify;

pub use error::{Error, Result};
