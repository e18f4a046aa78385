//! Numerical toolkit for the Al-Salam–Carlitz II polynomials on the bilateral
//! q-lattice: basic hypergeometric series, Jackson quadrature, the
//! second-order q-difference operator and its spectral decomposition.
//!
//! Module layout follows the data flow:
//! [`qcore`] (series) → [`qgrid`] (lattice, operator) → [`specialfn`]
//! (eigenfunctions) → [`spectral`] (Gram matrices, Green kernel).

pub mod error;
pub mod qcore;
pub mod qgrid;
pub mod specialfn;
pub mod spectral;

pub use error::{QError, Result};
pub use num_complex::Complex64 as C64;
