//! Multivariable BC-type basic hypergeometric orthogonal polynomials.
//!
//! The crate builds Askey–Wilson polynomials in n variables as eigenfunctions
//! of the Koornwinder q-difference operator, evaluates the orthogonality
//! measures attached to them (torus, partially discrete, finite q-Racah and
//! Jackson multisums for the little and big q-Jacobi families) and compares
//! the resulting Gram matrices against closed-form norm and q-Selberg
//! evaluations.

pub mod askey_wilson;
pub mod bcpoly;
pub mod error;
pub mod jackson;
pub mod koornwinder;
pub mod measures;
pub mod pochsym;
pub mod qjacobi_big;
pub mod qjacobi_little;
pub mod qracah;
pub mod qseries;
pub mod quadrature;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
