//! Numerical verification of the duality between the Eckart-type `coth`
//! potential and its confluent partner on the real line.
//!
//! - [`specfun`]: Jacobi polynomials, real cubic roots, finite differences.
//! - [`duality`]: coordinate maps, Schwarzian derivative, partner potentials.
//! - [`models`]: closed-form spectra and eigenfunctions of both models.
//! - [`eigensolver`]: finite-difference Sturm–Liouville oracle.
//! - [`verify`]: reports comparing the closed forms with the oracle.

pub mod duality;
pub mod eigensolver;
pub mod models;
pub mod specfun;
pub mod verify;
