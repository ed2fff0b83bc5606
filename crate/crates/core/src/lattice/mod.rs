//! Exact integer linear algebra over ℤ.
//!
//! Dense matrices with arbitrary scalar (see [`crate::scalar::Scalar`]),
//! Smith and Hermite normal forms with deterministic pivoting, kernels,
//! saturations, and quotient invariants.  Vectors are columns; a
//! [`Sublattice`] stores its generators as rows.

mod matrix;
mod snf;
mod sublattice;

pub use matrix::IntMatrix;
pub use snf::{kernel_basis, row_hnf, smith_normal_form, snf_with, solve, solve_many, Snf, Track};
pub use sublattice::{quotient_invariants, quotient_map, AbelianInvariants, Sublattice};

#[cfg(test)]
mod tests;
