//! Exact-arithmetic engine for root data and their arithmetic.
//!
//! The crate is organized bottom-up:
//!
//! * [`lattice`] — exact integer linear algebra over ℤ (Smith/Hermite normal
//!   forms, kernels, saturations, quotient invariants), generic over the
//!   scalar type.
//! * [`root_datum`] — split root data: validation, reflections, Weyl groups,
//!   simple systems, Dynkin classification, derived data, automorphisms.
//! * [`galois`] — finite groups acting on lattices and root data: twisted
//!   root data, anisotropy, genericity, star actions, induced lattices.
//! * [`cohomology`] — group cohomology H⁰/H¹/H² of finite-group modules on
//!   the bar complex, restriction maps, and Shafarevich kernels.
//! * [`embed`] — Tits indices, orientations, the local embedding criterion,
//!   and local-global certificates with their obstruction groups.
//! * [`algebra_model`] — étale algebras with involution, their split models,
//!   torus character lattices, and the associated twisted root data.
//! * [`sampling`] — seeded random instance generators used by property
//!   sweeps.
//!
//! # Conventions
//!
//! Vectors are column vectors and matrices act on the left.  The character
//! lattice M of rank n is identified with ℤⁿ and its dual M∨ with ℤⁿ via the
//! standard dot pairing, so the transpose of a matrix is the literal matrix
//! transpose.  Sublattices store their generators as rows.
//!
//! All arithmetic is exact.  The combinatorial layer (roots, Weyl matrices,
//! permutation actions) runs on [`Int`]; normal-form computations, whose
//! intermediate entries can grow, run on [`Big`].

pub mod algebra_model;
pub mod cohomology;
pub mod embed;
pub mod galois;
pub mod lattice;
pub mod root_datum;
pub mod sampling;
pub mod scalar;

/// Machine-width scalar for the combinatorial layer.  Root coordinates,
/// reflection matrices, and permutation actions all stay tiny.
pub type Int = i64;

/// Arbitrary-precision scalar for normal-form computations, where pivoting
/// can blow up intermediate entries.
pub type Big = num_bigint::BigInt;

/// Matrix over the machine-width scalar.
pub type Mat = lattice::IntMatrix<Int>;

/// Matrix over the arbitrary-precision scalar.
pub type BigMat = lattice::IntMatrix<Big>;

pub use lattice::{AbelianInvariants, IntMatrix, Sublattice};
pub use scalar::Scalar;
