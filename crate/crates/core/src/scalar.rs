//! The scalar abstraction underneath the lattice algebra.
//!
//! Everything in [`crate::lattice`] is generic over [`Scalar`], so the same
//! normal-form code runs on `i64` where values are provably tiny and on
//! `BigInt` where pivot growth is unbounded.

use std::fmt;
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FromPrimitive, NumAssign, Signed, ToPrimitive};

/// An exact signed integer scalar.
pub trait Scalar:
    Integer
    + Signed
    + NumAssign
    + FromPrimitive
    + ToPrimitive
    + Clone
    + Hash
    + fmt::Debug
    + fmt::Display
    + 'static
{
    /// Lossless embedding of an `i64`; named to avoid clashing with
    /// `FromPrimitive::from_i64`, which returns an `Option`.
    fn from_small(v: i64) -> Self {
        FromPrimitive::from_i64(v).expect("i64 embeds into every scalar")
    }
}

impl<T> Scalar for T where
    T: Integer
        + Signed
        + NumAssign
        + FromPrimitive
        + ToPrimitive
        + Clone
        + Hash
        + fmt::Debug
        + fmt::Display
        + 'static
{
}
