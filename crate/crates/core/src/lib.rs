//! Nonderived polyadic rings from residue classes.
//!
//! A residue class `[a]_b` of integers is closed under summing `m` of its
//! elements iff `(m-1)a = 0 (mod b)`, and under multiplying `n` of them iff
//! `a^n = a (mod b)`. The minimal such arities make `[a]_b` an (m,n)-ring
//! whose operations are not restrictions of binary ones. This crate builds
//! those structures over ordinary integers ([`residue`]) and over truncated
//! p-adic integers ([`padic`], [`padic_ring`]), where divisibility by the
//! class modulus is governed by the p-adic valuation and admissible
//! representatives are found digit by digit.

pub mod padic;
pub mod padic_ring;
pub mod residue;

pub use padic::{is_prime, PAdicError, PAdicInt, PartialSums};
pub use padic_ring::{
    lift_digits, lift_digits_for_modulus, p_divide, quer_coordinate, LawCheck, LawStatus,
    LiftSolution, PAdicClass, PAdicRepresentative, RingReport,
};
pub use residue::{ArityShape, ClassElement, ResidueClass, ResidueError, ShapeCell, ShapeTable};

use num_bigint::BigInt;
use serde::Serializer;

/// Serializes an arbitrary-precision integer as a full decimal string, so
/// large invariants survive JSON consumers that truncate to f64.
pub(crate) fn serialize_bigint<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}
