//! Exact algebraic-combinatorics toolkit: integer partitions and skew shapes,
//! symmetric-group characters via border-strip recursion, immanants of
//! weighted digraphs over exact rational polynomials, a verified 4-vertex
//! edge gadget, and reductions from matching counting to immanant evaluation.
//!
//! All arithmetic is exact (arbitrary-precision rationals); there is no
//! floating point anywhere in the crate.

pub mod characters;
pub mod digraph;
pub mod error;
pub mod gadget;
pub mod matching;
pub mod partition;
pub mod poly;
pub mod reduction;

pub use error::Error;

/// Exact scalar type used throughout: arbitrary-precision rational numbers.
pub type Rat = num::BigRational;

/// Convenience constructor for a rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Convenience constructor for a rational p/q.
pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(p.into(), q.into())
}
