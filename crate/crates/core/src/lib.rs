//! Exact arithmetic for the numerical side of spherical twist groups on
//! K3 surfaces of Picard rank one.
//!
//! Everything here is computed over the integers and rationals, with no
//! floating point on any load-bearing path:
//!
//! - [`lattice`]: the rank-3 lattice with the degree-parameterised Mukai
//!   pairing, roots and their reflections;
//! - [`moebius`]: Moebius transformations over the rationals, exact
//!   upper-half-plane points, and the 2x2 <-> 3x3 transfer of the action;
//! - [`arith`]: membership tests for `Gamma_0(n)`, Atkin-Lehner elements,
//!   the Fricke group and the lifting criterion;
//! - [`words`]: normal forms in free products of cyclic groups and kernel
//!   generators for maps onto cyclic quotients;
//! - [`hurwitz`]: the Hurwitz braid action on tuples and the braid word
//!   problem solved through it;
//! - [`domain`]: truncated Ford fundamental domains and generator-root
//!   extraction for groups generated by point reflections;
//! - [`catalog`]: the bundled worked examples with their presentations,
//!   numerical mutation, and end-to-end verification reports;
//! - [`svg`]: deterministic SVG rendering of domains and marked points.

pub mod arith;
pub mod catalog;
pub mod domain;
mod error;
pub mod hurwitz;
pub mod lattice;
pub mod matrix;
pub mod moebius;
pub mod svg;
pub mod words;

pub use error::Error;

/// Arbitrary-precision integer used throughout the crate.
pub type Int = num_bigint::BigInt;
/// Arbitrary-precision rational used throughout the crate.
pub type Rat = num_rational::BigRational;

/// Shorthand for `Result` with the crate error type.
pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn int(n: i64) -> Int {
    Int::from(n)
}

pub(crate) fn rat(p: i64, q: i64) -> Rat {
    Rat::new(Int::from(p), Int::from(q))
}
