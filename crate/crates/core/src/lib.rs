//! Exact back-and-forth synthesis of homeomorphisms of the Bing space.
//!
//! The Bing space is the rational half-plane `{(x, y) : y >= 0}` whose
//! neighbourhoods are two base strips at the projections `x -/+ sqrt(3) y`.
//! This crate extends any finite bijection between points of that space,
//! stage by stage, into a certified partial homeomorphism.

// errors carry exact points, which are large by nature
#![allow(clippy::result_large_err)]

pub mod bing_topology;
pub mod cli;
pub mod cover_algebra;
pub mod engine;
pub mod exact_algebra;

/// Arbitrary-precision rational scalar used throughout the construction.
pub type Rational = exact_algebra::Rational;
/// `r0 + r1 sqrt(3)` over [`Rational`].
pub type Qf3Value = exact_algebra::Qf3<Rational>;
/// Cut point `q + sqrt(2)` over [`Rational`].
pub type CutValue = exact_algebra::Cut<Rational>;
/// Element of `Q(sqrt 2, sqrt 3)` over [`Rational`].
pub type QuadValue = exact_algebra::QuadSum<Rational>;

pub use bing_topology::Point;
