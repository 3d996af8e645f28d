//! The Bing space: points of the rational half-plane, their projections to
//! `X = Q + sqrt(3) Q`, basic neighbourhoods and closure predicates.
//!
//! Neighbourhoods use the projections `x -/+ sqrt(3) y` for the base strips.

mod examples;
mod nbhd;
mod point;

pub use examples::{
    example1_audit, example1_family, example2_window, separation_check, theta_discrete_finite, ThetaWitness,
};
pub use nbhd::{
    affine_map, affine_nbhd, nbhd_closure_contains, nbhd_contains, ritter_regular_nbhd_contains, ritter_union_contains,
    BasicNbhd,
};
pub use point::{point_from_projections, proj_minus, proj_plus, Point, ProjectionPair};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("point ({x}, {y}) lies below the base line")]
    NegativeHeight { x: String, y: String },
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(String),
    #[error("projections out of order")]
    ProjectionOrder,
    #[error("affine scale must be positive, got {0}")]
    NonPositiveScale(String),
    #[error("family index must be at least 1")]
    InvalidIndex,
    #[error("malformed point {0:?}")]
    Malformed(String),
}
