//! Disjoint clopen covers of `Q + sqrt3 Q` by order-convex cells whose
//! endpoints are cuts `q + sqrt2`, and the induced covers of the Bing space.

mod bijection;
mod cell;
mod check;
mod diamond;
mod interval;
mod partition;
mod refine;

use thiserror::Error;

use crate::bing_topology::Point;

pub use bijection::CellBijection;
pub use cell::{Cell, CellId, Step};
pub use check::{check_admissible, AdmissibilityReport, Violation};
pub use diamond::{diamond_contains, diamond_of, phi_diamond, DiamondCell};
pub use interval::{cut_between, CutInterval};
pub use partition::{admissible_cover, lattice_step_for, LazyPartition};
pub use refine::{convex_refine, enumerate_x};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("mesh must be positive")]
    NonPositiveMesh,
    #[error("checked point {0} is a base point")]
    CheckedOnBase(Point),
    #[error("checked point {0} is not among the marked points")]
    CheckedNotMarked(Point),
    #[error("projections of checked point {0} lie in different parent cells")]
    CheckedAcrossParents(Point),
    #[error("cell {0} is not materialized")]
    UnknownCell(CellId),
    #[error("override {0} -> {1} collides with another override")]
    OverrideConflict(CellId, CellId),
    #[error("override {0} -> {1} does not respect the parent map")]
    OverrideAcrossParents(CellId, CellId),
    #[error("value {index} lies outside its assigned interval")]
    MalformedAssignment { index: usize },
}
