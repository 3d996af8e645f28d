//! The back-and-forth construction: stages `(A_n, B_n, f_n, U_n, phi_n)`,
//! evaluation of the limit bijection, stage verification and continuity
//! audits.

mod audit;
mod search;
mod stage;
mod verify;
mod well_order;

use thiserror::Error;

use crate::cover_algebra::CoverError;

pub use audit::{continuity_audit, AuditOutcome};
pub use search::{box_point, candidate_in_diamond, least_base_point};
pub use stage::{Chosen, Classification, Engine, EngineConfig, Stage};
pub use verify::{verify_choice, verify_initial, verify_stage, Condition, Failure, StageReport};
pub use well_order::{point_height, precedes, WellOrder};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid initial bijection: {0}")]
    InvalidInput(String),
    #[error("candidate search budget exhausted")]
    SearchExhausted,
    #[error("target diamond holds no point of the requested kind")]
    EmptyDiamond,
    #[error("stage cap {0} reached before the point was enrolled")]
    StageCap(u32),
    #[error("stage {} failed verification: {}", .0.n, .0.summary())]
    Verification(Box<StageReport>),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}
