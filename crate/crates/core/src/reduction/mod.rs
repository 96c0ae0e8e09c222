//! Reduction of interval translation maps.
//!
//! The stages, in pipeline order:
//!
//! 1. [`reducibility_case`]: if the image misses the first or last piece,
//!    that piece is dead and can be dropped ([`drop_edge_interval`]).
//! 2. [`trap_formula`] / [`trap`]: an explicit interval `Δ` with `TΔ ⊆ Δ`
//!    that every orbit enters, and the cell `C_jk` it is taken from.
//! 3. [`truncate`] / [`untruncate`]: the invertible truncation to `Δ` in
//!    image coordinates, and [`fit`]: truncation followed by rescaling,
//!    producing a tight map.
//! 4. [`classify_tight3`]: the case table for tight three-piece maps.
//! 5. [`induce_type1`] / [`induce_type2`]: explicit first-return maps that
//!    turn every non-boundary case into a double rotation or a rotation.
//!
//! [`reduce_pipeline`] runs all stages and records a [`ReductionTrace`].

mod classify;
mod fitting;
mod induction;
mod pipeline;

pub use classify::{classify_tight3, escape_bound, CaseLabel, Classification};
pub use fitting::{
    cell, drop_edge_interval, fit, reducibility_case, trap, trap_formula, truncate, untruncate,
    Cell, DisplacedEdges, DroppedEdge, Fitting, ReducibilityVerdict, Side, TrapFormula, Truncation,
};
pub use induction::{
    as_double_rotation, induce_type1, induce_type2, rotation_from_itm2, InducedMap, Induction,
    InductionKind, Rotation,
};
pub use pipeline::{reduce_pipeline, reduce_pipeline_with, ReductionTrace, Terminal};

use crate::interval::IntervalError;
use crate::itm::ItmError;
use crate::typing::TypingError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error(transparent)]
    Itm(#[from] ItmError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error(transparent)]
    Typing(#[from] TypingError),
    #[error("map is irreducible: both edge pieces meet the image")]
    NotReducible,
    #[error("no piece moves {0}; the map cannot be invariant on a bounded interval")]
    EmptySignClass(&'static str),
    #[error("cell {given} does not match the cell {expected} computed from the map")]
    CellMismatch { expected: Cell, given: Cell },
    #[error("inconsistent truncation data: {0}")]
    InconsistentTruncation(String),
    #[error("expected a map with {expected} pieces, found {found}")]
    WrongPieceCount { expected: usize, found: usize },
    #[error("expected a tight map")]
    NotTight,
    #[error("operation needs case {expected}, map is in case {found}")]
    LabelMismatch {
        expected: &'static str,
        found: CaseLabel,
    },
    #[error("escape index {index} exceeds the bound {bound}")]
    EscapeIndexOverflow { index: u64, bound: u64 },
    #[error("fitting did not stabilize after {0} passes")]
    FitDidNotConverge(usize),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
