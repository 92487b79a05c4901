//! Mergeable per-pixel statistics and exact metric computation.
//!
//! Accumulators hold only integer counts, so merging is associative and
//! commutative and every metric comes out bit-identical whether frames were
//! folded sequentially or reduced across any parallel merge tree.

pub mod accumulate;
pub mod calibration;
pub mod confusion;
pub mod histogram;

use thiserror::Error;

pub use accumulate::{accumulate_ood, accumulate_semantic, SemanticAccumulator};
pub use calibration::{ece, CalibrationBins, DEFAULT_ECE_BINS};
pub use confusion::{miou, ConfusionMatrix};
pub use histogram::{aupr, aupr_error, auroc, fpr_at_95tpr, ScoreHistogram};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricError {
    #[error("no pixels were accumulated for this metric")]
    EmptyEvaluation,
    #[error("score histogram needs both classes (positives={pos}, negatives={neg})")]
    DegenerateClasses { pos: u64, neg: u64 },
    #[error("precision-recall needs at least one positive")]
    NoPositives,
    #[error("accumulator shapes differ: {0}")]
    ShapeMismatch(String),
    #[error("role map is {role:?} but frame is {frame:?}")]
    RoleMapMismatch { role: (u32, u32), frame: (u32, u32) },
    #[error("class label {value} at pixel {index} is outside the evaluated range")]
    InvalidLabel { index: usize, value: u8 },
}
