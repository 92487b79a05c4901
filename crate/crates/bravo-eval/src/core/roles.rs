//! Assigns every ground-truth pixel its role for a given evaluation mode.
//!
//! Roles partition each frame: a pixel gets exactly one role per mode, and a
//! void pixel is excluded from both modes. Semantic scoring sees only pixels
//! with a valid class label, and only on subsets where semantic metrics
//! apply. OOD scoring treats the invalid-object pixels as positives and
//! every valid-class pixel as a negative, and runs only on OOD subsets.

use super::subset::SubsetKind;
use super::types::{GroundTruthFrame, MAX_CLASS_ID, OOD_LABEL};

/// What a pixel contributes to the metric accumulators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PixelRole {
    /// Counts toward the semantic confusion matrix, calibration bins, and
    /// correctness ranking.
    SemanticValid,
    /// A positive for the invalid-pixel detection criterion.
    OodPositive,
    /// A negative for the invalid-pixel detection criterion.
    OodNegative,
    /// Contributes to nothing.
    Excluded,
}

/// Which metric family a role map feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    Semantic,
    Ood,
}

/// Per-pixel roles for one frame under one mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoleMap {
    width: u32,
    height: u32,
    roles: Vec<PixelRole>,
}

impl RoleMap {
    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn dimensions(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn roles(&self) -> &[PixelRole] {
        &self.roles
    }

    /// Number of pixels carrying a non-excluded role.
    pub fn active_count(&self) -> usize {
        self.roles
            .iter()
            .filter(|r| **r != PixelRole::Excluded)
            .count()
    }
}

/// Computes the role of every pixel in `gt` for `mode` on `subset`.
///
/// Ground truth is assumed validated; unknown codes fall through to
/// `Excluded` rather than panicking so that lenient pipelines stay total.
pub fn pixel_roles(gt: &GroundTruthFrame, subset: SubsetKind, mode: EvalMode) -> RoleMap {
    let roles = match mode {
        EvalMode::Semantic if subset.semantic_eval() => gt
            .labels()
            .iter()
            .map(|&l| {
                if l <= MAX_CLASS_ID {
                    PixelRole::SemanticValid
                } else {
                    PixelRole::Excluded
                }
            })
            .collect(),
        EvalMode::Ood if subset.ood_eval() => gt
            .labels()
            .iter()
            .map(|&l| {
                if l == OOD_LABEL {
                    PixelRole::OodPositive
                } else if l <= MAX_CLASS_ID {
                    PixelRole::OodNegative
                } else {
                    PixelRole::Excluded
                }
            })
            .collect(),
        _ => vec![PixelRole::Excluded; gt.labels().len()],
    };
    RoleMap {
        width: gt.width(),
        height: gt.height(),
        roles,
    }
}
