//! Streaming per-frame accumulation into the mergeable statistics.

use crate::core::{
    ClassMap, ConfidenceMap, GroundTruthFrame, PixelRole, RoleMap, MAX_CLASS_ID, MAX_CONFIDENCE,
};

use super::calibration::CalibrationBins;
use super::confusion::ConfusionMatrix;
use super::histogram::ScoreHistogram;
use super::MetricError;

/// Everything the semantic metric family needs, gathered in one pass:
/// the class confusion matrix, the correctness-by-confidence histogram
/// (positives are correct pixels), and the calibration bins. The three
/// members always describe the same pixel population.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemanticAccumulator {
    confusion: ConfusionMatrix,
    correctness: ScoreHistogram,
    calibration: CalibrationBins,
}

impl SemanticAccumulator {
    pub fn new(ece_bins: usize) -> Self {
        Self {
            confusion: ConfusionMatrix::new(),
            correctness: ScoreHistogram::new(),
            calibration: CalibrationBins::new(ece_bins),
        }
    }

    pub fn confusion(&self) -> &ConfusionMatrix {
        &self.confusion
    }

    pub fn correctness(&self) -> &ScoreHistogram {
        &self.correctness
    }

    pub fn calibration(&self) -> &CalibrationBins {
        &self.calibration
    }

    /// Pixels accumulated so far.
    pub fn total(&self) -> u64 {
        self.confusion.total()
    }

    pub fn merge(&mut self, other: &Self) -> Result<(), MetricError> {
        self.calibration.merge(&other.calibration)?;
        self.confusion.merge(&other.confusion);
        self.correctness.merge(&other.correctness);
        Ok(())
    }
}

fn check_dims(
    dims: (u32, u32),
    roles: &RoleMap,
) -> Result<(), MetricError> {
    if dims != roles.dimensions() {
        return Err(MetricError::RoleMapMismatch {
            role: roles.dimensions(),
            frame: dims,
        });
    }
    Ok(())
}

/// Folds one frame into a semantic accumulator. Only pixels with the
/// `SemanticValid` role contribute; the rest are untouched.
pub fn accumulate_semantic(
    acc: &mut SemanticAccumulator,
    pred: &ClassMap,
    conf: &ConfidenceMap,
    gt: &GroundTruthFrame,
    roles: &RoleMap,
) -> Result<(), MetricError> {
    check_dims(pred.dimensions(), roles)?;
    check_dims(conf.dimensions(), roles)?;
    check_dims(gt.dimensions(), roles)?;

    for (index, role) in roles.roles().iter().enumerate() {
        if *role != PixelRole::SemanticValid {
            continue;
        }
        let g = gt.labels()[index];
        let p = pred.labels()[index];
        if p > MAX_CLASS_ID {
            return Err(MetricError::InvalidLabel { index, value: p });
        }
        let level = conf.values()[index];
        let correct = p == g;
        acc.confusion.record(g, p);
        acc.correctness.record(level, correct);
        acc.calibration.record(level, correct);
    }
    Ok(())
}

/// Folds one frame into an OOD score histogram. Positives are the pixels
/// invalidated by an unknown object; both classes are keyed by the reversed
/// confidence level `65535 - conf`, so low confidence ranks as strong
/// evidence of invalidity.
pub fn accumulate_ood(
    hist: &mut ScoreHistogram,
    conf: &ConfidenceMap,
    roles: &RoleMap,
) -> Result<(), MetricError> {
    check_dims(conf.dimensions(), roles)?;
    for (index, role) in roles.roles().iter().enumerate() {
        let positive = match role {
            PixelRole::OodPositive => true,
            PixelRole::OodNegative => false,
            _ => continue,
        };
        let level = MAX_CONFIDENCE - conf.values()[index];
        hist.record(level, positive);
    }
    Ok(())
}
