//! Class confusion counts and mean intersection-over-union.

use crate::core::NUM_CLASSES;

use super::MetricError;

/// 19x19 table of pixel counts, `count(g, p)` = pixels of ground-truth
/// class `g` predicted as class `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    counts: Vec<u64>,
}

impl Default for ConfusionMatrix {
    fn default() -> Self {
        Self::new()
    }
}

impl ConfusionMatrix {
    pub fn new() -> Self {
        Self {
            counts: vec![0; NUM_CLASSES * NUM_CLASSES],
        }
    }

    pub fn record(&mut self, gt: u8, pred: u8) {
        debug_assert!((gt as usize) < NUM_CLASSES && (pred as usize) < NUM_CLASSES);
        self.counts[gt as usize * NUM_CLASSES + pred as usize] += 1;
    }

    pub fn count(&self, gt: usize, pred: usize) -> u64 {
        self.counts[gt * NUM_CLASSES + pred]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn merge(&mut self, other: &Self) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }
}

/// Mean IoU over the classes present in ground truth or prediction; classes
/// absent from both are excluded from the mean.
pub fn miou(confusion: &ConfusionMatrix) -> Result<f64, MetricError> {
    let mut iou_sum = 0.0f64;
    let mut classes = 0u32;
    for k in 0..NUM_CLASSES {
        let tp = confusion.count(k, k);
        let row: u64 = (0..NUM_CLASSES).map(|p| confusion.count(k, p)).sum();
        let col: u64 = (0..NUM_CLASSES).map(|g| confusion.count(g, k)).sum();
        let union = row + col - tp;
        if union > 0 {
            iou_sum += tp as f64 / union as f64;
            classes += 1;
        }
    }
    if classes == 0 {
        return Err(MetricError::EmptyEvaluation);
    }
    Ok(iou_sum / classes as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_pairs(pairs: &[(u8, u8)]) -> ConfusionMatrix {
        let mut c = ConfusionMatrix::new();
        for &(g, p) in pairs {
            c.record(g, p);
        }
        c
    }

    #[test]
    fn diagonal_confusion_is_perfect() {
        let c = from_pairs(&[(0, 0), (5, 5), (18, 18), (5, 5)]);
        assert_eq!(miou(&c).unwrap(), 1.0);
    }

    #[test]
    fn worked_example() {
        // gt = [0,0,1,1], pred = [0,1,1,1]: IoU_0 = 1/2, IoU_1 = 2/3.
        let c = from_pairs(&[(0, 0), (0, 1), (1, 1), (1, 1)]);
        let expected = (0.5 + 2.0 / 3.0) / 2.0;
        assert!((miou(&c).unwrap() - expected).abs() < 1e-15);
        assert!((miou(&c).unwrap() - 0.583_333_333).abs() < 1e-6);
    }

    #[test]
    fn absent_classes_are_excluded() {
        let c = from_pairs(&[(0, 0), (0, 0)]);
        assert_eq!(miou(&c).unwrap(), 1.0);
    }

    #[test]
    fn false_positives_pull_in_the_predicted_class() {
        // Class 3 never appears in gt but is predicted once: IoU_3 = 0.
        let c = from_pairs(&[(0, 0), (0, 3)]);
        let expected = (1.0 / 2.0 + 0.0) / 2.0;
        assert_eq!(miou(&c).unwrap(), expected);
    }

    #[test]
    fn empty_matrix_is_degenerate() {
        assert_eq!(
            miou(&ConfusionMatrix::new()).unwrap_err(),
            MetricError::EmptyEvaluation
        );
    }

    #[test]
    fn merge_adds_counts() {
        let mut a = from_pairs(&[(1, 2)]);
        let b = from_pairs(&[(1, 2), (3, 3)]);
        a.merge(&b);
        assert_eq!(a.count(1, 2), 2);
        assert_eq!(a.count(3, 3), 1);
        assert_eq!(a.total(), 3);
    }
}
