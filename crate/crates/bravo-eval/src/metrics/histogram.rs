//! Exact ranking metrics over the 65 536 quantized confidence levels.
//!
//! Every pixel lands in one of 65 536 score buckets, so ROC and
//! precision-recall curves have at most one vertex per occupied level and
//! all cumulative counts are integers. The metrics below are computed from
//! those integer counts with a single floating-point division at the end,
//! which makes them exact under quantization, invariant under strictly
//! increasing score remaps, and bit-identical regardless of how per-frame
//! histograms were merged.

use crate::core::CONFIDENCE_LEVELS;

use super::MetricError;

/// Mergeable positive/negative pixel counts per discrete score level.
///
/// Merging is element-wise addition, so histograms form a commutative
/// monoid: any merge tree over per-frame histograms yields the same counts
/// as a single sequential pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreHistogram {
    pos: Vec<u64>,
    neg: Vec<u64>,
}

impl Default for ScoreHistogram {
    fn default() -> Self {
        Self::new()
    }
}

impl ScoreHistogram {
    pub fn new() -> Self {
        Self {
            pos: vec![0; CONFIDENCE_LEVELS],
            neg: vec![0; CONFIDENCE_LEVELS],
        }
    }

    pub fn record(&mut self, level: u16, positive: bool) {
        if positive {
            self.pos[level as usize] += 1;
        } else {
            self.neg[level as usize] += 1;
        }
    }

    pub fn from_samples<I: IntoIterator<Item = (u16, bool)>>(samples: I) -> Self {
        let mut hist = Self::new();
        for (level, positive) in samples {
            hist.record(level, positive);
        }
        hist
    }

    pub fn merge(&mut self, other: &Self) {
        for (a, b) in self.pos.iter_mut().zip(&other.pos) {
            *a += b;
        }
        for (a, b) in self.neg.iter_mut().zip(&other.neg) {
            *a += b;
        }
    }

    pub fn total_pos(&self) -> u64 {
        self.pos.iter().sum()
    }

    pub fn total_neg(&self) -> u64 {
        self.neg.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total_pos() == 0 && self.total_neg() == 0
    }

    pub fn pos_counts(&self) -> &[u64] {
        &self.pos
    }

    pub fn neg_counts(&self) -> &[u64] {
        &self.neg
    }

    /// Swaps the class labels and mirrors the score axis. Metrics of the
    /// reversed histogram rank "negatives by reversed score", which is how
    /// the error variant of precision-recall is defined.
    pub fn reversed(&self) -> Self {
        let mut rev = Self::new();
        for (i, (&p, &n)) in self.pos.iter().zip(&self.neg).enumerate() {
            let j = CONFIDENCE_LEVELS - 1 - i;
            rev.pos[j] = n;
            rev.neg[j] = p;
        }
        rev
    }

    /// Doubled Mann-Whitney win count and doubled pair count, the exact
    /// rational behind [`auroc`]: a positive at a strictly higher level
    /// than a negative contributes 2, a tie contributes 1. Swapping the
    /// classes, or mirroring the score axis, maps wins to
    /// `pairs - wins` exactly.
    pub fn pair_counts(&self) -> (u128, u128) {
        let mut wins2: u128 = 0;
        let mut neg_below: u128 = 0;
        for (&p, &n) in self.pos.iter().zip(&self.neg) {
            if p > 0 {
                wins2 += p as u128 * (2 * neg_below + n as u128);
            }
            neg_below += n as u128;
        }
        let pairs2 = 2 * self.total_pos() as u128 * self.total_neg() as u128;
        (wins2, pairs2)
    }

    fn require_both_classes(&self) -> Result<(u64, u64), MetricError> {
        let (p, n) = (self.total_pos(), self.total_neg());
        if p == 0 || n == 0 {
            return Err(MetricError::DegenerateClasses { pos: p, neg: n });
        }
        Ok((p, n))
    }
}

/// Area under the ROC curve: the probability that a random positive
/// outranks a random negative, ties counting one half. Equivalent to
/// trapezoidal integration of the ROC polyline through every occupied
/// threshold.
///
/// The value is one exact integer ratio rounded once; the branch keeps the
/// rounding symmetric around one half, so complementing a histogram
/// complements the value to within one rounding of the same ratio.
pub fn auroc(hist: &ScoreHistogram) -> Result<f64, MetricError> {
    hist.require_both_classes()?;
    let (wins2, pairs2) = hist.pair_counts();
    if 2 * wins2 <= pairs2 {
        Ok(wins2 as f64 / pairs2 as f64)
    } else {
        Ok(1.0 - (pairs2 - wins2) as f64 / pairs2 as f64)
    }
}

/// False-positive rate at the ROC vertex where the true-positive rate
/// reaches 95%, linearly interpolated between the two bracketing vertices.
/// A vertex that hits TPR = 0.95 exactly (checked in integers: 20 TP = 19 P)
/// returns its own FPR.
pub fn fpr_at_95tpr(hist: &ScoreHistogram) -> Result<f64, MetricError> {
    let (p, n) = hist.require_both_classes()?;
    let mut tp: u64 = 0;
    let mut fp: u64 = 0;
    for level in (0..CONFIDENCE_LEVELS).rev() {
        let (dp, dn) = (hist.pos[level], hist.neg[level]);
        if dp == 0 && dn == 0 {
            continue;
        }
        let (prev_tp, prev_fp) = (tp, fp);
        tp += dp;
        fp += dn;
        if 20 * tp as u128 >= 19 * p as u128 {
            if 20 * tp as u128 == 19 * p as u128 {
                return Ok(fp as f64 / n as f64);
            }
            let tpr_prev = prev_tp as f64 / p as f64;
            let tpr = tp as f64 / p as f64;
            let fpr_prev = prev_fp as f64 / n as f64;
            let fpr = fp as f64 / n as f64;
            return Ok(fpr_prev + (0.95 - tpr_prev) * (fpr - fpr_prev) / (tpr - tpr_prev));
        }
    }
    // TPR reaches 1.0 at the lowest occupied level, so the loop always
    // crosses 0.95; only an inconsistent histogram gets here.
    unreachable!("TPR sweep must cross 0.95");
}

/// Average precision: thresholds sweep the occupied levels from the highest
/// score down, and each level contributes its recall increment times the
/// precision including every pixel at or above it.
pub fn aupr(hist: &ScoreHistogram) -> Result<f64, MetricError> {
    let p = hist.total_pos();
    if p == 0 {
        return Err(MetricError::NoPositives);
    }
    let mut tp: u64 = 0;
    let mut fp: u64 = 0;
    let mut weighted_precision_sum = 0.0f64;
    for level in (0..CONFIDENCE_LEVELS).rev() {
        let (dp, dn) = (hist.pos[level], hist.neg[level]);
        if dp == 0 && dn == 0 {
            continue;
        }
        tp += dp;
        fp += dn;
        if dp > 0 {
            let precision = tp as f64 / (tp + fp) as f64;
            weighted_precision_sum += dp as f64 * precision;
        }
    }
    Ok(weighted_precision_sum / p as f64)
}

/// Average precision of the reversed problem: positives are the original
/// negatives, ranked by mirrored score. Computing error retrieval from a
/// correctness histogram is the intended use.
pub fn aupr_error(correctness: &ScoreHistogram) -> Result<f64, MetricError> {
    aupr(&correctness.reversed())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hist(pos_levels: &[u16], neg_levels: &[u16]) -> ScoreHistogram {
        ScoreHistogram::from_samples(
            pos_levels
                .iter()
                .map(|&l| (l, true))
                .chain(neg_levels.iter().map(|&l| (l, false))),
        )
    }

    #[test]
    fn auroc_perfect_separation() {
        let h = hist(&[100, 200, 300], &[1, 2, 3]);
        assert_eq!(auroc(&h).unwrap(), 1.0);
    }

    #[test]
    fn auroc_pure_ties() {
        let h = hist(&[42, 42], &[42, 42, 42]);
        assert_eq!(auroc(&h).unwrap(), 0.5);
    }

    #[test]
    fn auroc_worked_example() {
        // Wins: pos 4 beats both negatives, pos 3 beats one and ties one,
        // pos 2 and pos 1 each beat the negative at 0: (4 + 1 + 0.5) / 8.
        let h = hist(&[4, 3, 2, 1], &[3, 0]);
        assert_eq!(auroc(&h).unwrap(), 0.6875);
    }

    #[test]
    fn auroc_needs_both_classes() {
        let h = hist(&[5], &[]);
        assert_eq!(
            auroc(&h).unwrap_err(),
            MetricError::DegenerateClasses { pos: 1, neg: 0 }
        );
    }

    #[test]
    fn fpr95_perfect_separation_is_zero() {
        let h = hist(&[100; 20], &[1, 2, 3]);
        assert_eq!(fpr_at_95tpr(&h).unwrap(), 0.0);
    }

    #[test]
    fn fpr95_worked_example() {
        // ROC vertices: (0, .25) (.5, .5) (.5, .75) (.5, 1); both vertices
        // bracketing TPR 0.95 sit at FPR 0.5.
        let h = hist(&[4, 3, 2, 1], &[3, 0]);
        assert_eq!(fpr_at_95tpr(&h).unwrap(), 0.5);
    }

    #[test]
    fn fpr95_all_tied_interpolates_the_diagonal() {
        let h = hist(&[7; 10], &[7; 10]);
        assert!((fpr_at_95tpr(&h).unwrap() - 0.95).abs() < 1e-15);
    }

    #[test]
    fn fpr95_exact_vertex_returns_its_fpr() {
        // 19 of 20 positives above the negatives: the vertex after level 10
        // has TPR exactly 0.95 with zero false positives so far.
        let mut h = hist(&[10; 19], &[5, 5, 5]);
        h.record(1, true);
        assert_eq!(fpr_at_95tpr(&h).unwrap(), 0.0);
    }

    #[test]
    fn aupr_perfect_separation() {
        let h = hist(&[9, 8, 9], &[1, 2]);
        assert_eq!(aupr(&h).unwrap(), 1.0);
    }

    #[test]
    fn aupr_all_tied_equals_positive_fraction() {
        let h = hist(&[3; 2], &[3; 2]);
        assert_eq!(aupr(&h).unwrap(), 0.5);
        let h = hist(&[3; 1], &[3; 3]);
        assert!((aupr(&h).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn aupr_needs_positives() {
        let h = hist(&[], &[1]);
        assert_eq!(aupr(&h).unwrap_err(), MetricError::NoPositives);
    }

    #[test]
    fn aupr_error_every_pixel_incorrect() {
        // Correctness histogram with no positives at all: every pixel is an
        // error, so error retrieval is trivially perfect.
        let h = hist(&[], &[100, 200, 300]);
        assert_eq!(aupr_error(&h).unwrap(), 1.0);
    }

    #[test]
    fn aupr_error_perfectly_ordered_errors() {
        // Incorrect pixels all strictly below correct ones.
        let h = hist(&[50000, 60000], &[10, 20, 30]);
        assert_eq!(aupr_error(&h).unwrap(), 1.0);
    }

    #[test]
    fn aupr_error_no_errors_is_degenerate() {
        let h = hist(&[1, 2, 3], &[]);
        assert_eq!(aupr_error(&h).unwrap_err(), MetricError::NoPositives);
    }

    #[test]
    fn reversal_endpoints_mirror() {
        let h = hist(&[0], &[65535]);
        let r = h.reversed();
        assert_eq!(r.pos_counts()[0], 1);
        assert_eq!(r.neg_counts()[65535], 1);
    }

    #[test]
    fn merge_is_elementwise_addition() {
        let mut a = hist(&[1, 2], &[3]);
        let b = hist(&[2], &[3, 4]);
        let mut single = hist(&[1, 2, 2], &[3, 3, 4]);
        a.merge(&b);
        assert_eq!(a, single);
        single.merge(&ScoreHistogram::new());
        assert_eq!(single, hist(&[1, 2, 2], &[3, 3, 4]));
    }
}
