//! Confidence calibration bins and expected calibration error.
//!
//! Bins hold integer sums only (pixel counts, correct counts, and the sum of
//! raw 16-bit confidence levels), so merges are exact and the final metric
//! is bit-identical no matter how per-frame bins were combined. The real
//! confidence `level / 65535` is formed once, at metric time.

use crate::core::MAX_CONFIDENCE;

use super::MetricError;

/// Default number of equal-width bins over `[0, 1]`.
pub const DEFAULT_ECE_BINS: usize = 15;

/// Equal-width calibration bins, half-open `[lo, hi)` except the last bin,
/// which is closed at 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CalibrationBins {
    counts: Vec<u64>,
    correct: Vec<u64>,
    conf_sums: Vec<u128>,
}

impl CalibrationBins {
    /// `bins` must be at least 1.
    pub fn new(bins: usize) -> Self {
        assert!(bins >= 1, "calibration needs at least one bin");
        Self {
            counts: vec![0; bins],
            correct: vec![0; bins],
            conf_sums: vec![0; bins],
        }
    }

    pub fn bin_count(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Bin index of a raw confidence level: `floor(level / 65535 * bins)`,
    /// computed in integers so the half-open boundaries are exact.
    fn bin_index(&self, level: u16) -> usize {
        let bins = self.counts.len() as u64;
        ((level as u64 * bins) / MAX_CONFIDENCE as u64).min(bins - 1) as usize
    }

    pub fn record(&mut self, level: u16, correct: bool) {
        let bin = self.bin_index(level);
        self.counts[bin] += 1;
        self.conf_sums[bin] += level as u128;
        if correct {
            self.correct[bin] += 1;
        }
    }

    pub fn merge(&mut self, other: &Self) -> Result<(), MetricError> {
        if self.bin_count() != other.bin_count() {
            return Err(MetricError::ShapeMismatch(format!(
                "calibration bins {} vs {}",
                self.bin_count(),
                other.bin_count()
            )));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        for (a, b) in self.correct.iter_mut().zip(&other.correct) {
            *a += b;
        }
        for (a, b) in self.conf_sums.iter_mut().zip(&other.conf_sums) {
            *a += b;
        }
        Ok(())
    }

    /// Per-bin (count, accuracy, mean confidence) rows for non-empty bins,
    /// the data behind a reliability diagram.
    pub fn reliability_rows(&self) -> Vec<(u64, f64, f64)> {
        (0..self.bin_count())
            .filter(|&b| self.counts[b] > 0)
            .map(|b| {
                let count = self.counts[b];
                let accuracy = self.correct[b] as f64 / count as f64;
                let mean_conf = self.conf_sums[b] as f64 / MAX_CONFIDENCE as f64 / count as f64;
                (count, accuracy, mean_conf)
            })
            .collect()
    }
}

/// Expected calibration error: the count-weighted mean gap between bin
/// accuracy and bin mean confidence over non-empty bins.
pub fn ece(bins: &CalibrationBins) -> Result<f64, MetricError> {
    let total = bins.total();
    if total == 0 {
        return Err(MetricError::EmptyEvaluation);
    }
    let mut sum = 0.0f64;
    for (count, accuracy, mean_conf) in bins.reliability_rows() {
        sum += count as f64 / total as f64 * (accuracy - mean_conf).abs();
    }
    Ok(sum)
}
