#![allow(dead_code)] // shared across test binaries that use different subsets

//! Independent oracles for the integration suites.
//!
//! Every ranking metric here is computed by sorting the raw (score, label)
//! samples and sweeping thresholds over the sorted list, never through the
//! histogram machinery under test. Counting oracles recount from raw pixels
//! with direct bookkeeping.

use rand::Rng;

pub type Sample = (u16, bool);

fn sorted_desc(samples: &[Sample]) -> Vec<Sample> {
    let mut v = samples.to_vec();
    v.sort_by_key(|s| std::cmp::Reverse(s.0));
    v
}

/// ROC vertices from a threshold sweep over the sorted samples, starting at
/// (0, 0), one vertex per distinct score, ending at (1, 1). Returns
/// (fp, tp) integer pairs plus the totals.
fn roc_vertices(samples: &[Sample]) -> (Vec<(u64, u64)>, u64, u64) {
    let sorted = sorted_desc(samples);
    let p = sorted.iter().filter(|s| s.1).count() as u64;
    let n = sorted.len() as u64 - p;
    let mut vertices = vec![(0u64, 0u64)];
    let mut tp = 0u64;
    let mut fp = 0u64;
    let mut i = 0usize;
    while i < sorted.len() {
        let score = sorted[i].0;
        while i < sorted.len() && sorted[i].0 == score {
            if sorted[i].1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        vertices.push((fp, tp));
    }
    (vertices, p, n)
}

/// Trapezoidal area under the ROC polyline.
pub fn roc_auc_oracle(samples: &[Sample]) -> f64 {
    let (vertices, p, n) = roc_vertices(samples);
    assert!(p > 0 && n > 0, "oracle needs both classes");
    let mut area = 0.0f64;
    for pair in vertices.windows(2) {
        let (fp0, tp0) = pair[0];
        let (fp1, tp1) = pair[1];
        let dx = (fp1 - fp0) as f64 / n as f64;
        let avg_y = (tp0 + tp1) as f64 / 2.0 / p as f64;
        area += dx * avg_y;
    }
    area
}

/// FPR at TPR = 0.95 with linear interpolation between bracketing vertices;
/// an exact vertex hit returns its own FPR.
pub fn fpr95_oracle(samples: &[Sample]) -> f64 {
    let (vertices, p, n) = roc_vertices(samples);
    assert!(p > 0 && n > 0, "oracle needs both classes");
    for pair in vertices.windows(2) {
        let (fp0, tp0) = pair[0];
        let (fp1, tp1) = pair[1];
        if 20 * tp1 >= 19 * p {
            if 20 * tp1 == 19 * p {
                return fp1 as f64 / n as f64;
            }
            let tpr0 = tp0 as f64 / p as f64;
            let tpr1 = tp1 as f64 / p as f64;
            let fpr0 = fp0 as f64 / n as f64;
            let fpr1 = fp1 as f64 / n as f64;
            return fpr0 + (0.95 - tpr0) * (fpr1 - fpr0) / (tpr1 - tpr0);
        }
    }
    unreachable!("TPR reaches 1.0");
}

/// Average precision over the sorted sweep: sum of recall increments times
/// the precision at each distinct score.
pub fn average_precision_oracle(samples: &[Sample]) -> f64 {
    let sorted = sorted_desc(samples);
    let p = sorted.iter().filter(|s| s.1).count() as u64;
    assert!(p > 0, "oracle needs a positive");
    let mut tp = 0u64;
    let mut seen = 0u64;
    let mut ap = 0.0f64;
    let mut prev_recall = 0.0f64;
    let mut i = 0usize;
    while i < sorted.len() {
        let score = sorted[i].0;
        while i < sorted.len() && sorted[i].0 == score {
            if sorted[i].1 {
                tp += 1;
            }
            seen += 1;
            i += 1;
        }
        let recall = tp as f64 / p as f64;
        let precision = tp as f64 / seen as f64;
        ap += (recall - prev_recall) * precision;
        prev_recall = recall;
    }
    ap
}

/// Average precision of the reversed problem: labels flipped, scores
/// mirrored.
pub fn average_precision_error_oracle(samples: &[Sample]) -> f64 {
    let flipped: Vec<Sample> = samples.iter().map(|&(s, l)| (u16::MAX - s, !l)).collect();
    average_precision_oracle(&flipped)
}

/// Mean IoU recounted directly from (gt, pred) pairs.
pub fn miou_oracle(pairs: &[(u8, u8)]) -> f64 {
    const C: usize = 19;
    let mut tp = [0u64; C];
    let mut in_gt = [0u64; C];
    let mut in_pred = [0u64; C];
    for &(g, p) in pairs {
        in_gt[g as usize] += 1;
        in_pred[p as usize] += 1;
        if g == p {
            tp[g as usize] += 1;
        }
    }
    let mut sum = 0.0f64;
    let mut classes = 0u32;
    for k in 0..C {
        let union = in_gt[k] + in_pred[k] - tp[k];
        if union > 0 {
            sum += tp[k] as f64 / union as f64;
            classes += 1;
        }
    }
    assert!(classes > 0);
    sum / classes as f64
}

/// Expected calibration error recounted directly from (level, correct)
/// samples with the shared integer binning rule.
pub fn ece_oracle(samples: &[Sample], bins: usize) -> f64 {
    let mut count = vec![0u64; bins];
    let mut correct = vec![0u64; bins];
    let mut conf_sum = vec![0u128; bins];
    for &(level, ok) in samples {
        let b = ((level as u64 * bins as u64) / 65535).min(bins as u64 - 1) as usize;
        count[b] += 1;
        conf_sum[b] += level as u128;
        if ok {
            correct[b] += 1;
        }
    }
    let total: u64 = count.iter().sum();
    assert!(total > 0);
    let mut sum = 0.0f64;
    for b in 0..bins {
        if count[b] == 0 {
            continue;
        }
        let accuracy = correct[b] as f64 / count[b] as f64;
        let mean_conf = conf_sum[b] as f64 / 65535.0 / count[b] as f64;
        sum += count[b] as f64 / total as f64 * (accuracy - mean_conf).abs();
    }
    sum
}

/// Random population with controlled tie structure: scores are drawn from
/// `distinct_levels` values, and both classes are guaranteed present.
pub fn random_population<R: Rng>(rng: &mut R, size: usize, distinct_levels: usize) -> Vec<Sample> {
    assert!(size >= 2);
    let levels: Vec<u16> = (0..distinct_levels).map(|_| rng.gen()).collect();
    let positive_rate = rng.gen_range(0.05..0.95);
    let mut samples: Vec<Sample> = (0..size)
        .map(|_| {
            let level = levels[rng.gen_range(0..levels.len())];
            (level, rng.gen_bool(positive_rate))
        })
        .collect();
    // Pin one of each class so ROC metrics are defined.
    samples[0].1 = true;
    samples[1].1 = false;
    samples
}
