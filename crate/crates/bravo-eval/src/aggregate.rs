//! Per-subset metric tables, cross-subset averaging, harmonic-mean
//! aggregation, and leaderboard ranking.
//!
//! Aggregation order is fixed: per-subset metrics, then the arithmetic mean
//! of each metric across its subsets, then the reversals (error rates enter
//! as `1 - x`), then the harmonic mean across metrics. Harmonic and
//! arithmetic means do not commute, so this order is part of the contract.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::core::SubsetKind;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AggregateError {
    #[error("harmonic mean of an empty list")]
    EmptyList,
    #[error("subset {0} is missing from the submission")]
    MissingSubset(SubsetKind),
    #[error("subset {subset} has no {family} metrics")]
    MissingFamily {
        subset: SubsetKind,
        family: &'static str,
    },
}

/// The six semantic metrics of one subset (or their mean across subsets),
/// as ratios in `[0, 1]`. `ece` and `fpr95` are error rates: lower is
/// better, and aggregation reverses them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemanticMetrics {
    pub miou: f64,
    pub ece: f64,
    pub auroc: f64,
    pub fpr95: f64,
    pub aupr_success: f64,
    pub aupr_error: f64,
}

impl SemanticMetrics {
    /// Metric values with reversals applied, in aggregation order.
    pub fn transformed(&self) -> [f64; 6] {
        [
            self.miou,
            1.0 - self.ece,
            self.auroc,
            1.0 - self.fpr95,
            self.aupr_success,
            self.aupr_error,
        ]
    }
}

/// The three OOD-detection metrics, as ratios in `[0, 1]`. `fpr95` is
/// reversed during aggregation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OodMetrics {
    pub auroc: f64,
    pub fpr95: f64,
    pub auprc: f64,
}

impl OodMetrics {
    pub fn transformed(&self) -> [f64; 3] {
        [self.auroc, 1.0 - self.fpr95, self.auprc]
    }
}

/// Scores of one subset: whichever metric families apply, plus the harmonic
/// summary over all applicable transformed values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetResult {
    pub subset: SubsetKind,
    pub semantic: Option<SemanticMetrics>,
    pub ood: Option<OodMetrics>,
    pub summary: f64,
}

impl SubsetResult {
    /// Builds the result and its harmonic summary, checking that the metric
    /// families present match what the subset evaluates.
    pub fn new(
        subset: SubsetKind,
        semantic: Option<SemanticMetrics>,
        ood: Option<OodMetrics>,
    ) -> Result<Self, AggregateError> {
        if subset.semantic_eval() && semantic.is_none() {
            return Err(AggregateError::MissingFamily {
                subset,
                family: "semantic",
            });
        }
        if subset.ood_eval() && ood.is_none() {
            return Err(AggregateError::MissingFamily {
                subset,
                family: "ood",
            });
        }
        let mut values = Vec::new();
        if subset.semantic_eval() {
            values.extend(semantic.as_ref().unwrap().transformed());
        }
        if subset.ood_eval() {
            values.extend(ood.as_ref().unwrap().transformed());
        }
        let summary = harmonic_mean(&values)?;
        Ok(Self {
            subset,
            semantic: if subset.semantic_eval() { semantic } else { None },
            ood: if subset.ood_eval() { ood } else { None },
            summary,
        })
    }
}

/// Full scoring of one submission.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub submission_id: String,
    pub track: u8,
    pub per_subset: Vec<SubsetResult>,
    pub semantic_mean: SemanticMetrics,
    pub ood_mean: OodMetrics,
    pub semantic_agg: f64,
    pub ood_agg: f64,
    pub bravo_index: f64,
}

/// `n / Σ(1/v)`. Any zero component collapses the mean to zero, which is
/// what makes this aggregator punish one-sided submissions.
pub fn harmonic_mean(values: &[f64]) -> Result<f64, AggregateError> {
    if values.is_empty() {
        return Err(AggregateError::EmptyList);
    }
    if values.contains(&0.0) {
        return Ok(0.0);
    }
    let inv_sum: f64 = values.iter().map(|v| 1.0 / v).sum();
    Ok(values.len() as f64 / inv_sum)
}

/// Harmonic mean of the six semantic metrics with the error rates reversed.
pub fn semantic_aggregate(m: &SemanticMetrics) -> f64 {
    harmonic_mean(&m.transformed()).expect("six values")
}

/// Harmonic mean of the three OOD metrics with the false-positive rate
/// reversed.
pub fn ood_aggregate(m: &OodMetrics) -> f64 {
    harmonic_mean(&m.transformed()).expect("three values")
}

fn mean_semantic(metrics: &[SemanticMetrics]) -> SemanticMetrics {
    let n = metrics.len() as f64;
    SemanticMetrics {
        miou: metrics.iter().map(|m| m.miou).sum::<f64>() / n,
        ece: metrics.iter().map(|m| m.ece).sum::<f64>() / n,
        auroc: metrics.iter().map(|m| m.auroc).sum::<f64>() / n,
        fpr95: metrics.iter().map(|m| m.fpr95).sum::<f64>() / n,
        aupr_success: metrics.iter().map(|m| m.aupr_success).sum::<f64>() / n,
        aupr_error: metrics.iter().map(|m| m.aupr_error).sum::<f64>() / n,
    }
}

fn mean_ood(metrics: &[OodMetrics]) -> OodMetrics {
    let n = metrics.len() as f64;
    OodMetrics {
        auroc: metrics.iter().map(|m| m.auroc).sum::<f64>() / n,
        fpr95: metrics.iter().map(|m| m.fpr95).sum::<f64>() / n,
        auprc: metrics.iter().map(|m| m.auprc).sum::<f64>() / n,
    }
}

/// Combines per-subset results into the final report. All six subsets must
/// be present with their applicable metric families; subsets are consumed
/// in canonical order so the arithmetic means never depend on input order.
pub fn aggregate_submission(
    submission_id: impl Into<String>,
    track: u8,
    per_subset: Vec<SubsetResult>,
) -> Result<AggregateReport, AggregateError> {
    let mut ordered = Vec::with_capacity(SubsetKind::ALL.len());
    for subset in SubsetKind::ALL {
        let result = per_subset
            .iter()
            .find(|r| r.subset == subset)
            .ok_or(AggregateError::MissingSubset(subset))?;
        ordered.push(result.clone());
    }

    let semantic: Vec<SemanticMetrics> = ordered
        .iter()
        .filter(|r| r.subset.semantic_eval())
        .map(|r| {
            r.semantic.ok_or(AggregateError::MissingFamily {
                subset: r.subset,
                family: "semantic",
            })
        })
        .collect::<Result<_, _>>()?;
    let ood: Vec<OodMetrics> = ordered
        .iter()
        .filter(|r| r.subset.ood_eval())
        .map(|r| {
            r.ood.ok_or(AggregateError::MissingFamily {
                subset: r.subset,
                family: "ood",
            })
        })
        .collect::<Result<_, _>>()?;

    let semantic_mean = mean_semantic(&semantic);
    let ood_mean = mean_ood(&ood);
    let semantic_agg = semantic_aggregate(&semantic_mean);
    let ood_agg = ood_aggregate(&ood_mean);
    let bravo_index = harmonic_mean(&[semantic_agg, ood_agg])?;

    Ok(AggregateReport {
        submission_id: submission_id.into(),
        track,
        per_subset: ordered,
        semantic_mean,
        ood_mean,
        semantic_agg,
        ood_agg,
        bravo_index,
    })
}

/// One leaderboard row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeaderboardRow {
    pub rank: usize,
    pub submission_id: String,
    pub track: u8,
    pub bravo_index: f64,
    pub semantic_agg: f64,
    pub ood_agg: f64,
}

/// Orders submissions by descending ranking index; ties break by semantic
/// aggregate, then OOD aggregate, then submission id.
pub fn rank(reports: &[AggregateReport]) -> Vec<LeaderboardRow> {
    let mut order: Vec<&AggregateReport> = reports.iter().collect();
    order.sort_by(|a, b| {
        b.bravo_index
            .total_cmp(&a.bravo_index)
            .then(b.semantic_agg.total_cmp(&a.semantic_agg))
            .then(b.ood_agg.total_cmp(&a.ood_agg))
            .then(a.submission_id.cmp(&b.submission_id))
    });
    order
        .into_iter()
        .enumerate()
        .map(|(i, r)| LeaderboardRow {
            rank: i + 1,
            submission_id: r.submission_id.clone(),
            track: r.track,
            bravo_index: r.bravo_index,
            semantic_agg: r.semantic_agg,
            ood_agg: r.ood_agg,
        })
        .collect()
}

/// Renders a ratio the way leaderboards print it: x100 with one decimal.
pub fn percent(value: f64) -> String {
    format!("{:.1}", value * 100.0)
}
