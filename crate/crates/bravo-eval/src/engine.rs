//! The evaluation pipeline: decode, validate, accumulate in parallel,
//! compute per-subset metrics, and aggregate.
//!
//! Frames are folded into integer accumulators and reduced with the merge
//! monoid, so reports are byte-identical for any worker count and any
//! manifest order. Metric values are computed once, from the fully merged
//! accumulators, in canonical subset order.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::aggregate::{
    aggregate_submission, AggregateError, AggregateReport, OodMetrics, SemanticMetrics,
    SubsetResult,
};
use crate::core::{
    pixel_roles, validate_pair, EvalMode, ManifestEntry, ManifestError, SubmissionManifest,
    SubsetKind,
};
use crate::metrics::{
    accumulate_ood, accumulate_semantic, aupr, aupr_error, auroc, ece, fpr_at_95tpr, miou,
    MetricError, ScoreHistogram, SemanticAccumulator, DEFAULT_ECE_BINS,
};
use crate::pngio::{read_class_png, read_conf_png, read_gt_png};

/// Knobs of an evaluation run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Number of equal-width calibration bins.
    pub ece_bins: usize,
    /// Worker threads; `None` uses the process-wide default pool.
    pub threads: Option<usize>,
    /// Strict validation also rejects frames that contribute nothing
    /// (all-void ground truth).
    pub strict: bool,
    /// Track label recorded in reports.
    pub track: u8,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            ece_bins: DEFAULT_ECE_BINS,
            threads: None,
            strict: false,
            track: 1,
        }
    }
}

/// One broken rule on one frame.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrameIssue {
    pub frame_id: String,
    pub subset: SubsetKind,
    pub rule: String,
    pub detail: String,
}

/// Everything validation found across a submission.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct ValidationOutcome {
    pub frames_checked: usize,
    pub issues: Vec<FrameIssue>,
}

impl ValidationOutcome {
    pub fn is_ok(&self) -> bool {
        self.issues.is_empty()
    }
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("submission failed validation with {} issue(s)", .0.issues.len())]
    Validation(ValidationOutcome),
    #[error("subset {subset}: {metric} is degenerate: {source}")]
    Degenerate {
        subset: SubsetKind,
        metric: &'static str,
        source: MetricError,
    },
    #[error("missing subsets: {}", .0.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", "))]
    MissingSubsets(Vec<SubsetKind>),
    #[error(transparent)]
    Aggregate(#[from] AggregateError),
    #[error(transparent)]
    Manifest(#[from] ManifestError),
}

impl EvalError {
    /// Stable exit-code contract: 1 validation, 2 degeneracy, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            EvalError::Validation(_) => 1,
            EvalError::Degenerate { .. } | EvalError::MissingSubsets(_) => 2,
            EvalError::Aggregate(_) => 2,
            EvalError::Manifest(_) => 3,
        }
    }
}

/// Per-subset fold state: the two metric-family accumulators plus any
/// issues found along the way.
struct SubsetFold {
    semantic: SemanticAccumulator,
    ood: ScoreHistogram,
    issues: Vec<FrameIssue>,
    frames: usize,
}

impl SubsetFold {
    fn new(ece_bins: usize) -> Self {
        Self {
            semantic: SemanticAccumulator::new(ece_bins),
            ood: ScoreHistogram::new(),
            issues: Vec::new(),
            frames: 0,
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.semantic
            .merge(&other.semantic)
            .expect("folds share the bin configuration");
        self.ood.merge(&other.ood);
        self.issues.extend(other.issues);
        self.frames += other.frames;
        self
    }
}

fn issue(entry: &ManifestEntry, rule: impl Into<String>, detail: impl Into<String>) -> FrameIssue {
    FrameIssue {
        frame_id: entry.frame_id.clone(),
        subset: entry.subset,
        rule: rule.into(),
        detail: detail.into(),
    }
}

/// Decodes, validates, and (when clean) accumulates one frame.
fn process_entry(fold: &mut SubsetFold, entry: &ManifestEntry, strict: bool) {
    fold.frames += 1;
    let mut decode_issues = Vec::new();

    for (path, what) in [(&entry.pred, "pred"), (&entry.conf, "conf"), (&entry.gt, "gt")] {
        if !path.exists() {
            decode_issues.push(issue(
                entry,
                "MissingFile",
                format!("{what} file {} does not exist", path.display()),
            ));
        }
    }
    if !decode_issues.is_empty() {
        fold.issues.extend(decode_issues);
        return;
    }

    let pred = read_class_png(&entry.pred);
    let conf = read_conf_png(&entry.conf);
    let gt = read_gt_png(&entry.gt);
    let mut decode_ok = true;
    for err in [pred.as_ref().err(), conf.as_ref().err(), gt.as_ref().err()]
        .into_iter()
        .flatten()
    {
        fold.issues.push(issue(entry, err.rule(), err.to_string()));
        decode_ok = false;
    }
    if !decode_ok {
        return;
    }
    let (pred, conf, gt) = (pred.unwrap(), conf.unwrap(), gt.unwrap());

    let report = validate_pair(&pred, &conf, &gt);
    if !report.is_ok() {
        for v in &report.violations {
            fold.issues.push(issue(entry, v.rule(), v.to_string()));
        }
        return;
    }
    if strict && !gt.has_evaluable_pixels() {
        fold.issues.push(issue(
            entry,
            "EmptyFrame",
            "every pixel is void; the frame contributes nothing",
        ));
        return;
    }

    if entry.subset.semantic_eval() {
        let roles = pixel_roles(&gt, entry.subset, EvalMode::Semantic);
        accumulate_semantic(&mut fold.semantic, &pred, &conf, &gt, &roles)
            .expect("validated frames accumulate");
    }
    if entry.subset.ood_eval() {
        let roles = pixel_roles(&gt, entry.subset, EvalMode::Ood);
        accumulate_ood(&mut fold.ood, &conf, &roles).expect("validated frames accumulate");
    }
}

fn run_in_pool<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("worker pool")
            .install(job),
        None => job(),
    }
}

fn fold_subset(
    manifest: &SubmissionManifest,
    subset: SubsetKind,
    config: &RunConfig,
) -> SubsetFold {
    let entries: Vec<&ManifestEntry> = manifest.entries_for(subset).collect();
    entries
        .par_iter()
        .fold(
            || SubsetFold::new(config.ece_bins),
            |mut fold, entry| {
                process_entry(&mut fold, entry, config.strict);
                fold
            },
        )
        .reduce(|| SubsetFold::new(config.ece_bins), SubsetFold::merge)
}

fn sorted_issues(mut issues: Vec<FrameIssue>) -> Vec<FrameIssue> {
    issues.sort_by(|a, b| {
        (a.subset, &a.frame_id, &a.rule, &a.detail).cmp(&(b.subset, &b.frame_id, &b.rule, &b.detail))
    });
    issues
}

/// Runs the full rule set over every frame of the submission and reports
/// every issue found. Never fails; an unreadable file is an issue, not an
/// error.
pub fn validate_submission(manifest: &SubmissionManifest, config: &RunConfig) -> ValidationOutcome {
    run_in_pool(config.threads, || {
        let folds: Vec<SubsetFold> = SubsetKind::ALL
            .into_par_iter()
            .map(|subset| fold_subset(manifest, subset, config))
            .collect();
        let mut issues = Vec::new();
        let mut frames = 0;
        for fold in folds {
            issues.extend(fold.issues);
            frames += fold.frames;
        }
        ValidationOutcome {
            frames_checked: frames,
            issues: sorted_issues(issues),
        }
    })
}

fn semantic_metrics(
    subset: SubsetKind,
    acc: &SemanticAccumulator,
) -> Result<SemanticMetrics, EvalError> {
    let fail = |metric: &'static str| {
        move |source: MetricError| EvalError::Degenerate {
            subset,
            metric,
            source,
        }
    };
    Ok(SemanticMetrics {
        miou: miou(acc.confusion()).map_err(fail("miou"))?,
        ece: ece(acc.calibration()).map_err(fail("ece"))?,
        auroc: auroc(acc.correctness()).map_err(fail("auroc"))?,
        fpr95: fpr_at_95tpr(acc.correctness()).map_err(fail("fpr95"))?,
        aupr_success: aupr(acc.correctness()).map_err(fail("aupr_success"))?,
        aupr_error: aupr_error(acc.correctness()).map_err(fail("aupr_error"))?,
    })
}

fn ood_metrics(subset: SubsetKind, hist: &ScoreHistogram) -> Result<OodMetrics, EvalError> {
    let fail = |metric: &'static str| {
        move |source: MetricError| EvalError::Degenerate {
            subset,
            metric,
            source,
        }
    };
    Ok(OodMetrics {
        auroc: auroc(hist).map_err(fail("ood_auroc"))?,
        fpr95: fpr_at_95tpr(hist).map_err(fail("ood_fpr95"))?,
        auprc: aupr(hist).map_err(fail("auprc"))?,
    })
}

/// Evaluates a submission end to end: validates every frame, accumulates
/// per subset in parallel, computes the per-subset metric families, and
/// aggregates them into the final report.
pub fn evaluate_submission(
    manifest: &SubmissionManifest,
    config: &RunConfig,
) -> Result<AggregateReport, EvalError> {
    let missing: Vec<SubsetKind> = SubsetKind::ALL
        .into_iter()
        .filter(|s| manifest.entries_for(*s).next().is_none())
        .collect();
    if !missing.is_empty() {
        return Err(EvalError::MissingSubsets(missing));
    }

    run_in_pool(config.threads, || {
        let folds: Vec<(SubsetKind, SubsetFold)> = SubsetKind::ALL
            .into_par_iter()
            .map(|subset| (subset, fold_subset(manifest, subset, config)))
            .collect();

        let issues: Vec<FrameIssue> = folds
            .iter()
            .flat_map(|(_, fold)| fold.issues.iter().cloned())
            .collect();
        if !issues.is_empty() {
            let frames = folds.iter().map(|(_, f)| f.frames).sum();
            return Err(EvalError::Validation(ValidationOutcome {
                frames_checked: frames,
                issues: sorted_issues(issues),
            }));
        }

        let mut per_subset = Vec::with_capacity(SubsetKind::ALL.len());
        for (subset, fold) in &folds {
            let semantic = subset
                .semantic_eval()
                .then(|| semantic_metrics(*subset, &fold.semantic))
                .transpose()?;
            let ood = subset
                .ood_eval()
                .then(|| ood_metrics(*subset, &fold.ood))
                .transpose()?;
            per_subset.push(SubsetResult::new(*subset, semantic, ood)?);
        }
        Ok(aggregate_submission(
            manifest.submission_id.clone(),
            config.track,
            per_subset,
        )?)
    })
}
