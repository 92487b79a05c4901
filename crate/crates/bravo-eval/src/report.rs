//! Report emission: the machine-readable JSON record and the plain-text
//! tables. All numbers are carried as ratios and rendered x100 with one
//! decimal, the way leaderboards print them.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::aggregate::{percent, AggregateReport, LeaderboardRow};
use crate::engine::ValidationOutcome;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
}

/// Serializes a report with a stable field order and a trailing newline, so
/// identical evaluations produce identical bytes.
pub fn render_report_json(report: &AggregateReport) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(report).expect("report serialization");
    bytes.push(b'\n');
    bytes
}

pub fn write_report_json(report: &AggregateReport, path: &Path) -> Result<(), ReportError> {
    fs::write(path, render_report_json(report)).map_err(|source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_report_json(path: &Path) -> Result<AggregateReport, ReportError> {
    let bytes = fs::read(path).map_err(|source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_slice(&bytes).map_err(|source| ReportError::Json {
        path: path.to_path_buf(),
        source,
    })
}

fn cell(value: Option<f64>) -> String {
    match value {
        Some(v) => percent(v),
        None => "-".into(),
    }
}

/// Plain-text per-subset table plus the aggregate block.
pub fn render_report_table(report: &AggregateReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "submission {} (track {})",
        report.submission_id, report.track
    );
    let _ = writeln!(
        out,
        "{:<14}{:>9}{:>8}{:>7}{:>8}{:>8}{:>8}{:>8}{:>11}{:>11}{:>8}",
        "subset",
        "summary",
        "miou",
        "ece",
        "auroc",
        "fpr95",
        "aupr_s",
        "aupr_e",
        "ood_auroc",
        "ood_fpr95",
        "auprc"
    );
    for r in &report.per_subset {
        let s = r.semantic.as_ref();
        let o = r.ood.as_ref();
        let _ = writeln!(
            out,
            "{:<14}{:>9}{:>8}{:>7}{:>8}{:>8}{:>8}{:>8}{:>11}{:>11}{:>8}",
            r.subset.to_string(),
            percent(r.summary),
            cell(s.map(|m| m.miou)),
            cell(s.map(|m| m.ece)),
            cell(s.map(|m| m.auroc)),
            cell(s.map(|m| m.fpr95)),
            cell(s.map(|m| m.aupr_success)),
            cell(s.map(|m| m.aupr_error)),
            cell(o.map(|m| m.auroc)),
            cell(o.map(|m| m.fpr95)),
            cell(o.map(|m| m.auprc)),
        );
    }
    let m = &report.semantic_mean;
    let _ = writeln!(
        out,
        "{:<14}{:>9}{:>8}{:>7}{:>8}{:>8}{:>8}{:>8}{:>11}{:>11}{:>8}",
        "semantic_mean",
        "",
        percent(m.miou),
        percent(m.ece),
        percent(m.auroc),
        percent(m.fpr95),
        percent(m.aupr_success),
        percent(m.aupr_error),
        "",
        "",
        ""
    );
    let o = &report.ood_mean;
    let _ = writeln!(
        out,
        "{:<14}{:>9}{:>8}{:>7}{:>8}{:>8}{:>8}{:>8}{:>11}{:>11}{:>8}",
        "ood_mean", "", "", "", "", "", "", "", percent(o.auroc), percent(o.fpr95), percent(o.auprc)
    );
    let _ = writeln!(out);
    let _ = writeln!(out, "semantic aggregate  {}", percent(report.semantic_agg));
    let _ = writeln!(out, "ood aggregate       {}", percent(report.ood_agg));
    let _ = writeln!(out, "bravo index         {}", percent(report.bravo_index));
    out
}

/// Plain-text leaderboard table.
pub fn render_leaderboard(rows: &[LeaderboardRow]) -> String {
    let width = rows
        .iter()
        .map(|r| r.submission_id.len())
        .max()
        .unwrap_or(10)
        .max(10);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>4}  {:<width$}{:>6}{:>8}{:>10}{:>7}",
        "rank", "submission", "track", "bravo", "semantic", "ood"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:>4}  {:<width$}{:>6}{:>8}{:>10}{:>7}",
            r.rank,
            r.submission_id,
            r.track,
            percent(r.bravo_index),
            percent(r.semantic_agg),
            percent(r.ood_agg)
        );
    }
    out
}

/// Machine-readable validation report.
pub fn render_validation_json(outcome: &ValidationOutcome) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(outcome).expect("validation serialization");
    bytes.push(b'\n');
    bytes
}

/// Human-readable validation listing, one line per issue.
pub fn render_validation_text(outcome: &ValidationOutcome) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "checked {} frame(s), {} issue(s)",
        outcome.frames_checked,
        outcome.issues.len()
    );
    for issue in &outcome.issues {
        let _ = writeln!(
            out,
            "{}/{}: {}: {}",
            issue.subset, issue.frame_id, issue.rule, issue.detail
        );
    }
    out
}
