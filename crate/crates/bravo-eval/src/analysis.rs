//! Cross-submission analysis: correlation of the OOD and semantic
//! aggregates, least-squares regression, per-subset correlogram, and a
//! deterministic scatter plot with ranking-index level sets.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::aggregate::AggregateReport;
use crate::core::SubsetKind;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("series have lengths {x} and {y}")]
    LengthMismatch { x: usize, y: usize },
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("a series has zero variance")]
    DegenerateVariance,
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// One submission reduced to the values the figures need.
#[derive(Debug, Clone, PartialEq)]
pub struct SubmissionPoint {
    pub submission_id: String,
    pub track: u8,
    pub semantic_agg: f64,
    pub ood_agg: f64,
    pub bravo_index: f64,
    pub subset_summaries: BTreeMap<SubsetKind, f64>,
}

impl SubmissionPoint {
    pub fn from_report(report: &AggregateReport) -> Self {
        Self {
            submission_id: report.submission_id.clone(),
            track: report.track,
            semantic_agg: report.semantic_agg,
            ood_agg: report.ood_agg,
            bravo_index: report.bravo_index,
            subset_summaries: report
                .per_subset
                .iter()
                .map(|r| (r.subset, r.summary))
                .collect(),
        }
    }
}

fn moments(x: &[f64], y: &[f64]) -> Result<(f64, f64, f64), AnalysisError> {
    if x.len() != y.len() {
        return Err(AnalysisError::LengthMismatch {
            x: x.len(),
            y: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(AnalysisError::TooFewPoints {
            needed: 2,
            got: x.len(),
        });
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        sxx += (xi - mx) * (xi - mx);
        syy += (yi - my) * (yi - my);
        sxy += (xi - mx) * (yi - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(AnalysisError::DegenerateVariance);
    }
    Ok((sxx, syy, sxy))
}

/// Product-moment correlation coefficient.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, AnalysisError> {
    let (sxx, syy, sxy) = moments(x, y)?;
    Ok(sxy / (sxx * syy).sqrt())
}

/// Least-squares line fit with its correlation coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regression {
    pub slope: f64,
    pub intercept: f64,
    pub r: f64,
}

pub fn linear_regression(x: &[f64], y: &[f64]) -> Result<Regression, AnalysisError> {
    let (sxx, syy, sxy) = moments(x, y)?;
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let slope = sxy / sxx;
    Ok(Regression {
        slope,
        intercept: my - slope * mx,
        r: sxy / (sxx * syy).sqrt(),
    })
}

/// Pairwise correlation of the per-subset summaries across submissions.
/// Cells with degenerate variance are absent rather than zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Correlogram {
    pub subsets: [SubsetKind; 6],
    cells: Vec<Option<f64>>,
}

impl Correlogram {
    pub fn cell(&self, row: usize, col: usize) -> Option<f64> {
        self.cells[row * self.subsets.len() + col]
    }
}

pub fn correlogram(points: &[SubmissionPoint]) -> Result<Correlogram, AnalysisError> {
    if points.len() < 3 {
        return Err(AnalysisError::TooFewPoints {
            needed: 3,
            got: points.len(),
        });
    }
    let series: Vec<Vec<f64>> = SubsetKind::ALL
        .iter()
        .map(|subset| {
            points
                .iter()
                .map(|p| p.subset_summaries.get(subset).copied().unwrap_or(f64::NAN))
                .collect()
        })
        .collect();
    let n = SubsetKind::ALL.len();
    let mut cells = vec![None; n * n];
    for i in 0..n {
        for j in 0..=i {
            let value = if i == j {
                // Unit diagonal wherever the series is usable at all.
                moments(&series[i], &series[i]).ok().map(|_| 1.0)
            } else {
                pearson(&series[i], &series[j]).ok()
            };
            cells[i * n + j] = value;
            cells[j * n + i] = value;
        }
    }
    Ok(Correlogram {
        subsets: SubsetKind::ALL,
        cells,
    })
}

/// Comma-separated rendering of the correlogram; blank cells mark
/// degenerate pairs. The estimator is named in the header comment line.
pub fn correlogram_csv(c: &Correlogram) -> String {
    let mut out = String::from("# estimator: pearson\nsubset");
    for s in &c.subsets {
        let _ = write!(out, ",{s}");
    }
    out.push('\n');
    for (i, s) in c.subsets.iter().enumerate() {
        let _ = write!(out, "{s}");
        for j in 0..c.subsets.len() {
            match c.cell(i, j) {
                Some(v) => {
                    let _ = write!(out, ",{v:.6}");
                }
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    out
}

/// Height of the ranking-index level set `2xy / (x + y) = index` at `x`,
/// when the curve is defined and within the unit square.
pub fn level_set_y(index: f64, x: f64) -> Option<f64> {
    if index <= 0.0 || x * 2.0 <= index {
        return None;
    }
    let y = index * x / (2.0 * x - index);
    (0.0..=1.0).contains(&y).then_some(y)
}

const PLOT_W: f64 = 640.0;
const PLOT_H: f64 = 480.0;
const MARGIN_L: f64 = 64.0;
const MARGIN_R: f64 = 24.0;
const MARGIN_T: f64 = 28.0;
const MARGIN_B: f64 = 48.0;

fn to_px(x: f64, y: f64) -> (f64, f64) {
    let inner_w = PLOT_W - MARGIN_L - MARGIN_R;
    let inner_h = PLOT_H - MARGIN_T - MARGIN_B;
    (MARGIN_L + x * inner_w, MARGIN_T + (1.0 - y) * inner_h)
}

/// Renders the cohort scatter as standalone SVG: OOD aggregate on the x
/// axis, semantic aggregate on the y axis, one gray level set of the
/// ranking index per distinct index value, the green least-squares line
/// when it exists, and one labeled marker per submission (track 2 in
/// orange). Byte-identical for identical input.
pub fn scatter_svg(points: &[SubmissionPoint]) -> String {
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{PLOT_W}\" height=\"{PLOT_H}\" \
         viewBox=\"0 0 {PLOT_W} {PLOT_H}\">"
    );
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // Axes with ticks every 0.2.
    let (x0, y0) = to_px(0.0, 0.0);
    let (x1, y1) = to_px(1.0, 1.0);
    let _ = write!(
        svg,
        "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x1:.2}\" y2=\"{y0:.2}\" stroke=\"black\"/>\n\
         <line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x0:.2}\" y2=\"{y1:.2}\" stroke=\"black\"/>\n"
    );
    for i in 0..=5 {
        let v = i as f64 / 5.0;
        let (tx, ty) = to_px(v, 0.0);
        let _ = write!(
            svg,
            "<line x1=\"{tx:.2}\" y1=\"{ty:.2}\" x2=\"{tx:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n\
             <text x=\"{tx:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"middle\">{v:.1}</text>\n",
            ty + 5.0,
            ty + 18.0
        );
        let (lx, ly) = to_px(0.0, v);
        let _ = write!(
            svg,
            "<line x1=\"{lx:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"black\"/>\n\
             <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\">{v:.1}</text>\n",
            lx - 5.0,
            lx - 8.0,
            ly + 4.0
        );
    }
    let (cx, cy) = to_px(0.5, 0.0);
    let _ = writeln!(
        svg,
        "<text x=\"{cx:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">OOD aggregate</text>",
        cy + 34.0
    );
    let (lx, ly) = to_px(0.0, 0.5);
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{ly:.2}\" font-size=\"12\" text-anchor=\"middle\" \
         transform=\"rotate(-90 {:.2} {ly:.2})\">Semantic aggregate</text>",
        lx - 44.0,
        lx - 44.0
    );

    // Level sets of the ranking index, one per distinct index value.
    let mut indices: Vec<f64> = points.iter().map(|p| p.bravo_index).collect();
    indices.sort_by(f64::total_cmp);
    indices.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    for &b in &indices {
        if b <= 0.0 {
            continue;
        }
        let x_min = b / (2.0 - b);
        let mut path = String::new();
        for k in 0..=64 {
            let x = x_min + (1.0 - x_min) * k as f64 / 64.0;
            if let Some(y) = level_set_y(b, x) {
                let (px, py) = to_px(x, y);
                let _ = write!(path, "{px:.2},{py:.2} ");
            }
        }
        let _ = writeln!(
            svg,
            "<polyline class=\"level-set\" data-index=\"{b:.6}\" points=\"{}\" \
             fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>",
            path.trim_end()
        );
    }

    // Least-squares regression of semantic on OOD, when defined.
    let xs: Vec<f64> = points.iter().map(|p| p.ood_agg).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.semantic_agg).collect();
    if let Ok(reg) = linear_regression(&xs, &ys) {
        let mut seg = Vec::new();
        for k in 0..=100 {
            let x = k as f64 / 100.0;
            let y = reg.slope * x + reg.intercept;
            if (0.0..=1.0).contains(&y) {
                seg.push(to_px(x, y));
            }
        }
        if seg.len() >= 2 {
            let (ax, ay) = seg[0];
            let (bx, by) = seg[seg.len() - 1];
            let _ = writeln!(
                svg,
                "<line class=\"regression\" data-r=\"{:.6}\" x1=\"{ax:.2}\" y1=\"{ay:.2}\" \
                 x2=\"{bx:.2}\" y2=\"{by:.2}\" stroke=\"green\" stroke-width=\"1.5\"/>",
                reg.r
            );
        }
    }

    for p in points {
        let (px, py) = to_px(p.ood_agg, p.semantic_agg);
        let color = if p.track == 2 { "#ff7f0e" } else { "#1f77b4" };
        let _ = write!(
            svg,
            "<circle class=\"submission\" cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"4\" fill=\"{color}\"/>\n\
             <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"10\">{}</text>\n",
            px + 6.0,
            py - 4.0,
            p.submission_id
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Tabular companion of the scatter: one row per submission with the
/// aggregates and every subset summary.
pub fn scatter_csv(points: &[SubmissionPoint]) -> String {
    let mut out = String::from("submission_id,track,semantic_agg,ood_agg,bravo_index");
    for s in SubsetKind::ALL {
        let _ = write!(out, ",{s}");
    }
    out.push('\n');
    for p in points {
        let _ = write!(
            out,
            "{},{},{:.6},{:.6},{:.6}",
            p.submission_id, p.track, p.semantic_agg, p.ood_agg, p.bravo_index
        );
        for s in SubsetKind::ALL {
            match p.subset_summaries.get(&s) {
                Some(v) => {
                    let _ = write!(out, ",{v:.6}");
                }
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    out
}

/// Files produced by [`write_analysis`].
#[derive(Debug, Clone)]
pub struct AnalysisOutputs {
    pub scatter_svg: PathBuf,
    pub scatter_csv: PathBuf,
    /// Absent when fewer than three submissions were supplied.
    pub correlogram_csv: Option<PathBuf>,
    pub regression: Option<Regression>,
}

/// Writes the scatter plot, its table, and (when possible) the correlogram
/// under `out_dir`.
pub fn write_analysis(
    points: &[SubmissionPoint],
    out_dir: &Path,
) -> Result<AnalysisOutputs, AnalysisError> {
    let io_err = |path: &Path, source: std::io::Error| AnalysisError::Io {
        path: path.to_path_buf(),
        source,
    };
    fs::create_dir_all(out_dir).map_err(|e| io_err(out_dir, e))?;

    let svg_path = out_dir.join("scatter.svg");
    fs::write(&svg_path, scatter_svg(points)).map_err(|e| io_err(&svg_path, e))?;
    let csv_path = out_dir.join("scatter.csv");
    fs::write(&csv_path, scatter_csv(points)).map_err(|e| io_err(&csv_path, e))?;

    let correlogram_path = match correlogram(points) {
        Ok(c) => {
            let path = out_dir.join("correlogram.csv");
            fs::write(&path, correlogram_csv(&c)).map_err(|e| io_err(&path, e))?;
            Some(path)
        }
        Err(_) => None,
    };

    let xs: Vec<f64> = points.iter().map(|p| p.ood_agg).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.semantic_agg).collect();
    Ok(AnalysisOutputs {
        scatter_svg: svg_path,
        scatter_csv: csv_path,
        correlogram_csv: correlogram_path,
        regression: linear_regression(&xs, &ys).ok(),
    })
}
