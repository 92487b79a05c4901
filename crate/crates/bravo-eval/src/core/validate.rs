//! Submission validation: every rule violation in a frame is collected and
//! reported, so a broken batch can be triaged in one pass instead of one
//! failure at a time.

use std::fmt;

use super::types::{ClassMap, ConfidenceMap, GroundTruthFrame, MAX_CLASS_ID, OOD_LABEL, VOID_LABEL};

/// Which of the three maps a dimension complaint refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    Prediction,
    Confidence,
    GroundTruth,
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapKind::Prediction => "prediction",
            MapKind::Confidence => "confidence",
            MapKind::GroundTruth => "ground truth",
        })
    }
}

/// One broken rule. Sample-level violations report how many pixels broke the
/// rule plus the first offender, not one entry per pixel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DimensionMismatch {
        map: MapKind,
        expected: (u32, u32),
        found: (u32, u32),
    },
    ClassOutOfRange {
        count: u64,
        first_index: usize,
        first_value: u8,
    },
    GroundTruthCodeInvalid {
        count: u64,
        first_index: usize,
        first_value: u8,
    },
}

impl Violation {
    /// Stable machine-readable rule name.
    pub fn rule(&self) -> &'static str {
        match self {
            Violation::DimensionMismatch { .. } => "DimensionMismatch",
            Violation::ClassOutOfRange { .. } => "ClassOutOfRange",
            Violation::GroundTruthCodeInvalid { .. } => "GroundTruthCodeInvalid",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DimensionMismatch {
                map,
                expected,
                found,
            } => write!(
                f,
                "{map} map is {}x{}, expected {}x{}",
                found.0, found.1, expected.0, expected.1
            ),
            Violation::ClassOutOfRange {
                count,
                first_index,
                first_value,
            } => write!(
                f,
                "{count} pixel(s) outside 0..={MAX_CLASS_ID}, \
                 first value {first_value} at index {first_index}"
            ),
            Violation::GroundTruthCodeInvalid {
                count,
                first_index,
                first_value,
            } => write!(
                f,
                "{count} pixel(s) outside {{0..={MAX_CLASS_ID}, {OOD_LABEL}, {VOID_LABEL}}}, \
                 first value {first_value} at index {first_index}"
            ),
        }
    }
}

/// Outcome of validating one (prediction, confidence, ground truth) triple.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the full rule set on one frame triple and reports every violation.
///
/// The ground truth map is the dimension reference. Value rules are skipped
/// for a map whose dimensions already mismatch, since index-level reporting
/// would be meaningless there.
pub fn validate_pair(
    pred: &ClassMap,
    conf: &ConfidenceMap,
    gt: &GroundTruthFrame,
) -> ValidationReport {
    let mut violations = Vec::new();
    let expected = gt.dimensions();

    let pred_dims_ok = pred.dimensions() == expected;
    if !pred_dims_ok {
        violations.push(Violation::DimensionMismatch {
            map: MapKind::Prediction,
            expected,
            found: pred.dimensions(),
        });
    }
    if conf.dimensions() != expected {
        violations.push(Violation::DimensionMismatch {
            map: MapKind::Confidence,
            expected,
            found: conf.dimensions(),
        });
    }

    if pred_dims_ok {
        if let Some(v) = scan_out_of_range(pred.labels(), |l| l > MAX_CLASS_ID) {
            violations.push(Violation::ClassOutOfRange {
                count: v.0,
                first_index: v.1,
                first_value: v.2,
            });
        }
    }
    if let Some(v) = scan_out_of_range(gt.labels(), |l| {
        l > MAX_CLASS_ID && l != OOD_LABEL && l != VOID_LABEL
    }) {
        violations.push(Violation::GroundTruthCodeInvalid {
            count: v.0,
            first_index: v.1,
            first_value: v.2,
        });
    }

    ValidationReport { violations }
}

fn scan_out_of_range(labels: &[u8], bad: impl Fn(u8) -> bool) -> Option<(u64, usize, u8)> {
    let mut count = 0u64;
    let mut first: Option<(usize, u8)> = None;
    for (index, &label) in labels.iter().enumerate() {
        if bad(label) {
            count += 1;
            if first.is_none() {
                first = Some((index, label));
            }
        }
    }
    first.map(|(index, value)| (count, index, value))
}
