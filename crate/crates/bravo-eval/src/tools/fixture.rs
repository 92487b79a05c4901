//! Deterministic synthetic benchmark fixtures.
//!
//! Real benchmark imagery cannot ship with the tooling, so tests and demos
//! run on generated submissions whose statistical laws are pinned here:
//!
//! - a pixel is void with probability 0.02; in OOD subsets a non-void pixel
//!   is OOD-invalid with probability `ood_fraction`;
//! - ground-truth classes are uniform over the 19 classes;
//! - each valid pixel draws an accuracy target `t` uniformly from an
//!   interval with mean `1 - error_rate`, so realized errors are binomial
//!   with rate `error_rate`;
//! - `Perfect` reports `t` and draws correctness with the quantized
//!   confidence itself, so measured calibration error comes only from
//!   sampling noise; `OverConfident(d)` reports `t + d` and
//!   `UnderConfident(d)` reports `t - d` (clamped), giving an expected
//!   calibration gap of `min(d, error_rate)` and `min(d, 1 - error_rate)`;
//! - OOD pixels draw confidence uniformly from `[0, 0.75]`, void pixels
//!   from `[0, 1]`; wrong predictions are uniform over the other classes.
//!
//! Generation is keyed per (seed, subset, frame), so any frame can be
//! regenerated independently and a fixture tree is byte-identical for a
//! given seed.

use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::core::manifest::{CONF_SUFFIX, GT_SUFFIX, PRED_SUFFIX};
use crate::core::{
    quantize_confidence, ClassMap, ConfidenceMap, GroundTruthFrame, ManifestEntry,
    SubmissionManifest, SubsetKind, MAX_CLASS_ID, NUM_CLASSES, OOD_LABEL, VOID_LABEL,
};
use crate::pngio::{write_class_png, write_conf_png, write_gt_png};

use super::ToolError;

const VOID_FRACTION: f64 = 0.02;
const OOD_CONF_MAX: f64 = 0.75;

/// How reported confidence relates to the accuracy the generator samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CalibrationModel {
    Perfect,
    OverConfident(f64),
    UnderConfident(f64),
}

/// Parameters of a synthetic submission.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixtureSpec {
    pub width: u32,
    pub height: u32,
    pub frames_per_subset: u32,
    pub error_rate: f64,
    pub calibration: CalibrationModel,
    pub ood_fraction: f64,
    pub seed: u64,
}

impl Default for FixtureSpec {
    fn default() -> Self {
        Self {
            width: 128,
            height: 64,
            frames_per_subset: 4,
            error_rate: 0.25,
            calibration: CalibrationModel::Perfect,
            ood_fraction: 0.2,
            seed: 0,
        }
    }
}

impl FixtureSpec {
    pub fn validate(&self) -> Result<(), ToolError> {
        let bad = |msg: String| Err(ToolError::InvalidSpec(msg));
        if self.width == 0 || self.height == 0 {
            return bad(format!("degenerate frame size {}x{}", self.width, self.height));
        }
        if self.frames_per_subset == 0 {
            return bad("at least one frame per subset is required".into());
        }
        if !(0.0..1.0).contains(&self.error_rate) {
            return bad(format!("error_rate {} outside [0, 1)", self.error_rate));
        }
        if !(0.0..1.0).contains(&self.ood_fraction) {
            return bad(format!("ood_fraction {} outside [0, 1)", self.ood_fraction));
        }
        match self.calibration {
            CalibrationModel::OverConfident(d) | CalibrationModel::UnderConfident(d)
                if !(0.0..=1.0).contains(&d) =>
            {
                bad(format!("calibration shift {d} outside [0, 1]"))
            }
            _ => Ok(()),
        }
    }
}

fn frame_seed(seed: u64, subset: SubsetKind, frame_index: u32) -> u64 {
    let ordinal = SubsetKind::ALL.iter().position(|s| *s == subset).unwrap() as u64 + 1;
    let mut z = seed
        ^ ordinal.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (frame_index as u64 + 1).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generates one frame triple under the fixture laws. Deterministic in
/// (spec.seed, subset, frame_index), independent of generation order.
pub fn generate_frame(
    spec: &FixtureSpec,
    subset: SubsetKind,
    frame_index: u32,
) -> (ClassMap, ConfidenceMap, GroundTruthFrame) {
    let mut rng = ChaCha8Rng::seed_from_u64(frame_seed(spec.seed, subset, frame_index));
    let n = spec.width as usize * spec.height as usize;
    let mut gt = Vec::with_capacity(n);
    let mut pred = Vec::with_capacity(n);
    let mut conf = Vec::with_capacity(n);

    let center = 1.0 - spec.error_rate;
    let base_width = spec.error_rate.min(center);
    let (width, shift) = match spec.calibration {
        CalibrationModel::Perfect => (base_width, 0.0),
        CalibrationModel::OverConfident(d) => (base_width.min((spec.error_rate - d).max(0.0)), d),
        CalibrationModel::UnderConfident(d) => (base_width.min((center - d).max(0.0)), -d),
    };

    for _ in 0..n {
        if rng.gen_bool(VOID_FRACTION) {
            gt.push(VOID_LABEL);
            pred.push(rng.gen_range(0..=MAX_CLASS_ID));
            conf.push(quantize_confidence(rng.gen_range(0.0..=1.0)));
            continue;
        }
        if subset.ood_eval() && rng.gen_bool(spec.ood_fraction) {
            gt.push(OOD_LABEL);
            pred.push(rng.gen_range(0..=MAX_CLASS_ID));
            conf.push(quantize_confidence(rng.gen_range(0.0..=OOD_CONF_MAX)));
            continue;
        }

        let class = rng.gen_range(0..=MAX_CLASS_ID);
        gt.push(class);
        let target = if width > 0.0 {
            rng.gen_range(center - width..=center + width)
        } else {
            center
        };
        let reported = (target + shift).clamp(0.0, 1.0);
        let level = quantize_confidence(reported);
        conf.push(level);

        let accuracy = match spec.calibration {
            CalibrationModel::Perfect => level as f64 / 65535.0,
            _ => target,
        };
        let correct = rng.gen_bool(accuracy);
        if correct {
            pred.push(class);
        } else {
            let offset = rng.gen_range(1..NUM_CLASSES as u8);
            pred.push((class + offset) % NUM_CLASSES as u8);
        }
    }

    (
        ClassMap::new(spec.width, spec.height, pred).unwrap(),
        ConfidenceMap::new(spec.width, spec.height, conf).unwrap(),
        GroundTruthFrame::new(spec.width, spec.height, gt).unwrap(),
    )
}

/// Writes a full six-subset benchmark tree under `out_dir` following the
/// `<subset>/<frame_id>_{pred,conf,gt}.png` convention, plus a manifest,
/// and returns the manifest.
pub fn synth_fixture(spec: &FixtureSpec, out_dir: &Path) -> Result<SubmissionManifest, ToolError> {
    spec.validate()?;
    let io_err = |path: &Path, source: std::io::Error| ToolError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut entries = Vec::new();
    for subset in SubsetKind::ALL {
        let dir = out_dir.join(subset.dir_name());
        fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
        for frame_index in 0..spec.frames_per_subset {
            let (pred, conf, gt) = generate_frame(spec, subset, frame_index);
            let frame_id = format!("{}_{:05}", subset.dir_name(), frame_index);
            let pred_path = dir.join(format!("{frame_id}{PRED_SUFFIX}"));
            let conf_path = dir.join(format!("{frame_id}{CONF_SUFFIX}"));
            let gt_path = dir.join(format!("{frame_id}{GT_SUFFIX}"));
            write_class_png(&pred, &pred_path)?;
            write_conf_png(&conf, &conf_path)?;
            write_gt_png(&gt, &gt_path)?;
            entries.push(ManifestEntry {
                frame_id,
                subset,
                pred: pred_path,
                conf: conf_path,
                gt: gt_path,
            });
        }
    }
    let manifest = SubmissionManifest {
        submission_id: format!("synthetic-{:016x}", spec.seed),
        entries,
    };
    manifest.save(&out_dir.join("manifest.toml"))?;
    Ok(manifest)
}
