//! Submission manifests: a TOML file listing one record per frame, or
//! directory discovery by naming convention.
//!
//! The on-disk convention is `<subset>/<frame_id>_pred.png` with `_conf.png`
//! and `_gt.png` siblings. Discovery records the expected paths even when a
//! sibling is missing, so validation can name the absent file instead of the
//! frame silently disappearing.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::subset::SubsetKind;

pub const PRED_SUFFIX: &str = "_pred.png";
pub const CONF_SUFFIX: &str = "_conf.png";
pub const GT_SUFFIX: &str = "_gt.png";

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {source}")]
    Parse {
        path: PathBuf,
        source: toml::de::Error,
    },
    #[error("duplicate frame id {0:?}")]
    DuplicateFrameId(String),
    #[error("no frames found under {0}")]
    Empty(PathBuf),
}

/// One frame of a submission: where its three files live and which subset
/// pools its confidence ranking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub frame_id: String,
    pub subset: SubsetKind,
    pub pred: PathBuf,
    pub conf: PathBuf,
    pub gt: PathBuf,
}

/// Every frame of one submission.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubmissionManifest {
    pub submission_id: String,
    pub entries: Vec<ManifestEntry>,
}

#[derive(Serialize, Deserialize)]
struct RawManifest {
    submission_id: String,
    #[serde(default)]
    frames: Vec<RawFrame>,
}

#[derive(Serialize, Deserialize)]
struct RawFrame {
    id: String,
    subset: SubsetKind,
    pred: PathBuf,
    conf: PathBuf,
    gt: PathBuf,
}

impl SubmissionManifest {
    /// Parses a manifest file. Relative frame paths are resolved against the
    /// manifest's directory.
    pub fn load(path: &Path) -> Result<Self, ManifestError> {
        let text = fs::read_to_string(path).map_err(|source| ManifestError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let raw: RawManifest = toml::from_str(&text).map_err(|source| ManifestError::Parse {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        let resolve = |p: PathBuf| if p.is_absolute() { p } else { base.join(p) };

        let mut entries = Vec::with_capacity(raw.frames.len());
        for frame in raw.frames {
            entries.push(ManifestEntry {
                frame_id: frame.id,
                subset: frame.subset,
                pred: resolve(frame.pred),
                conf: resolve(frame.conf),
                gt: resolve(frame.gt),
            });
        }
        let manifest = SubmissionManifest {
            submission_id: raw.submission_id,
            entries,
        };
        manifest.check_unique_ids()?;
        Ok(manifest)
    }

    /// Serializes the manifest with paths relative to `base` where possible.
    pub fn save(&self, path: &Path) -> Result<(), ManifestError> {
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        let relativize = |p: &Path| {
            p.strip_prefix(base)
                .map(Path::to_path_buf)
                .unwrap_or_else(|_| p.to_path_buf())
        };
        let raw = RawManifest {
            submission_id: self.submission_id.clone(),
            frames: self
                .entries
                .iter()
                .map(|e| RawFrame {
                    id: e.frame_id.clone(),
                    subset: e.subset,
                    pred: relativize(&e.pred),
                    conf: relativize(&e.conf),
                    gt: relativize(&e.gt),
                })
                .collect(),
        };
        let text = toml::to_string_pretty(&raw).expect("manifest serialization cannot fail");
        fs::write(path, text).map_err(|source| ManifestError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Scans `root/<subset>/` directories for `*_pred.png` files and builds
    /// entries for each, expecting the confidence sibling alongside and the
    /// ground-truth sibling under `gt_root` (defaults to `root`).
    ///
    /// Entries are sorted by (subset, frame id) so that discovery order never
    /// depends on filesystem iteration order.
    pub fn discover(
        root: &Path,
        submission_id: impl Into<String>,
        gt_root: Option<&Path>,
    ) -> Result<Self, ManifestError> {
        let gt_root = gt_root.unwrap_or(root);
        let mut entries = Vec::new();
        for subset in SubsetKind::ALL {
            let dir = root.join(subset.dir_name());
            if !dir.is_dir() {
                continue;
            }
            let listing = fs::read_dir(&dir).map_err(|source| ManifestError::Io {
                path: dir.clone(),
                source,
            })?;
            for item in listing {
                let item = item.map_err(|source| ManifestError::Io {
                    path: dir.clone(),
                    source,
                })?;
                let name = item.file_name();
                let Some(name) = name.to_str() else { continue };
                let Some(frame_id) = name.strip_suffix(PRED_SUFFIX) else {
                    continue;
                };
                entries.push(ManifestEntry {
                    frame_id: frame_id.to_string(),
                    subset,
                    pred: dir.join(name),
                    conf: dir.join(format!("{frame_id}{CONF_SUFFIX}")),
                    gt: gt_root
                        .join(subset.dir_name())
                        .join(format!("{frame_id}{GT_SUFFIX}")),
                });
            }
        }
        if entries.is_empty() {
            return Err(ManifestError::Empty(root.to_path_buf()));
        }
        entries.sort_by(|a, b| (a.subset, &a.frame_id).cmp(&(b.subset, &b.frame_id)));
        let manifest = SubmissionManifest {
            submission_id: submission_id.into(),
            entries,
        };
        manifest.check_unique_ids()?;
        Ok(manifest)
    }

    /// Loads a manifest file. Given a directory, loads the `manifest.toml`
    /// inside it when present, otherwise discovers frames by convention.
    pub fn load_or_discover(path: &Path, gt_root: Option<&Path>) -> Result<Self, ManifestError> {
        if path.is_dir() {
            let inline = path.join("manifest.toml");
            if inline.is_file() && gt_root.is_none() {
                return Self::load(&inline);
            }
            let id = path
                .file_name()
                .and_then(|n| n.to_str())
                .unwrap_or("submission")
                .to_string();
            Self::discover(path, id, gt_root)
        } else {
            Self::load(path)
        }
    }

    pub fn entries_for(&self, subset: SubsetKind) -> impl Iterator<Item = &ManifestEntry> {
        self.entries.iter().filter(move |e| e.subset == subset)
    }

    fn check_unique_ids(&self) -> Result<(), ManifestError> {
        let mut seen = BTreeSet::new();
        for entry in &self.entries {
            if !seen.insert(&entry.frame_id) {
                return Err(ManifestError::DuplicateFrameId(entry.frame_id.clone()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip_preserves_entries() {
        let dir = tempfile::tempdir().unwrap();
        let manifest = SubmissionManifest {
            submission_id: "demo".into(),
            entries: vec![ManifestEntry {
                frame_id: "acdc_00000".into(),
                subset: SubsetKind::Acdc,
                pred: dir.path().join("acdc/acdc_00000_pred.png"),
                conf: dir.path().join("acdc/acdc_00000_conf.png"),
                gt: dir.path().join("acdc/acdc_00000_gt.png"),
            }],
        };
        let path = dir.path().join("manifest.toml");
        manifest.save(&path).unwrap();
        let loaded = SubmissionManifest::load(&path).unwrap();
        assert_eq!(loaded, manifest);
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("manifest.toml");
        fs::write(
            &path,
            r#"
submission_id = "dup"

[[frames]]
id = "a"
subset = "acdc"
pred = "p.png"
conf = "c.png"
gt = "g.png"

[[frames]]
id = "a"
subset = "smiyc"
pred = "p2.png"
conf = "c2.png"
gt = "g2.png"
"#,
        )
        .unwrap();
        let err = SubmissionManifest::load(&path).unwrap_err();
        assert!(matches!(err, ManifestError::DuplicateFrameId(id) if id == "a"));
    }

    #[test]
    fn discovery_finds_convention_triples() {
        let dir = tempfile::tempdir().unwrap();
        let acdc = dir.path().join("acdc");
        fs::create_dir_all(&acdc).unwrap();
        for name in [
            "f1_pred.png",
            "f1_conf.png",
            "f1_gt.png",
            "f0_pred.png",
            "f0_conf.png",
            "f0_gt.png",
            "unrelated.txt",
        ] {
            fs::write(acdc.join(name), b"x").unwrap();
        }
        let manifest = SubmissionManifest::discover(dir.path(), "disc", None).unwrap();
        let ids: Vec<_> = manifest.entries.iter().map(|e| e.frame_id.as_str()).collect();
        assert_eq!(ids, vec!["f0", "f1"]);
        assert!(manifest.entries[0].gt.ends_with("acdc/f0_gt.png"));
    }

    #[test]
    fn discovery_of_empty_root_fails() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            SubmissionManifest::discover(dir.path(), "x", None),
            Err(ManifestError::Empty(_))
        ));
    }
}
