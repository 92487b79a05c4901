//! The six benchmark subsets and which evaluation modes apply to each.

use std::fmt;

use serde::{Deserialize, Serialize};

/// One of the six evaluation splits. Semantic metrics run on every subset
/// except SMIYC; OOD metrics run only on SMIYC and SynObjs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubsetKind {
    Acdc,
    Smiyc,
    #[serde(rename = "synrain")]
    SynRain,
    #[serde(rename = "synobjs")]
    SynObjs,
    #[serde(rename = "synflare")]
    SynFlare,
    #[serde(rename = "outofcontext")]
    OutOfContext,
}

impl SubsetKind {
    /// Canonical iteration order used everywhere results are aggregated or
    /// rendered, so that output is independent of input order.
    pub const ALL: [SubsetKind; 6] = [
        SubsetKind::Acdc,
        SubsetKind::Smiyc,
        SubsetKind::SynRain,
        SubsetKind::SynObjs,
        SubsetKind::SynFlare,
        SubsetKind::OutOfContext,
    ];

    /// Subsets scored with the semantic metric family, in canonical order.
    pub fn semantic_subsets() -> impl Iterator<Item = SubsetKind> {
        Self::ALL.into_iter().filter(|s| s.semantic_eval())
    }

    /// Subsets scored with the OOD metric family, in canonical order.
    pub fn ood_subsets() -> impl Iterator<Item = SubsetKind> {
        Self::ALL.into_iter().filter(|s| s.ood_eval())
    }

    pub fn semantic_eval(self) -> bool {
        self != SubsetKind::Smiyc
    }

    pub fn ood_eval(self) -> bool {
        matches!(self, SubsetKind::Smiyc | SubsetKind::SynObjs)
    }

    /// Directory name used by the on-disk layout and the manifest format.
    pub fn dir_name(self) -> &'static str {
        match self {
            SubsetKind::Acdc => "acdc",
            SubsetKind::Smiyc => "smiyc",
            SubsetKind::SynRain => "synrain",
            SubsetKind::SynObjs => "synobjs",
            SubsetKind::SynFlare => "synflare",
            SubsetKind::OutOfContext => "outofcontext",
        }
    }

    pub fn from_name(name: &str) -> Option<SubsetKind> {
        let lower = name.to_ascii_lowercase();
        Self::ALL.into_iter().find(|s| s.dir_name() == lower)
    }
}

impl fmt::Display for SubsetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.dir_name())
    }
}
