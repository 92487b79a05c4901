//! Domain types, subset taxonomy, validation, and pixel-role assignment.

pub mod manifest;
pub mod roles;
pub mod subset;
pub mod types;
pub mod validate;

pub use manifest::{ManifestEntry, ManifestError, SubmissionManifest};
pub use roles::{pixel_roles, EvalMode, PixelRole, RoleMap};
pub use subset::SubsetKind;
pub use types::{
    confidence_to_ratio, quantize_confidence, ClassMap, ConfidenceMap, GroundTruthFrame, MapError,
    CONFIDENCE_LEVELS, MAX_CLASS_ID, MAX_CONFIDENCE, NUM_CLASSES, OOD_LABEL, VOID_LABEL,
};
pub use validate::{validate_pair, MapKind, ValidationReport, Violation};
