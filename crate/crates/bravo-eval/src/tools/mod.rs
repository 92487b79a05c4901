//! Submission-side utilities: posterior decoding, ensemble averaging,
//! confidence renormalization, and the synthetic fixture generator.

pub mod ensemble;
pub mod fixture;
pub mod probmap;
pub mod renorm;

use std::path::PathBuf;

use thiserror::Error;

pub use ensemble::{argmax_decode, ensemble_mean, softmax};
pub use fixture::{generate_frame, synth_fixture, CalibrationModel, FixtureSpec};
pub use probmap::{read_probmap, write_probmap, ProbabilityMap};
pub use renorm::{renormalize_confidence, renormalize_level, renormalize_map};

#[derive(Debug, Error)]
pub enum ToolError {
    #[error("logit at pixel {pixel}, class {class} is not finite")]
    NonFiniteInput { pixel: usize, class: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("confidence {0} is outside [0, 1]")]
    OutOfRange(f64),
    #[error("pixel {pixel}: class probabilities sum to {sum}, not 1")]
    OffSimplex { pixel: usize, sum: f64 },
    #[error("ensemble needs at least one member")]
    EmptyEnsemble,
    #[error("invalid fixture spec: {0}")]
    InvalidSpec(String),
    #[error("{path}: not a probability-map container: {detail}")]
    BadContainer { path: PathBuf, detail: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Png(#[from] crate::pngio::PngError),
    #[error(transparent)]
    Map(#[from] crate::core::MapError),
    #[error(transparent)]
    Manifest(#[from] crate::core::ManifestError),
}
