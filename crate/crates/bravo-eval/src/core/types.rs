//! Per-pixel map types shared by the whole pipeline.
//!
//! All three maps are flat row-major buffers with explicit dimensions.
//! Construction checks only the length contract; value-range rules are
//! enforced by [`crate::core::validate::validate_pair`] so that decoded
//! third-party files can be inspected instead of rejected at load time.

use thiserror::Error;

/// Number of evaluation classes (the Cityscapes train set).
pub const NUM_CLASSES: usize = 19;

/// Highest legal class id in a prediction or ground-truth map.
pub const MAX_CLASS_ID: u8 = (NUM_CLASSES - 1) as u8;

/// Ground-truth code for a pixel obscured by an out-of-distribution object.
pub const OOD_LABEL: u8 = 254;

/// Ground-truth code for a pixel excluded from all evaluation.
pub const VOID_LABEL: u8 = 255;

/// Number of discrete confidence levels in a 16-bit confidence map.
pub const CONFIDENCE_LEVELS: usize = 1 << 16;

/// Highest confidence level.
pub const MAX_CONFIDENCE: u16 = u16::MAX;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MapError {
    #[error("buffer holds {len} samples but {width}x{height} needs {expected}")]
    LengthMismatch {
        width: u32,
        height: u32,
        len: usize,
        expected: usize,
    },
    #[error("value {value} at index {index} does not fit an 8-bit sample")]
    ValueOutOfRange { index: usize, value: u32 },
}

fn check_len(width: u32, height: u32, len: usize) -> Result<(), MapError> {
    let expected = width as usize * height as usize;
    if len != expected {
        return Err(MapError::LengthMismatch {
            width,
            height,
            len,
            expected,
        });
    }
    Ok(())
}

/// Per-pixel predicted class ids, stored as raw 8-bit samples.
///
/// A well-formed submission keeps every label in `0..=MAX_CLASS_ID`; decoded
/// files may violate that until validated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassMap {
    width: u32,
    height: u32,
    labels: Vec<u8>,
}

impl ClassMap {
    pub fn new(width: u32, height: u32, labels: Vec<u8>) -> Result<Self, MapError> {
        check_len(width, height, labels.len())?;
        Ok(Self {
            width,
            height,
            labels,
        })
    }

    /// Builds a map from wide integers, rejecting anything an 8-bit PNG
    /// sample cannot carry.
    pub fn from_values(width: u32, height: u32, values: &[u32]) -> Result<Self, MapError> {
        check_len(width, height, values.len())?;
        let mut labels = Vec::with_capacity(values.len());
        for (index, &value) in values.iter().enumerate() {
            if value > u8::MAX as u32 {
                return Err(MapError::ValueOutOfRange { index, value });
            }
            labels.push(value as u8);
        }
        Ok(Self {
            width,
            height,
            labels,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn dimensions(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }
}

/// Per-pixel quantized confidence. A raw level `v` stands for the real
/// confidence `v / 65535`, comparable across every frame of a subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfidenceMap {
    width: u32,
    height: u32,
    values: Vec<u16>,
}

impl ConfidenceMap {
    pub fn new(width: u32, height: u32, values: Vec<u16>) -> Result<Self, MapError> {
        check_len(width, height, values.len())?;
        Ok(Self {
            width,
            height,
            values,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn dimensions(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn values(&self) -> &[u16] {
        &self.values
    }
}

/// Reference labels with validity semantics: `0..=18` is an evaluable class,
/// [`OOD_LABEL`] marks a pixel covered by an unknown object, [`VOID_LABEL`]
/// excludes the pixel from every metric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruthFrame {
    width: u32,
    height: u32,
    labels: Vec<u8>,
}

impl GroundTruthFrame {
    pub fn new(width: u32, height: u32, labels: Vec<u8>) -> Result<Self, MapError> {
        check_len(width, height, labels.len())?;
        Ok(Self {
            width,
            height,
            labels,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn dimensions(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// True if at least one pixel is not void.
    pub fn has_evaluable_pixels(&self) -> bool {
        self.labels.iter().any(|&l| l != VOID_LABEL)
    }
}

/// Converts a raw 16-bit confidence level to its real value in `[0, 1]`.
pub fn confidence_to_ratio(level: u16) -> f64 {
    level as f64 / MAX_CONFIDENCE as f64
}

/// Quantizes a real confidence in `[0, 1]` to a 16-bit level, rounding
/// half away from zero.
pub fn quantize_confidence(value: f64) -> u16 {
    debug_assert!((0.0..=1.0).contains(&value));
    (value * MAX_CONFIDENCE as f64).round() as u16
}
