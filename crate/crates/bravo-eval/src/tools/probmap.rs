//! Per-pixel class posteriors and their interchange container.
//!
//! Probabilities live in `f64` in memory so the simplex constraint holds to
//! 1e-9 after softmax or averaging. The on-disk container stores `f32`
//! samples: header magic `BPM1`, then width, height, and class count as
//! little-endian `u32`, then row-major pixels with the class probabilities
//! of each pixel contiguous, each a little-endian `f32`. Readers do not
//! renormalize, so write-then-read is the identity on `f32` data.

use std::fs;
use std::path::Path;

use super::ToolError;

const MAGIC: [u8; 4] = *b"BPM1";

/// Per-pixel discrete distribution over the class set.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityMap {
    width: u32,
    height: u32,
    classes: usize,
    probs: Vec<f64>,
}

impl ProbabilityMap {
    pub fn new(
        width: u32,
        height: u32,
        classes: usize,
        probs: Vec<f64>,
    ) -> Result<Self, ToolError> {
        let expected = width as usize * height as usize * classes;
        if classes == 0 || probs.len() != expected {
            return Err(ToolError::ShapeMismatch(format!(
                "{}x{}x{classes} needs {expected} values, got {}",
                width,
                height,
                probs.len()
            )));
        }
        Ok(Self {
            width,
            height,
            classes,
            probs,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn pixel_count(&self) -> usize {
        self.width as usize * self.height as usize
    }

    pub fn values(&self) -> &[f64] {
        &self.probs
    }

    pub fn pixel(&self, index: usize) -> &[f64] {
        &self.probs[index * self.classes..(index + 1) * self.classes]
    }

    /// Checks that every pixel is a distribution: non-negative values
    /// summing to 1 within `tol`. Freshly computed maps satisfy 1e-9;
    /// containers round-trip through `f32`, so give those a looser gate.
    pub fn validate_simplex(&self, tol: f64) -> Result<(), ToolError> {
        for pixel in 0..self.pixel_count() {
            let mut sum = 0.0f64;
            for &p in self.pixel(pixel) {
                if !p.is_finite() || p < -tol {
                    return Err(ToolError::OffSimplex { pixel, sum: p });
                }
                sum += p;
            }
            if (sum - 1.0).abs() > tol {
                return Err(ToolError::OffSimplex { pixel, sum });
            }
        }
        Ok(())
    }
}

/// Writes the `f32` container.
pub fn write_probmap(map: &ProbabilityMap, path: &Path) -> Result<(), ToolError> {
    let mut bytes = Vec::with_capacity(16 + map.values().len() * 4);
    bytes.extend_from_slice(&MAGIC);
    bytes.extend_from_slice(&map.width().to_le_bytes());
    bytes.extend_from_slice(&map.height().to_le_bytes());
    bytes.extend_from_slice(&(map.classes() as u32).to_le_bytes());
    for &value in map.values() {
        bytes.extend_from_slice(&(value as f32).to_le_bytes());
    }
    fs::write(path, bytes).map_err(|source| ToolError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads the `f32` container back into an `f64` map, checking geometry and
/// sample finiteness but never rescaling values.
pub fn read_probmap(path: &Path) -> Result<ProbabilityMap, ToolError> {
    let bytes = fs::read(path).map_err(|source| ToolError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let bad = |detail: &str| ToolError::BadContainer {
        path: path.to_path_buf(),
        detail: detail.to_string(),
    };
    if bytes.len() < 16 {
        return Err(bad("shorter than the 16-byte header"));
    }
    if bytes[..4] != MAGIC {
        return Err(bad("wrong magic"));
    }
    let word = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap());
    let width = word(4);
    let height = word(8);
    let classes = word(12) as usize;
    let expected = width as usize * height as usize * classes;
    if bytes.len() != 16 + expected * 4 {
        return Err(bad(&format!(
            "payload is {} bytes, header promises {}",
            bytes.len() - 16,
            expected * 4
        )));
    }
    let mut probs = Vec::with_capacity(expected);
    for chunk in bytes[16..].chunks_exact(4) {
        let v = f32::from_le_bytes(chunk.try_into().unwrap());
        if !v.is_finite() {
            return Err(bad("non-finite sample"));
        }
        probs.push(v as f64);
    }
    ProbabilityMap::new(width, height, classes, probs)
}
