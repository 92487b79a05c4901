//! Piecewise-linear confidence renormalization.
//!
//! Calibrated scores that track an in-distribution false-positive rate put
//! nearly all useful resolution below 0.05, which quantization to 16 bits
//! would crush. The map stretches `[0, 0.05]` onto `[0, 0.8]` and compresses
//! `[0.05, 1]` onto `[0.8, 1]`; it is continuous, monotone, and hits the
//! endpoints and the breakpoint exactly.

use crate::core::{ConfidenceMap, MAX_CONFIDENCE};

use super::ToolError;

const BREAK_IN: f64 = 0.05;
const BREAK_OUT: f64 = 0.8;

/// Applies the piecewise-linear map to a real score in `[0, 1]`.
pub fn renormalize_confidence(score: f64) -> Result<f64, ToolError> {
    if !score.is_finite() || !(0.0..=1.0).contains(&score) {
        return Err(ToolError::OutOfRange(score));
    }
    if score <= BREAK_IN {
        // 16 = 0.8 / 0.05; the exact binary ratio keeps the breakpoint exact.
        Ok(16.0 * score)
    } else {
        Ok(BREAK_OUT + (1.0 - BREAK_OUT) * (score - BREAK_IN) / (1.0 - BREAK_IN))
    }
}

/// Renormalizes one quantized level, rounding half away from zero.
pub fn renormalize_level(level: u16) -> u16 {
    let score = level as f64 / MAX_CONFIDENCE as f64;
    let mapped = renormalize_confidence(score).expect("quantized levels are in range");
    (mapped * MAX_CONFIDENCE as f64).round() as u16
}

/// Renormalizes a whole confidence map.
pub fn renormalize_map(map: &ConfidenceMap) -> ConfidenceMap {
    let values = map.values().iter().map(|&v| renormalize_level(v)).collect();
    ConfidenceMap::new(map.width(), map.height(), values).expect("dimensions preserved")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchor_points_are_exact() {
        assert_eq!(renormalize_confidence(0.0).unwrap(), 0.0);
        assert_eq!(renormalize_confidence(0.05).unwrap(), 0.8);
        assert_eq!(renormalize_confidence(1.0).unwrap(), 1.0);
    }

    #[test]
    fn first_segment_midpoint() {
        assert_eq!(renormalize_confidence(0.025).unwrap(), 0.4);
    }

    #[test]
    fn out_of_range_is_rejected() {
        assert!(matches!(
            renormalize_confidence(-0.01),
            Err(ToolError::OutOfRange(_))
        ));
        assert!(matches!(
            renormalize_confidence(1.01),
            Err(ToolError::OutOfRange(_))
        ));
        assert!(matches!(
            renormalize_confidence(f64::NAN),
            Err(ToolError::OutOfRange(_))
        ));
    }

    #[test]
    fn monotone_continuous_single_breakpoint() {
        let mut prev = -1.0;
        let mut max_step = 0.0f64;
        for i in 0..=10_000 {
            let s = i as f64 / 10_000.0;
            let v = renormalize_confidence(s).unwrap();
            assert!(v >= prev, "not monotone at {s}");
            if prev >= 0.0 {
                max_step = max_step.max(v - prev);
            }
            prev = v;
        }
        // Steepest slope is 16, so steps never exceed 16 * ds.
        assert!(max_step <= 16.0 / 10_000.0 + 1e-12);

        // Slopes on each side of the breakpoint.
        let left = (renormalize_confidence(0.05).unwrap()
            - renormalize_confidence(0.04).unwrap())
            / 0.01;
        let right = (renormalize_confidence(0.06).unwrap()
            - renormalize_confidence(0.05).unwrap())
            / 0.01;
        assert!((left - 16.0).abs() < 1e-9);
        assert!((right - 0.2 / 0.95).abs() < 1e-9);
    }

    #[test]
    fn quantized_breakpoint_level() {
        // round(0.05 * 65535) = 3277 maps to approximately 0.8 * 65535.
        assert_eq!(renormalize_level(3277), 52428);
        assert_eq!(renormalize_level(0), 0);
        assert_eq!(renormalize_level(65535), 65535);
    }

    #[test]
    fn map_application_preserves_geometry() {
        let map = ConfidenceMap::new(2, 1, vec![3277, 0]).unwrap();
        let out = renormalize_map(&map);
        assert_eq!(out.dimensions(), (2, 1));
        assert_eq!(out.values(), &[52428, 0]);
    }
}
