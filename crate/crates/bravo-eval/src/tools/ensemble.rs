//! Softmax decoding, ensemble posterior averaging, and argmax decoding into
//! the submission file pair.

use crate::core::{ClassMap, ConfidenceMap, MAX_CONFIDENCE};

use super::probmap::ProbabilityMap;
use super::ToolError;

/// Numerically stable per-pixel softmax over row-major logits with the
/// class values of each pixel contiguous.
pub fn softmax(
    width: u32,
    height: u32,
    classes: usize,
    logits: &[f64],
) -> Result<ProbabilityMap, ToolError> {
    let expected = width as usize * height as usize * classes;
    if classes == 0 || logits.len() != expected {
        return Err(ToolError::ShapeMismatch(format!(
            "{width}x{height}x{classes} needs {expected} logits, got {}",
            logits.len()
        )));
    }
    let mut probs = vec![0.0f64; logits.len()];
    for pixel in 0..width as usize * height as usize {
        let row = &logits[pixel * classes..(pixel + 1) * classes];
        let mut max = f64::NEG_INFINITY;
        for (class, &l) in row.iter().enumerate() {
            if !l.is_finite() {
                return Err(ToolError::NonFiniteInput { pixel, class });
            }
            max = max.max(l);
        }
        let out = &mut probs[pixel * classes..(pixel + 1) * classes];
        let mut sum = 0.0f64;
        for (o, &l) in out.iter_mut().zip(row) {
            *o = (l - max).exp();
            sum += *o;
        }
        for o in out.iter_mut() {
            *o /= sum;
        }
    }
    ProbabilityMap::new(width, height, classes, probs)
}

/// Mean posterior across ensemble members: per pixel and class, the
/// arithmetic average of the members' probabilities.
pub fn ensemble_mean(maps: &[ProbabilityMap]) -> Result<ProbabilityMap, ToolError> {
    let first = maps.first().ok_or(ToolError::EmptyEnsemble)?;
    for (i, map) in maps.iter().enumerate().skip(1) {
        if map.width() != first.width()
            || map.height() != first.height()
            || map.classes() != first.classes()
        {
            return Err(ToolError::ShapeMismatch(format!(
                "member {i} is {}x{}x{}, member 0 is {}x{}x{}",
                map.width(),
                map.height(),
                map.classes(),
                first.width(),
                first.height(),
                first.classes()
            )));
        }
    }
    let q = maps.len() as f64;
    let mut mean = vec![0.0f64; first.values().len()];
    for map in maps {
        for (m, &v) in mean.iter_mut().zip(map.values()) {
            *m += v;
        }
    }
    for m in mean.iter_mut() {
        *m /= q;
    }
    ProbabilityMap::new(first.width(), first.height(), first.classes(), mean)
}

/// Picks the highest-probability class per pixel (lowest index wins ties)
/// and quantizes that maximum as the 16-bit confidence.
pub fn argmax_decode(map: &ProbabilityMap) -> Result<(ClassMap, ConfidenceMap), ToolError> {
    if map.classes() > u8::MAX as usize + 1 {
        return Err(ToolError::ShapeMismatch(format!(
            "{} classes cannot decode into an 8-bit class map",
            map.classes()
        )));
    }
    let pixels = map.pixel_count();
    let mut labels = Vec::with_capacity(pixels);
    let mut conf = Vec::with_capacity(pixels);
    for pixel in 0..pixels {
        let row = map.pixel(pixel);
        let mut best = 0usize;
        let mut best_p = row[0];
        for (class, &p) in row.iter().enumerate().skip(1) {
            if p > best_p {
                best = class;
                best_p = p;
            }
        }
        labels.push(best as u8);
        conf.push((best_p.clamp(0.0, 1.0) * MAX_CONFIDENCE as f64).round() as u16);
    }
    Ok((
        ClassMap::new(map.width(), map.height(), labels)?,
        ConfidenceMap::new(map.width(), map.height(), conf)?,
    ))
}
