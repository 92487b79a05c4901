//! Reliability scoring for semantic-segmentation benchmarks.
//!
//! The crate evaluates pixel-wise class predictions together with their
//! quantized confidence maps against ground truth that distinguishes valid
//! classes, pixels invalidated by out-of-distribution objects, and void.
//! It computes semantic accuracy and calibration metrics, OOD-detection
//! metrics over exact 65 536-level score histograms, per-subset harmonic
//! summaries, and the harmonic-mean ranking index used for leaderboards,
//! plus the submission-side math (ensemble posterior averaging, confidence
//! renormalization) and cross-submission correlation analysis.
//!
//! Start with the runnable examples (`cargo run --example <name>`) or the
//! `bravo` binary for the end-to-end command surface.

pub mod aggregate;
pub mod analysis;
pub mod core;
pub mod engine;
pub mod metrics;
pub mod pngio;
pub mod report;
pub mod tools;
