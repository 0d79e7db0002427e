//! Validation toolkit for Structure-from-Motion reconstructions.
//!
//! Parses estimated and ground-truth camera-pose files (COLMAP images.txt,
//! Blender-style CSV exports, a canonical interchange format), aligns them
//! with a closed-form similarity transform, reports per-axis RMS errors,
//! injects ground-truth GPS into JPEG EXIF metadata, and generates
//! synthetic trajectory fixtures for end-to-end verification.

pub mod align;
pub mod fsutil;
pub mod geometry;
pub mod geotag;
pub mod metrics;
mod par;
pub mod rng;
pub mod synth;
pub mod trajectory;
