//! Synthetic benchmark generation (placeholder).
pub struct SynthConfig;
