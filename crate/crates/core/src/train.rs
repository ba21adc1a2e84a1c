//! Training (placeholder).
pub struct TrainState;
