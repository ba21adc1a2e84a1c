//! Evaluation (placeholder).
pub struct EvalReport;
