//! Minimal dense-tensor substrate for the classifiers.
//!
//! All learnable state lives in a flat [`ParamArena`] of `f64`s with named,
//! shaped views. Gradients, optimizer moments and finite-difference probes
//! are then plain vectors aligned with the arena, which keeps the optimizer,
//! checkpointing and gradient checking trivially consistent with the model.

pub mod arena;
pub mod ops;

pub use arena::{Gradients, ParamArena, TensorId};
