//! Semi-supervised stance classification for social-media text.
//!
//! Two classifiers with different contextual views (a convolutional one for
//! local context, a bidirectional-LSTM one for global context) are trained
//! jointly: alternating supervised epochs on a small labeled set with
//! semi-supervised epochs in which each classifier is supervised by majority
//! votes over the *other* classifier's cached predictions for the tweet
//! author's followees. A synthetic-data generator produces homophilous
//! follow graphs and class-conditional token streams so the whole procedure
//! can be exercised and measured at desk scale.
//!
//! The crate is organized around the pipeline stages:
//!
//! - [`corpus`]: tweet cleaning, vocabulary construction, encoding, dataset I/O
//! - [`graph`]: the directed follow network
//! - [`models`]: classifier parameters, forward passes, gradients, checkpoints
//! - [`train`]: losses, pseudo-labeling, batch planning, the training modes
//! - [`synth`]: synthetic benchmark generation
//! - [`eval`]: macro-F1, experiment grids, report assembly
//! - [`config`]: experiment configuration parsing and validation

pub mod config;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod graph;
pub mod models;
pub mod nn;
pub mod seed;
pub mod synth;
pub mod train;

// pub use config::ExperimentConfig;
pub use corpus::{CleanTweet, Dataset, EncodedTweet, RawTweet, Vocabulary};
pub use error::Error;
// pub use eval::EvalReport;
pub use graph::FollowGraph;
pub use models::{ClassifierKind, ClassifierParams, StanceDistribution};
// pub use synth::SynthConfig;
// pub use train::TrainState;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
