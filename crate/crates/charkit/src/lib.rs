//! Character-recognition toolkit.
//!
//! Three pieces work together:
//!
//! - [`mlp`] / [`train`]: a dense feed-forward network with online
//!   backpropagation, exposing the per-layer delta errors that the weight
//!   initializer consumes.
//! - [`bayes`]: weight initialization by iterated Bayesian fusion of a prior
//!   estimate with uniform-random measurement weights, made cheap by a
//!   two-scalar covariance class that is closed under addition and inversion.
//! - [`fuzzy`] / [`glyph`] / [`data`]: a Mamdani-style fuzzy scorer that
//!   locates cut columns in touching-character bitmaps, plus the dataset
//!   plumbing (IDX and portable-bitmap decoding, glyph encoding, synthetic
//!   touching-pair generation) that feeds both halves.
//!
//! The `book/` directory of the repository walks through each concept with
//! runnable snippets; the `charkit` binary drives the benchmark experiments.

pub mod bayes;
pub mod data;
pub mod error;
pub mod fuzzy;
pub mod glyph;
pub mod mlp;
pub mod train;

pub use error::{Error, Result};
pub use glyph::GlyphImage;
pub use mlp::{Activation, Gradient, LayerDeltas, Mlp};
pub use train::{train, TrainConfig, TrainReport, TrainingSet};
