//! Error-tracing laboratory for conditional text generation.
//!
//! The pipeline builds a synthetic template corpus, corrupts a small slice of
//! its training targets with entity-swap canaries, trains a small
//! encoder-decoder that learns to reproduce those corruptions, and then ranks
//! training examples by how strongly they explain the observed errors. Several
//! estimators are provided (random, BM25, embedding similarity, gradient
//! inner products across checkpoints, and contrastive fine-tuning influence
//! with optional classifier distillation), together with ranking metrics,
//! a removal-and-retrain harness, and hyperparameter sweep runners.

pub mod cli;
pub mod config;
pub mod corpus;
pub mod distill;
pub mod error;
pub mod eval;
pub mod model;
pub mod rundir;
pub mod tracing;

pub use error::{Error, Result};
