//! Dysfluent vs fluent speech segment classification.
//!
//! The pipeline mirrors a classic small-vocabulary speech setup: WAV
//! ingestion and segmentation ([`audio`]), an MFCC front-end of
//! pre-emphasis, framing, Hamming windowing, FFT power spectrum, Mel
//! filterbank, log compression, and DCT ([`mfcc`]), per-segment
//! aggregation into fixed-length vectors ([`features`]), and two
//! classifiers — k-nearest-neighbors ([`knn`]) and a soft-margin SVM
//! trained by sequential minimal optimization ([`svm`]).
//!
//! Around that core sit a deterministic synthetic corpus generator and
//! dataset/manifest plumbing ([`corpus`]), the repeated stratified
//! split/train/test protocol with its report formats ([`eval`]), plain
//! text model serialization ([`model_io`]), and a command-line driver
//! ([`cli`]) exposing everything as `extract`, `synth`, `train`,
//! `classify`, and `evaluate` subcommands.
//!
//! Everything that draws randomness takes an explicit seed, so every
//! artifact — features, models, corpora, reports — is reproducible
//! byte for byte.

pub mod audio;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod features;
pub mod knn;
pub mod mfcc;
pub mod model_io;
pub mod svm;

pub use error::{Error, Result};
