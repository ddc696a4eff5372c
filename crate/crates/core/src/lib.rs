//! Aspect sentiment triplet extraction over dependency parses.
//!
//! A child-sum dependency Tree-LSTM trained on sentence-level sentiment
//! assigns a three-class prediction to every node of a parse. Symbolic rules
//! then pick noun-chunk targets, hand each target the sentiment of its
//! nearest governing verb, and search the verb's subtree for the words that
//! carry that sentiment.
//!
//! The crate is split along the pipeline:
//!
//! * [`corpus`]: readers and writers for parses, SST, embeddings, gold
//!   triplets and prediction records.
//! * [`neural`]: dense linear algebra, initialization, Adagrad and a
//!   finite-difference gradient checker.
//! * [`dtlstm`]: the Tree-LSTM cell, tree forward/backward, training and
//!   checkpoints.
//! * [`extraction`]: noun chunks, target identification, sentiment
//!   assignment and opinion search.
//! * [`eval`]: GLEU, span matching and the evaluation report.

pub mod corpus;
pub mod dtlstm;
pub mod eval;
pub mod extraction;
pub mod neural;
mod sentiment;

pub use sentiment::{ParseSentimentError, Sentiment};
