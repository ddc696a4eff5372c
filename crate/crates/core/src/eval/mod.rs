//! Extraction metrics: GLEU, span matching and the evaluation report.

mod gleu;
mod matching;
mod report;
mod scoring;

pub use gleu::{gleu, GleuScore};
pub use matching::{greedy_assign, span_match};
pub use report::{evaluate, EvalReport};
pub use scoring::{
    align, evaluate_sentiment, evaluate_targets, evaluate_triplets, full_sentence_gleu, Aligned, AlignedSentence,
    GleuSummary, GoldTarget, MethodScores, PredTarget, Prf, SentimentScore, TargetScores,
};

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    /// Predictions and gold disagree; `sentence` is the 0-based position of
    /// the first offending sentence.
    #[error("sentence {sentence}: {msg}")]
    Alignment { sentence: usize, msg: String },
    #[error("report invariant violated: {0}")]
    Invariant(String),
}
