//! Target and opinion extraction on top of per-node sentiment predictions.

mod chunks;
mod search;
mod strip;
mod targets;
mod triplets;

pub use chunks::{chunk_for_head, is_chunk_head, noun_chunks};
pub use search::{recursive_search, SearchResult};
pub use strip::{strip_function_words, COPULAS, DETERMINERS};
pub use targets::{assign_sentiment, identify_targets, TargetCandidate, VerbRules};
pub use triplets::{extract_triplets, ExtractOptions, Method, ParseMethodError, Triplet};
