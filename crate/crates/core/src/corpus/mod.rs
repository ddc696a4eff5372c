//! Readers and writers for every on-disk format the pipeline touches.

mod conllu;
mod embeddings;
mod gold;
mod predictions;
mod sst;
mod tree;

pub use conllu::{read_conllu, read_conllu_lenient, write_conllu, write_tree, ConlluReader};
pub use embeddings::{load_embeddings, load_embeddings_filtered, EmbeddingTable};
pub use gold::{parse_triplet_gold, read_triplet_gold, to_json_line, GoldRecord, GoldTriplet};
pub use predictions::{read_predictions, write_prediction, PredictedTriplet, PredictionRecord};
pub use sst::{read_sst, read_sst_split, SstExample};
pub use tree::{DepTree, Span, Token, TreeError};

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("line {line}: {msg}")]
    Range { line: usize, msg: String },
    #[error("sentence {sentence} (line {line}): {source}")]
    Tree {
        sentence: usize,
        line: usize,
        #[source]
        source: TreeError,
    },
    #[error("misaligned input: {0}")]
    Alignment(String),
    #[error("{0}")]
    Missing(String),
}
