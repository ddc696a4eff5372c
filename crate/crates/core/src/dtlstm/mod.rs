//! Child-sum dependency Tree-LSTM with a per-node three-class classifier.

mod cell;
mod checkpoint;
mod forward;
mod params;
mod train;

pub use cell::{node_forward, NodeState};
pub use checkpoint::{load_checkpoint, read_checkpoint, save_checkpoint, write_checkpoint, Checkpoint, MAGIC};
pub use forward::{
    forward_with_inputs, loss_and_grads, tree_forward, LossAndGrads, NodePrediction, NodeTargets, TreeOutput,
};
pub use params::{CandidateActivation, Gate, Grads, ModelParams, ModelShape, NUM_CLASSES};
pub use train::{root_accuracy, train, EpochStats, TrainConfig, TrainReport};

use crate::neural::NeuralError;

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("node {node}: {source}")]
    Node {
        node: usize,
        #[source]
        source: Box<ModelError>,
    },
    #[error(transparent)]
    Numeric(#[from] NeuralError),
    #[error("non-finite loss at training example {example}")]
    NonFiniteLoss { example: usize },
    #[error("checkpoint format error: {0}")]
    Format(String),
    #[error("corrupt checkpoint: {0}")]
    Corruption(String),
    #[error("{0}")]
    Data(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl ModelError {
    pub(crate) fn at_node(self, node: usize) -> ModelError {
        match self {
            e @ ModelError::Node { .. } => e,
            e => ModelError::Node { node, source: Box::new(e) },
        }
    }
}
