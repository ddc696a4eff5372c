//! Small dense numerics: everything the Tree-LSTM needs and nothing more.

mod gradcheck;
mod init;
mod linalg;
mod optim;

pub use gradcheck::{gradient_check, relative_error, GradCheckReport, Sampling};
pub use init::{glorot_init, glorot_init_with, seeded_rng};
pub use linalg::{argmax_high, axpy, dot, log_softmax, sigmoid, Matrix, Vector};
pub use optim::{Adagrad, Param, ParamId, ParamStore};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NeuralError {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("non-finite value: {0}")]
    NonFinite(String),
}
