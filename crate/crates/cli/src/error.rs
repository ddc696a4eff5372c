use taste::corpus::CorpusError;
use taste::dtlstm::ModelError;
use taste::eval::EvalError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("model error: {0}")]
    Model(#[from] ModelError),
    #[error("alignment error: {0}")]
    Alignment(String),
    #[error(transparent)]
    Corpus(CorpusError),
    #[error(transparent)]
    Eval(EvalError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 0 success, 1 other, 2 config, 3 model, 4 data alignment.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Model(_) => 3,
            CliError::Alignment(_) => 4,
            CliError::Corpus(_) | CliError::Eval(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        match e {
            CorpusError::Alignment(msg) => CliError::Alignment(msg),
            other => CliError::Corpus(other),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Alignment { .. } => CliError::Alignment(e.to_string()),
            other => CliError::Eval(other),
        }
    }
}
