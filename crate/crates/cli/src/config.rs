//! Run configuration: one TOML file plus `key=value` overrides.
//!
//! ```toml
//! seed = 7
//!
//! [paths]
//! embeddings = "glove.840B.300d.txt"
//! sst_train = "sst/train"
//! sst_dev = "sst/dev"
//! parses = "14res/test.conllu"
//! gold = "14res/test.txt"
//! checkpoint = "out/model.bin"
//! curve = "out/curve.tsv"
//! predictions = "out/predictions.jsonl"
//! report = "out/report"
//!
//! [model]
//! embed_dim = 300
//! hidden_dim = 150
//! candidate_activation = "tanh"
//!
//! [train]
//! epochs = 10
//!
//! [extract]
//! methods = ["HN", "SS", "UNION"]
//! ```
//!
//! Relative paths are resolved against the directory of the config file.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use taste::dtlstm::{CandidateActivation, TrainConfig};
use taste::extraction::{ExtractOptions, Method, VerbRules};
use toml::Value;

use crate::error::CliError;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub seed: u64,
    #[serde(default)]
    pub paths: Paths,
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default)]
    pub train: TrainSection,
    #[serde(default)]
    pub extract: ExtractSection,
    #[serde(default)]
    pub eval: EvalSection,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Paths {
    pub embeddings: Option<PathBuf>,
    /// SST split: a directory holding one `*.toks` file, or a file stem.
    pub sst_train: Option<PathBuf>,
    pub sst_dev: Option<PathBuf>,
    pub parses: Option<PathBuf>,
    pub gold: Option<PathBuf>,
    pub checkpoint: Option<PathBuf>,
    pub curve: Option<PathBuf>,
    pub predictions: Option<PathBuf>,
    /// Report prefix; `.txt` and `.jsonl` are appended.
    pub report: Option<PathBuf>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSection {
    pub embed_dim: usize,
    pub hidden_dim: usize,
    pub candidate_activation: CandidateActivation,
}

impl Default for ModelSection {
    fn default() -> Self {
        ModelSection { embed_dim: 300, hidden_dim: 150, candidate_activation: CandidateActivation::Tanh }
    }
}

/// Training settings; the seed lives at the top level.
#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainSection {
    pub epochs: usize,
    pub lr: f64,
    pub eps: f64,
    pub batch_size: usize,
    pub weight_decay: f64,
    pub dropout: f64,
    pub supervise_interior: bool,
    pub shuffle: bool,
}

impl Default for TrainSection {
    fn default() -> Self {
        let d = TrainConfig::default();
        TrainSection {
            epochs: d.epochs,
            lr: d.lr,
            eps: d.eps,
            batch_size: d.batch_size,
            weight_decay: d.weight_decay,
            dropout: d.dropout,
            supervise_interior: d.supervise_interior,
            shuffle: d.shuffle,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExtractSection {
    pub methods: Vec<String>,
    pub exclude_target: bool,
    pub aux_by_deprel: bool,
    pub node_log_probs: bool,
}

impl Default for ExtractSection {
    fn default() -> Self {
        ExtractSection {
            methods: Method::ALL.iter().map(|m| m.to_string()).collect(),
            exclude_target: true,
            aux_by_deprel: false,
            node_log_probs: false,
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalSection {
    /// Name printed in the report; defaults to the gold file stem.
    pub dataset: Option<String>,
}

impl Config {
    /// Reads `path` (if any), applies `overrides` in order, and resolves
    /// relative paths against the config file's directory.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Config, CliError> {
        let mut root = match path {
            Some(p) => {
                let text = fs::read_to_string(p)
                    .map_err(|e| CliError::Config(format!("cannot read config {}: {}", p.display(), e)))?;
                text.parse::<toml::Table>().map_err(|e| CliError::Config(format!("{}: {}", p.display(), e)))?
            }
            None => toml::Table::new(),
        };
        for o in overrides {
            apply_override(&mut root, o)?;
        }
        let mut cfg: Config =
            Value::Table(root).try_into().map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
        let base = path.and_then(Path::parent).map(Path::to_path_buf).unwrap_or_default();
        cfg.paths.resolve(&base);
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        self.methods()?;
        if self.model.embed_dim == 0 || self.model.hidden_dim == 0 {
            return Err(CliError::Config("model dimensions must be positive".to_owned()));
        }
        if !(0.0..1.0).contains(&self.train.dropout) {
            return Err(CliError::Config(format!("train.dropout {} outside [0, 1)", self.train.dropout)));
        }
        if self.train.lr <= 0.0 || self.train.batch_size == 0 {
            return Err(CliError::Config("train.lr and train.batch_size must be positive".to_owned()));
        }
        Ok(())
    }

    pub fn methods(&self) -> Result<Vec<Method>, CliError> {
        if self.extract.methods.is_empty() {
            return Err(CliError::Config("extract.methods is empty".to_owned()));
        }
        self.extract
            .methods
            .iter()
            .map(|m| m.parse().map_err(|e: taste::extraction::ParseMethodError| CliError::Config(e.to_string())))
            .collect()
    }

    pub fn train_config(&self) -> TrainConfig {
        let t = &self.train;
        TrainConfig {
            epochs: t.epochs,
            lr: t.lr,
            eps: t.eps,
            batch_size: t.batch_size,
            weight_decay: t.weight_decay,
            dropout: t.dropout,
            supervise_interior: t.supervise_interior,
            shuffle: t.shuffle,
            seed: self.seed,
        }
    }

    pub fn extract_options(&self) -> ExtractOptions {
        ExtractOptions {
            verbs: VerbRules { aux_by_deprel: self.extract.aux_by_deprel },
            exclude_target: self.extract.exclude_target,
        }
    }
}

impl Paths {
    fn resolve(&mut self, base: &Path) {
        for p in [
            &mut self.embeddings,
            &mut self.sst_train,
            &mut self.sst_dev,
            &mut self.parses,
            &mut self.gold,
            &mut self.checkpoint,
            &mut self.curve,
            &mut self.predictions,
            &mut self.report,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
    }
}

/// A path that must be set and must exist.
pub fn input(path: &Option<PathBuf>, key: &str) -> Result<PathBuf, CliError> {
    let p = path.as_ref().ok_or_else(|| CliError::Config(format!("paths.{} is not set", key)))?;
    if !p.exists() {
        return Err(CliError::Config(format!("paths.{} does not exist: {}", key, p.display())));
    }
    Ok(p.clone())
}

/// A path that must be set; its parent directory is created.
pub fn output(path: &Option<PathBuf>, key: &str) -> Result<PathBuf, CliError> {
    let p = path.as_ref().ok_or_else(|| CliError::Config(format!("paths.{} is not set", key)))?;
    if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(parent)
            .map_err(|e| CliError::Config(format!("cannot create {} for paths.{}: {}", parent.display(), key, e)))?;
    }
    Ok(p.clone())
}

/// Sets a dotted key (`train.epochs=3`). The value is read as TOML and
/// falls back to a plain string.
fn apply_override(root: &mut toml::Table, assignment: &str) -> Result<(), CliError> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("override '{}' is not key=value", assignment)))?;
    let key = key.trim();
    let raw = raw.trim();
    let value = format!("v = {}", raw)
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(raw.to_owned()));

    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(CliError::Config(format!("invalid override key '{}'", key)));
    }
    let (last, sections) = parts.split_last().expect("split yields at least one part");
    let mut table = root;
    for s in sections {
        let entry = table.entry(s.to_string()).or_insert_with(|| Value::Table(toml::Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| CliError::Config(format!("override '{}': '{}' is not a table", key, s)))?;
    }
    table.insert(last.to_string(), value);
    Ok(())
}
