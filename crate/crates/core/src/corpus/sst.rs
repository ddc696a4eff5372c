//! Stanford Sentiment Treebank in the `toks`/`parents`/`labels` layout.
//!
//! Three parallel files share a stem: `<stem>.toks` holds space-separated
//! tokens, `<stem>.parents` the 1-based head of every token (0 for the root)
//! and `<stem>.labels` the fine-grained sentence label 0..=4. A labels line
//! may instead carry one label per token, with `-1` or `#` for unlabeled
//! nodes; the root's label is then the sentence label.

use std::fs;
use std::path::{Path, PathBuf};

use super::tree::DepTree;
use super::CorpusError;
use crate::Sentiment;

#[derive(Clone, Debug, PartialEq)]
pub struct SstExample {
    pub tokens: Vec<String>,
    /// 1-based head per token, 0 for the root.
    pub parents: Vec<usize>,
    /// Sentence (root) label.
    pub label: Sentiment,
    /// Per-node labels when the corpus provides them.
    pub node_labels: Option<Vec<Option<Sentiment>>>,
}

impl SstExample {
    pub fn to_tree(&self) -> Result<DepTree, CorpusError> {
        let heads: Vec<Option<usize>> = self.parents.iter().map(|&p| p.checked_sub(1)).collect();
        DepTree::from_heads(&self.tokens, &heads).map_err(|source| CorpusError::Tree { sentence: 0, line: 0, source })
    }
}

/// Reads the single `*.toks` split found in `dir`.
pub fn read_sst(dir: impl AsRef<Path>) -> Result<Vec<SstExample>, CorpusError> {
    let dir = dir.as_ref();
    let mut stems: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "toks"))
        .map(|p| p.with_extension(""))
        .collect();
    stems.sort();
    match stems.as_slice() {
        [stem] => read_sst_split(stem),
        [] => Err(CorpusError::Missing(format!("no *.toks file in {}", dir.display()))),
        _ => Err(CorpusError::Missing(format!("several *.toks files in {}; pass the stem explicitly", dir.display()))),
    }
}

/// Reads `<stem>.toks`, `<stem>.parents` and `<stem>.labels`.
pub fn read_sst_split(stem: impl AsRef<Path>) -> Result<Vec<SstExample>, CorpusError> {
    let stem = stem.as_ref();
    let paths = ["toks", "parents", "labels"].map(|ext| stem.with_extension(ext));
    let [toks, parents, labels] = paths.clone().map(fs::read_to_string);
    let (toks, parents, labels) = (toks?, parents?, labels?);
    let toks: Vec<&str> = toks.lines().collect();
    let parents: Vec<&str> = parents.lines().collect();
    let labels: Vec<&str> = labels.lines().collect();

    if toks.len() != parents.len() || toks.len() != labels.len() {
        return Err(CorpusError::Alignment(format!(
            "{} ({} lines), {} ({} lines) and {} ({} lines) differ in length",
            paths[0].display(),
            toks.len(),
            paths[1].display(),
            parents.len(),
            paths[2].display(),
            labels.len()
        )));
    }

    toks.iter()
        .zip(&parents)
        .zip(&labels)
        .enumerate()
        .map(|(i, ((t, p), l))| parse_example(t, p, l).map_err(|e| e.at_line(i + 1, &paths)))
        .collect()
}

enum LineError {
    Alignment(String),
    Format(String),
}

impl LineError {
    fn at_line(self, line: usize, paths: &[PathBuf; 3]) -> CorpusError {
        match self {
            LineError::Alignment(msg) => CorpusError::Alignment(format!(
                "line {} of {} / {}: {}",
                line,
                paths[0].display(),
                paths[1].display(),
                msg
            )),
            LineError::Format(msg) => CorpusError::Format { line, msg },
        }
    }
}

fn parse_example(toks: &str, parents: &str, labels: &str) -> Result<SstExample, LineError> {
    let tokens: Vec<String> = toks.split_whitespace().map(str::to_owned).collect();
    let parents: Vec<usize> = parents
        .split_whitespace()
        .map(|p| p.parse().map_err(|_| LineError::Format(format!("invalid parent '{}'", p))))
        .collect::<Result<_, _>>()?;
    if tokens.len() != parents.len() {
        return Err(LineError::Alignment(format!("{} tokens but {} parents", tokens.len(), parents.len())));
    }
    if tokens.is_empty() {
        return Err(LineError::Format("empty sentence".to_owned()));
    }

    let fields: Vec<&str> = labels.split_whitespace().collect();
    let parse_label = |s: &str| -> Result<Option<Sentiment>, LineError> {
        if s == "#" || s == "-1" {
            return Ok(None);
        }
        s.parse::<u8>()
            .ok()
            .and_then(Sentiment::from_sst5)
            .map(Some)
            .ok_or_else(|| LineError::Format(format!("invalid label '{}'", s)))
    };

    let root =
        parents.iter().position(|&p| p == 0).ok_or_else(|| LineError::Format("no root in parents".to_owned()))?;
    let (label, node_labels) = match fields.as_slice() {
        [one] => (parse_label(one)?.ok_or_else(|| LineError::Format("sentence label missing".to_owned()))?, None),
        many if many.len() == tokens.len() => {
            let nodes: Vec<Option<Sentiment>> = many.iter().map(|s| parse_label(s)).collect::<Result<_, _>>()?;
            let root_label = nodes[root].ok_or_else(|| LineError::Format("root node unlabeled".to_owned()))?;
            (root_label, Some(nodes))
        }
        other => return Err(LineError::Alignment(format!("{} labels for {} tokens", other.len(), tokens.len()))),
    };

    let heads: Vec<Option<usize>> = parents.iter().map(|&p| p.checked_sub(1)).collect();
    DepTree::from_heads(&tokens, &heads).map_err(|e| LineError::Format(e.to_string()))?;

    Ok(SstExample { tokens, parents, label, node_labels })
}
