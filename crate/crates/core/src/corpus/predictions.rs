//! Line-delimited prediction records, one JSON object per sentence.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CorpusError;
use crate::extraction::Method;
use crate::Sentiment;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    /// 0-based position of the sentence in the input parse file.
    pub sentence: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sent_id: Option<String>,
    pub tokens: Vec<String>,
    pub triplets: Vec<PredictedTriplet>,
    /// Per-node log-probabilities (negative, neutral, positive).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_log_probs: Option<Vec<[f64; 3]>>,
    /// Set when the sentence could not be processed; `triplets` is then empty.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictedTriplet {
    pub method: Method,
    pub target: Vec<usize>,
    pub target_tokens: Vec<String>,
    pub target_head: usize,
    pub parent: Option<usize>,
    pub sentiment: Sentiment,
    pub opinion: Vec<usize>,
    pub opinion_tokens: Vec<String>,
    /// Constituent opinions of a merged prediction; any of them may match.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alternatives: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hn_activation: Option<f64>,
}

pub fn write_prediction<W: Write>(mut w: W, record: &PredictionRecord) -> std::io::Result<()> {
    serde_json::to_writer(&mut w, record)?;
    writeln!(w)
}

pub fn read_predictions(path: impl AsRef<Path>) -> Result<Vec<PredictionRecord>, CorpusError> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line).map_err(|e| CorpusError::Format { line: i + 1, msg: e.to_string() })?;
        out.push(rec);
    }
    Ok(out)
}
