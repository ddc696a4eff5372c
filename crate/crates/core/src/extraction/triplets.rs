use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::chunks::noun_chunks;
use super::search::recursive_search;
use super::targets::{assign_sentiment, identify_targets, VerbRules};
use crate::corpus::{DepTree, PredictedTriplet, Span};
use crate::dtlstm::NodePrediction;
use crate::Sentiment;

/// Opinion search strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    /// Highest node: the single word most strongly carrying the sentiment.
    #[serde(rename = "HN")]
    Hn,
    /// Sentiment string: every word predicted with the target's sentiment.
    #[serde(rename = "SS")]
    Ss,
    /// Both of the above merged.
    #[serde(rename = "UNION")]
    Union,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Hn, Method::Ss, Method::Union];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Hn => "HN",
            Method::Ss => "SS",
            Method::Union => "UNION",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown method '{0}' (expected HN, SS or UNION)")]
pub struct ParseMethodError(pub String);

impl FromStr for Method {
    type Err = ParseMethodError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "HN" => Ok(Method::Hn),
            "SS" => Ok(Method::Ss),
            "UNION" | "HN+SS" | "HN&SS" => Ok(Method::Union),
            _ => Err(ParseMethodError(s.to_owned())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExtractOptions {
    pub verbs: VerbRules,
    /// Keep the target's own tokens out of the opinion search. In a verbless
    /// sentence only the head noun is kept out, since the search starts there.
    pub exclude_target: bool,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions { verbs: VerbRules::default(), exclude_target: true }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Triplet {
    pub method: Method,
    pub target: Span,
    pub head_noun: usize,
    pub parent_verb: Option<usize>,
    pub sentiment: Sentiment,
    /// Opinion token positions in sentence order; empty when nothing matched.
    pub opinion: Vec<usize>,
    /// For [`Method::Union`]: the HN and SS opinions it was merged from.
    pub alternatives: Vec<Vec<usize>>,
    pub hn_activation: Option<f64>,
}

impl Triplet {
    pub fn to_predicted(&self, tree: &DepTree) -> PredictedTriplet {
        let words = |idx: &[usize]| idx.iter().map(|&i| tree.token(i).form.clone()).collect::<Vec<_>>();
        let target: Vec<usize> = self.target.indices().collect();
        PredictedTriplet {
            method: self.method,
            target_tokens: words(&target),
            target,
            target_head: self.head_noun,
            parent: self.parent_verb,
            sentiment: self.sentiment,
            opinion_tokens: words(&self.opinion),
            opinion: self.opinion.clone(),
            alternatives: self.alternatives.clone(),
            hn_activation: self.hn_activation,
        }
    }
}

/// Full symbolic pipeline over one parsed sentence with per-node
/// predictions. Triplets come out per target in sentence order, and per
/// method in the order given.
pub fn extract_triplets(
    tree: &DepTree,
    preds: &[NodePrediction],
    methods: &[Method],
    opts: &ExtractOptions,
) -> Vec<Triplet> {
    assert_eq!(preds.len(), tree.len(), "one prediction per token");
    let chunks = noun_chunks(tree);
    let mut out = Vec::new();
    for cand in identify_targets(tree, &chunks, &opts.verbs) {
        let sentiment = assign_sentiment(&cand, preds);
        let exclusion = match (opts.exclude_target, cand.parent_verb) {
            (false, _) => None,
            (true, Some(_)) => Some(cand.chunk),
            (true, None) => Some(Span::new(cand.head_noun, cand.head_noun + 1)),
        };
        let found = recursive_search(tree, preds, cand.search_root(), sentiment, exclusion);
        if found.empty {
            log::debug!("empty search pool for target at {:?}", cand.chunk);
        }
        let hn: Vec<usize> = found.hn.into_iter().collect();
        for &method in methods {
            let (opinion, alternatives) = match method {
                Method::Hn => (hn.clone(), Vec::new()),
                Method::Ss => (found.ss.clone(), Vec::new()),
                Method::Union => {
                    let mut merged: Vec<usize> = hn.iter().chain(&found.ss).copied().collect();
                    merged.sort_unstable();
                    merged.dedup();
                    (merged, vec![hn.clone(), found.ss.clone()])
                }
            };
            out.push(Triplet {
                method,
                target: cand.chunk,
                head_noun: cand.head_noun,
                parent_verb: cand.parent_verb,
                sentiment,
                opinion,
                alternatives,
                hn_activation: found.hn_activation,
            });
        }
    }
    out
}
