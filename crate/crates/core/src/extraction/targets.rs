use serde::{Deserialize, Serialize};

use crate::corpus::{DepTree, Span};
use crate::dtlstm::NodePrediction;
use crate::Sentiment;

/// How governing verbs are recognised.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerbRules {
    /// Also count tokens attached with an `aux`/`auxpass` relation as verbs,
    /// on top of the `VERB`/`AUX` part-of-speech tags.
    pub aux_by_deprel: bool,
}

impl VerbRules {
    pub fn is_verb(&self, tree: &DepTree, idx: usize) -> bool {
        let tok = tree.token(idx);
        if tok.upos == "VERB" || tok.upos == "AUX" {
            return true;
        }
        self.aux_by_deprel && matches!(tok.deprel.to_ascii_lowercase().as_str(), "aux" | "auxpass" | "aux:pass")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TargetCandidate {
    pub chunk: Span,
    pub head_noun: usize,
    /// Nearest governing verb; `None` only in verbless sentences.
    pub parent_verb: Option<usize>,
    pub sentiment: Option<Sentiment>,
}

impl TargetCandidate {
    /// Node whose subtree is searched for opinion words and whose prediction
    /// the target inherits.
    pub fn search_root(&self) -> usize {
        self.parent_verb.unwrap_or(self.head_noun)
    }
}

/// Binds chunks to their nearest governing verb.
///
/// A chunk becomes a target when it lies inside the yield of a verb; it is
/// attached to the nearest such verb on its head's ancestor path. In a
/// sentence without any verb every chunk is a target with no parent.
pub fn identify_targets(tree: &DepTree, chunks: &[Span], rules: &VerbRules) -> Vec<TargetCandidate> {
    let has_verb = (0..tree.len()).any(|i| rules.is_verb(tree, i));
    let mut out = Vec::new();
    for &chunk in chunks {
        let head_noun = tree.span_head(chunk);
        if !has_verb {
            out.push(TargetCandidate { chunk, head_noun, parent_verb: None, sentiment: None });
            continue;
        }
        let parent = tree
            .ancestors(head_noun)
            .into_iter()
            .find(|&a| rules.is_verb(tree, a) && chunk.indices().all(|t| tree.is_ancestor_or_self(a, t)));
        if let Some(p) = parent {
            out.push(TargetCandidate { chunk, head_noun, parent_verb: Some(p), sentiment: None });
        }
    }
    out
}

/// Label the target inherits: the prediction at its parent verb, or at its
/// own head noun when there is no verb.
pub fn assign_sentiment(candidate: &TargetCandidate, predictions: &[NodePrediction]) -> Sentiment {
    predictions[candidate.search_root()].label()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Token;

    fn tree(rows: &[(&str, &str, Option<usize>, &str)]) -> DepTree {
        DepTree::new(rows.iter().map(|&(f, p, h, d)| Token::new(f, p, h, d)).collect(), None).unwrap()
    }

    fn pred(neg: f64, neu: f64, pos: f64) -> NodePrediction {
        NodePrediction::from_logits(&[neg, neu, pos]).unwrap()
    }

    #[test]
    fn copula_parent() {
        let t = tree(&[
            ("the", "DET", Some(1), "det"),
            ("food", "NOUN", Some(2), "nsubj"),
            ("is", "AUX", None, "ROOT"),
            ("good", "ADJ", Some(2), "acomp"),
        ]);
        let c = identify_targets(&t, &[Span::new(0, 2)], &VerbRules::default());
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].parent_verb, Some(2));
        assert_eq!(c[0].head_noun, 1);
    }

    #[test]
    fn verbless_sentence() {
        let t =
            tree(&[("Good", "ADJ", Some(1), "amod"), ("food", "NOUN", None, "ROOT"), (".", "PUNCT", Some(1), "punct")]);
        let c = identify_targets(&t, &[Span::new(0, 2)], &VerbRules::default());
        assert_eq!(
            c,
            vec![TargetCandidate { chunk: Span::new(0, 2), head_noun: 1, parent_verb: None, sentiment: None }]
        );
    }

    #[test]
    fn nested_clause_binds_nearest_verb() {
        // I think the food rocks
        let t = tree(&[
            ("I", "PRON", Some(1), "nsubj"),
            ("think", "VERB", None, "ROOT"),
            ("the", "DET", Some(3), "det"),
            ("food", "NOUN", Some(4), "nsubj"),
            ("rocks", "VERB", Some(1), "ccomp"),
        ]);
        let c = identify_targets(&t, &[Span::new(0, 1), Span::new(2, 4)], &VerbRules::default());
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].parent_verb, Some(1));
        assert_eq!(c[1].parent_verb, Some(4));
    }

    #[test]
    fn chunk_outside_any_verb_is_dropped() {
        // "Great food but the service was slow", parsed with "food" as root.
        let t = tree(&[
            ("Great", "ADJ", Some(1), "amod"),
            ("food", "NOUN", None, "ROOT"),
            ("but", "CCONJ", Some(1), "cc"),
            ("the", "DET", Some(4), "det"),
            ("service", "NOUN", Some(5), "nsubj"),
            ("was", "AUX", Some(1), "conj"),
            ("slow", "ADJ", Some(5), "acomp"),
        ]);
        let c = identify_targets(&t, &[Span::new(0, 2), Span::new(3, 5)], &VerbRules::default());
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].chunk, Span::new(3, 5));
        assert_eq!(c[0].parent_verb, Some(5));
    }

    #[test]
    fn aux_relation_rule() {
        let t = tree(&[("food", "NOUN", Some(1), "nsubj"), ("will", "X", None, "aux")]);
        assert!(identify_targets(&t, &[Span::new(0, 1)], &VerbRules::default()).first().unwrap().parent_verb.is_none());
        let rules = VerbRules { aux_by_deprel: true };
        assert_eq!(identify_targets(&t, &[Span::new(0, 1)], &rules)[0].parent_verb, Some(1));
    }

    #[test]
    fn sentiment_trickles_down() {
        let cand = TargetCandidate { chunk: Span::new(0, 2), head_noun: 1, parent_verb: Some(2), sentiment: None };
        let preds = vec![pred(0.0, 0.0, 0.0), pred(2.0, 0.0, 0.0), pred(0.0, 0.0, 3.0), pred(0.0, 0.0, 1.0)];
        assert_eq!(assign_sentiment(&cand, &preds), Sentiment::Positive);

        let verbless = TargetCandidate { parent_verb: None, ..cand.clone() };
        assert_eq!(assign_sentiment(&verbless, &preds), Sentiment::Negative);

        let tied = vec![pred(0.0, 0.0, 0.0), pred(0.0, 0.0, 0.0), pred(-1.0, 1.0, 1.0)];
        assert_eq!(assign_sentiment(&cand, &tied), Sentiment::Positive);
    }
}
