use crate::corpus::{DepTree, Span};
use crate::dtlstm::NodePrediction;
use crate::Sentiment;

/// Opinion candidates found under one search root.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    /// Node with the highest log-probability for the target class.
    pub hn: Option<usize>,
    pub hn_activation: Option<f64>,
    /// Nodes whose predicted class is the target class, in sentence order.
    pub ss: Vec<usize>,
    /// Every node of the subtree was excluded.
    pub empty: bool,
}

/// Depth-first search of the subtree at `root` for opinion words.
///
/// Nodes inside `exclusion` are not candidates, but their dependents are
/// still visited. HN keeps the last-visited node among equal activations.
pub fn recursive_search(
    tree: &DepTree,
    preds: &[NodePrediction],
    root: usize,
    target: Sentiment,
    exclusion: Option<Span>,
) -> SearchResult {
    let mut hn: Option<(usize, f64)> = None;
    let mut ss = Vec::new();
    let mut visited = 0;
    for node in tree.pre_order_from(root) {
        if exclusion.is_some_and(|s| s.contains(node)) {
            continue;
        }
        visited += 1;
        let p = &preds[node];
        let act = p.log_prob(target);
        if hn.is_none_or(|(_, best)| act >= best) {
            hn = Some((node, act));
        }
        if p.label() == target {
            ss.push(node);
        }
    }
    ss.sort_unstable();
    SearchResult { hn: hn.map(|(n, _)| n), hn_activation: hn.map(|(_, a)| a), ss, empty: visited == 0 }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pred(lp: [f64; 3]) -> NodePrediction {
        NodePrediction::from_logits(&lp).unwrap()
    }

    // The food is pretty good
    fn food_tree() -> DepTree {
        DepTree::from_heads(&["The", "food", "is", "pretty", "good"], &[Some(1), Some(2), None, Some(4), Some(2)])
            .unwrap()
    }

    #[test]
    fn heaviest_node_and_sentiment_string() {
        let preds = vec![
            pred([0.0, 1.0, 0.0]),
            pred([0.0, 1.0, 0.5]),
            pred([0.0, 0.0, 1.0]),
            pred([0.0, 0.0, 1.5]),
            pred([0.0, 0.0, 3.0]),
        ];
        let r = recursive_search(&food_tree(), &preds, 2, Sentiment::Positive, Some(Span::new(0, 2)));
        assert_eq!(r.hn, Some(4));
        assert_eq!(r.hn_activation, Some(preds[4].log_prob(Sentiment::Positive)));
        assert_eq!(r.ss, vec![2, 3, 4]);
        assert!(!r.empty);
    }

    #[test]
    fn all_neutral() {
        let preds = vec![
            pred([0.0, 2.0, 0.0]),
            pred([0.0, 2.0, 0.1]),
            pred([0.0, 2.0, 1.0]),
            pred([0.0, 2.0, 0.2]),
            pred([0.0, 2.0, 0.3]),
        ];
        let r = recursive_search(&food_tree(), &preds, 2, Sentiment::Positive, None);
        assert!(r.ss.is_empty());
        assert_eq!(r.hn, Some(2));
    }

    #[test]
    fn ties_go_to_later_visit() {
        let preds = vec![pred([0.0, 0.0, 0.0]); 5];
        // Pre-order from "is": is, food, The, good, pretty.
        let r = recursive_search(&food_tree(), &preds, 2, Sentiment::Negative, None);
        assert_eq!(r.hn, Some(3));
    }

    #[test]
    fn excluded_nodes_are_traversed_not_chosen() {
        // food is the root; "good" hangs below the excluded "food".
        let t = DepTree::from_heads(&["good", "food"], &[Some(1), None]).unwrap();
        let preds = vec![pred([0.0, 0.0, 2.0]), pred([0.0, 0.0, 5.0])];
        let r = recursive_search(&t, &preds, 1, Sentiment::Positive, Some(Span::new(1, 2)));
        assert_eq!(r.hn, Some(0));
        assert_eq!(r.ss, vec![0]);
    }

    #[test]
    fn fully_excluded_subtree() {
        let t = DepTree::from_heads(&["food"], &[None]).unwrap();
        let r = recursive_search(&t, &[pred([0.0; 3])], 0, Sentiment::Positive, Some(Span::new(0, 1)));
        assert!(r.empty);
        assert_eq!(r.hn, None);
        assert!(r.ss.is_empty());
    }
}
