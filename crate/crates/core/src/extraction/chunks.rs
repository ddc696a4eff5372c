//! Built-in noun chunker.
//!
//! An approximation of the usual English base-NP rules over a labeled
//! dependency tree. Chunk spans supplied with the parse always take
//! precedence.

use crate::corpus::{DepTree, Span};

const HEAD_UPOS: &[&str] = &["NOUN", "PROPN", "PRON"];

// Relations that make a noun the head of a chunk, with their UD spellings.
const HEAD_DEPRELS: &[&str] = &[
    "nsubj",
    "nsubjpass",
    "nsubj:pass",
    "dobj",
    "obj",
    "iobj",
    "pobj",
    "obl",
    "nmod",
    "attr",
    "dative",
    "appos",
    "conj",
    "root",
];

const MODIFIER_DEPRELS: &[&str] = &["det", "poss", "nmod:poss", "amod", "compound", "nummod"];

fn is_modifier(tree: &DepTree, child: usize, parent: usize) -> bool {
    let rel = tree.token(child).deprel.to_ascii_lowercase();
    MODIFIER_DEPRELS.contains(&rel.as_str())
        || (rel == "advmod" && tree.token(parent).deprel.eq_ignore_ascii_case("amod"))
}

/// Whether `idx` heads a chunk under the built-in rules.
pub fn is_chunk_head(tree: &DepTree, idx: usize) -> bool {
    let tok = tree.token(idx);
    HEAD_UPOS.contains(&tok.upos.as_str()) && HEAD_DEPRELS.contains(&tok.deprel.to_ascii_lowercase().as_str())
}

/// Chunk of the noun at `head`: from the left-most modifier reachable
/// through modifier relations on the left of the head, up to the head.
pub fn chunk_for_head(tree: &DepTree, head: usize) -> Span {
    let mut start = head;
    let mut stack = vec![head];
    while let Some(node) = stack.pop() {
        for &c in tree.children(node) {
            if c < head && is_modifier(tree, c, node) {
                start = start.min(c);
                stack.push(c);
            }
        }
    }
    Span::new(start, head + 1)
}

/// Noun chunks sorted by start. Spans stored on the tree are returned as-is.
pub fn noun_chunks(tree: &DepTree) -> Vec<Span> {
    if let Some(spans) = tree.chunk_spans() {
        let mut spans = spans.to_vec();
        spans.sort();
        return spans;
    }

    let mut candidates: Vec<Span> =
        (0..tree.len()).filter(|&i| is_chunk_head(tree, i)).map(|i| chunk_for_head(tree, i)).collect();
    // Longer chunks first, earlier start breaking ties.
    candidates.sort_by(|a, b| b.len().cmp(&a.len()).then(a.start.cmp(&b.start)));
    let mut kept: Vec<Span> = Vec::new();
    for c in candidates {
        if kept.iter().all(|k| !k.overlaps(&c)) {
            kept.push(c);
        }
    }
    kept.sort();
    kept
}
