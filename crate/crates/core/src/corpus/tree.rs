use std::fmt;

use serde::{Deserialize, Serialize};

/// A token of a dependency parse.
///
/// `index` is the 1-based CoNLL-U position; `head` is the 0-based position of
/// the governing token inside the owning tree, or `None` for the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub index: usize,
    pub form: String,
    pub lemma: String,
    pub upos: String,
    pub xpos: String,
    pub feats: String,
    pub head: Option<usize>,
    pub deprel: String,
    pub deps: String,
    /// MISC column without any chunk mark.
    pub misc: String,
}

impl Token {
    /// Token with only the columns the pipeline looks at filled in.
    pub fn new(
        form: impl Into<String>,
        upos: impl Into<String>,
        head: Option<usize>,
        deprel: impl Into<String>,
    ) -> Self {
        let form = form.into();
        Token {
            index: 0,
            lemma: form.clone(),
            form,
            upos: upos.into(),
            xpos: "_".to_owned(),
            feats: "_".to_owned(),
            head,
            deprel: deprel.into(),
            deps: "_".to_owned(),
            misc: "_".to_owned(),
        }
    }
}

/// Half-open range of 0-based token positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        self.end.saturating_sub(self.start)
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.start <= idx && idx < self.end
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub fn indices(&self) -> std::ops::Range<usize> {
        self.start..self.end
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("empty sentence")]
    Empty,
    #[error("self-loop at token {0}")]
    SelfLoop(usize),
    #[error("token {token} has head {head} outside the sentence")]
    HeadOutOfRange { token: usize, head: usize },
    #[error("no root token")]
    NoRoot,
    #[error("multiple root tokens: {0} and {1}")]
    MultipleRoots(usize, usize),
    #[error("cycle through token {0}")]
    Cycle(usize),
    #[error("chunk span {0} out of bounds")]
    SpanOutOfBounds(Span),
    #[error("chunk spans {0} and {1} overlap")]
    SpanOverlap(Span, Span),
}

/// A validated dependency tree.
///
/// Token positions double as node ids. Children lists are kept in ascending
/// position order.
#[derive(Clone, Debug, PartialEq)]
pub struct DepTree {
    tokens: Vec<Token>,
    children: Vec<Vec<usize>>,
    root: usize,
    chunk_spans: Option<Vec<Span>>,
    comments: Vec<String>,
}

impl DepTree {
    /// Builds a tree, checking that the heads form a single rooted tree and
    /// that chunk spans are in bounds and disjoint. Token `index` fields are
    /// renumbered 1..=n.
    pub fn new(mut tokens: Vec<Token>, chunk_spans: Option<Vec<Span>>) -> Result<DepTree, TreeError> {
        let n = tokens.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }

        let mut root = None;
        let mut children = vec![Vec::new(); n];
        for (i, tok) in tokens.iter_mut().enumerate() {
            tok.index = i + 1;
            match tok.head {
                None => match root {
                    None => root = Some(i),
                    Some(r) => return Err(TreeError::MultipleRoots(r + 1, i + 1)),
                },
                Some(h) if h == i => return Err(TreeError::SelfLoop(i + 1)),
                Some(h) if h >= n => return Err(TreeError::HeadOutOfRange { token: i + 1, head: h + 1 }),
                Some(h) => children[h].push(i),
            }
        }
        let root = root.ok_or(TreeError::NoRoot)?;

        // Every node must reach the root by following heads.
        let mut state = vec![0u8; n]; // 0 unvisited, 1 on current path, 2 reaches root
        state[root] = 2;
        for start in 0..n {
            let mut path = Vec::new();
            let mut cur = start;
            while state[cur] == 0 {
                state[cur] = 1;
                path.push(cur);
                cur = tokens[cur].head.expect("only the root lacks a head");
            }
            if state[cur] == 1 {
                return Err(TreeError::Cycle(cur + 1));
            }
            for p in path {
                state[p] = 2;
            }
        }

        if let Some(spans) = &chunk_spans {
            let mut sorted = spans.clone();
            sorted.sort();
            for s in &sorted {
                if s.is_empty() || s.end > n {
                    return Err(TreeError::SpanOutOfBounds(*s));
                }
            }
            for w in sorted.windows(2) {
                if w[0].overlaps(&w[1]) {
                    return Err(TreeError::SpanOverlap(w[0], w[1]));
                }
            }
        }

        Ok(DepTree { tokens, children, root, chunk_spans, comments: Vec::new() })
    }

    /// Tree from 0-based head positions; `None` marks the root. Tokens get
    /// placeholder POS and relation columns.
    pub fn from_heads<S: AsRef<str>>(forms: &[S], heads: &[Option<usize>]) -> Result<DepTree, TreeError> {
        let tokens = forms
            .iter()
            .zip(heads)
            .map(|(f, &h)| Token::new(f.as_ref(), "_", h, if h.is_none() { "root" } else { "dep" }))
            .collect();
        DepTree::new(tokens, None)
    }

    pub fn with_comments(mut self, comments: Vec<String>) -> Self {
        self.comments = comments;
        self
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn token(&self, idx: usize) -> &Token {
        &self.tokens[idx]
    }

    pub fn forms(&self) -> Vec<String> {
        self.tokens.iter().map(|t| t.form.clone()).collect()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn head(&self, idx: usize) -> Option<usize> {
        self.tokens[idx].head
    }

    pub fn children(&self, idx: usize) -> &[usize] {
        &self.children[idx]
    }

    pub fn is_leaf(&self, idx: usize) -> bool {
        self.children[idx].is_empty()
    }

    pub fn chunk_spans(&self) -> Option<&[Span]> {
        self.chunk_spans.as_deref()
    }

    pub fn set_chunk_spans(&mut self, spans: Option<Vec<Span>>) -> Result<(), TreeError> {
        let rebuilt = DepTree::new(self.tokens.clone(), spans)?;
        self.chunk_spans = rebuilt.chunk_spans;
        Ok(())
    }

    pub fn comments(&self) -> &[String] {
        &self.comments
    }

    /// Value of a `# key = value` comment, if present.
    pub fn comment_value(&self, key: &str) -> Option<&str> {
        self.comments.iter().find_map(|c| {
            let (k, v) = c.split_once('=')?;
            (k.trim() == key).then(|| v.trim())
        })
    }

    pub fn edge_count(&self) -> usize {
        self.children.iter().map(Vec::len).sum()
    }

    /// Nodes in post-order: every node appears after all of its dependents.
    pub fn post_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.len());
        let mut stack = vec![(self.root, false)];
        while let Some((node, expanded)) = stack.pop() {
            if expanded {
                order.push(node);
            } else {
                stack.push((node, true));
                for &c in self.children[node].iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        order
    }

    /// Depth-first pre-order of the subtree at `node`, children in sentence
    /// order.
    pub fn pre_order_from(&self, node: usize) -> Vec<usize> {
        let mut order = Vec::new();
        let mut stack = vec![node];
        while let Some(n) = stack.pop() {
            order.push(n);
            stack.extend(self.children[n].iter().rev());
        }
        order
    }

    /// Positions of `node` and all its descendants, ascending.
    pub fn yield_of(&self, node: usize) -> Vec<usize> {
        let mut nodes = self.pre_order_from(node);
        nodes.sort_unstable();
        nodes
    }

    /// Proper ancestors of `node`, nearest first.
    pub fn ancestors(&self, node: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = self.tokens[node].head;
        while let Some(h) = cur {
            out.push(h);
            cur = self.tokens[h].head;
        }
        out
    }

    pub fn is_ancestor_or_self(&self, ancestor: usize, node: usize) -> bool {
        ancestor == node || self.ancestors(node).contains(&ancestor)
    }

    /// The token of `span` whose head lies outside it. With several such
    /// tokens the right-most one wins, matching the head-final shape of
    /// English noun phrases.
    pub fn span_head(&self, span: Span) -> usize {
        span.indices().rev().find(|&i| self.tokens[i].head.is_none_or(|h| !span.contains(h))).unwrap_or(span.end - 1)
    }
}
