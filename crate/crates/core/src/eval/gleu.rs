use std::collections::HashMap;

use serde::{Deserialize, Serialize};

/// Sentence-level GLEU with n-gram counts pooled over orders `1..=max_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GleuScore {
    pub value: f64,
    /// Clipped matches per order, index 0 holding unigrams.
    pub matched: Vec<usize>,
    pub candidate: Vec<usize>,
    pub reference: Vec<usize>,
}

impl GleuScore {
    pub fn precision(&self) -> f64 {
        ratio(self.matched.iter().sum(), self.candidate.iter().sum())
    }

    pub fn recall(&self) -> f64 {
        ratio(self.matched.iter().sum(), self.reference.iter().sum())
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn ngram_counts<S: AsRef<str>>(tokens: &[S], n: usize) -> HashMap<Vec<&str>, usize> {
    let mut counts = HashMap::new();
    for w in tokens.windows(n) {
        *counts.entry(w.iter().map(AsRef::as_ref).collect()).or_insert(0) += 1;
    }
    counts
}

/// `min(precision, recall)` over all 1..`max_n`-grams; 0 if either side is
/// empty. Tokens are compared exactly.
pub fn gleu<S: AsRef<str>, T: AsRef<str>>(candidate: &[S], reference: &[T], max_n: usize) -> GleuScore {
    assert!(max_n >= 1, "max_n must be at least 1");
    let mut score =
        GleuScore { value: 0.0, matched: vec![0; max_n], candidate: vec![0; max_n], reference: vec![0; max_n] };
    for n in 1..=max_n {
        let cand = ngram_counts(candidate, n);
        let refs = ngram_counts(reference, n);
        score.candidate[n - 1] = candidate.len().saturating_sub(n - 1);
        score.reference[n - 1] = reference.len().saturating_sub(n - 1);
        score.matched[n - 1] = cand.iter().map(|(g, &c)| c.min(refs.get(g).copied().unwrap_or(0))).sum();
    }
    score.value = score.precision().min(score.recall());
    score
}
