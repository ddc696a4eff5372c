/// Whether one token sequence occurs contiguously inside the other,
/// compared case-insensitively on whole tokens. Empty input never matches.
pub fn span_match<S: AsRef<str>, T: AsRef<str>>(predicted: &[S], gold: &[T]) -> bool {
    if predicted.is_empty() || gold.is_empty() {
        return false;
    }
    let p: Vec<String> = predicted.iter().map(|t| t.as_ref().to_lowercase()).collect();
    let g: Vec<String> = gold.iter().map(|t| t.as_ref().to_lowercase()).collect();
    contains(&p, &g) || contains(&g, &p)
}

fn contains(hay: &[String], needle: &[String]) -> bool {
    needle.len() <= hay.len() && hay.windows(needle.len()).any(|w| w == needle)
}

/// One-to-one assignment of predictions to gold items. Predictions are taken
/// in order and each claims the first unclaimed gold item it matches.
/// Returns `(prediction, gold)` index pairs.
pub fn greedy_assign<F: Fn(usize, usize) -> bool>(n_pred: usize, n_gold: usize, matches: F) -> Vec<(usize, usize)> {
    let mut taken = vec![false; n_gold];
    let mut pairs = Vec::new();
    for p in 0..n_pred {
        if let Some(g) = (0..n_gold).find(|&g| !taken[g] && matches(p, g)) {
            taken[g] = true;
            pairs.push((p, g));
        }
    }
    pairs
}
