pub const DETERMINERS: &[&str] = &["the", "a", "an"];
pub const COPULAS: &[&str] = &["is", "was", "were", "are", "'s"];

/// Drops determiners and/or copulas (case-insensitive), keeping order.
pub fn strip_function_words<S: AsRef<str>>(tokens: &[S], strip_dets: bool, strip_copula: bool) -> Vec<String> {
    tokens
        .iter()
        .map(AsRef::as_ref)
        .filter(|t| {
            let lower = t.to_lowercase();
            !(strip_dets && DETERMINERS.contains(&lower.as_str()) || strip_copula && COPULAS.contains(&lower.as_str()))
        })
        .map(str::to_owned)
        .collect()
}
