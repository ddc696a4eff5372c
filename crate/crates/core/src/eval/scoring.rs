use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gleu::gleu;
use super::matching::{greedy_assign, span_match};
use super::EvalError;
use crate::corpus::{GoldRecord, PredictedTriplet, PredictionRecord};
use crate::extraction::{strip_function_words, Method};
use crate::Sentiment;

const GLEU_ORDER: usize = 4;

/// A predicted target and the triplets emitted for it, one per method.
#[derive(Clone, Debug, PartialEq)]
pub struct PredTarget {
    pub indices: Vec<usize>,
    pub sentiment: Sentiment,
    pub triplets: Vec<PredictedTriplet>,
}

impl PredTarget {
    pub fn triplet(&self, method: Method) -> Option<&PredictedTriplet> {
        self.triplets.iter().find(|t| t.method == method)
    }
}

/// A distinct gold target with every (opinion, sentiment) annotated for it.
#[derive(Clone, Debug, PartialEq)]
pub struct GoldTarget {
    pub indices: Vec<usize>,
    pub opinions: Vec<(Vec<usize>, Sentiment)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlignedSentence {
    pub tokens: Vec<String>,
    pub predicted: Vec<PredTarget>,
    pub gold: Vec<GoldTarget>,
    /// Greedy one-to-one `(predicted, gold)` target matches.
    pub pairs: Vec<(usize, usize)>,
}

impl AlignedSentence {
    fn words(&self, idx: &[usize]) -> Vec<String> {
        idx.iter().map(|&i| self.tokens[i].to_lowercase()).collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Aligned {
    pub sentences: Vec<AlignedSentence>,
}

fn check_indices(sentence: usize, what: &str, idx: &[usize], len: usize) -> Result<(), EvalError> {
    match idx.iter().find(|&&i| i >= len) {
        Some(i) => Err(EvalError::Alignment {
            sentence,
            msg: format!("{} index {} outside a {}-token sentence", what, i, len),
        }),
        None => Ok(()),
    }
}

/// Pairs prediction records with gold records sentence by sentence and
/// matches their targets.
pub fn align(predictions: &[PredictionRecord], gold: &[GoldRecord]) -> Result<Aligned, EvalError> {
    if predictions.len() != gold.len() {
        return Err(EvalError::Alignment {
            sentence: predictions.len().min(gold.len()),
            msg: format!("{} prediction records but {} gold sentences", predictions.len(), gold.len()),
        });
    }
    let mut sentences = Vec::with_capacity(gold.len());
    for (i, (p, g)) in predictions.iter().zip(gold).enumerate() {
        if p.sentence != i {
            return Err(EvalError::Alignment {
                sentence: i,
                msg: format!("record carries sentence number {}", p.sentence),
            });
        }
        if p.error.is_none() && p.tokens != g.tokens {
            return Err(EvalError::Alignment {
                sentence: i,
                msg: format!("tokens differ: predicted '{}', gold '{}'", p.tokens.join(" "), g.tokens.join(" ")),
            });
        }
        let n = g.tokens.len();

        let mut predicted: Vec<PredTarget> = Vec::new();
        for t in &p.triplets {
            check_indices(i, "target", &t.target, n)?;
            check_indices(i, "opinion", &t.opinion, n)?;
            for alt in &t.alternatives {
                check_indices(i, "opinion", alt, n)?;
            }
            match predicted.iter_mut().find(|pt| pt.indices == t.target) {
                Some(pt) => pt.triplets.push(t.clone()),
                None => predicted.push(PredTarget {
                    indices: t.target.clone(),
                    sentiment: t.sentiment,
                    triplets: vec![t.clone()],
                }),
            }
        }
        predicted.sort_by_key(|t| (t.indices.first().copied(), t.indices.len()));

        let mut gold_targets: Vec<GoldTarget> = Vec::new();
        for t in &g.triplets {
            check_indices(i, "gold target", &t.target, n)?;
            check_indices(i, "gold opinion", &t.opinion, n)?;
            let entry = (t.opinion.clone(), t.sentiment);
            match gold_targets.iter_mut().find(|gt| gt.indices == t.target) {
                Some(gt) => gt.opinions.push(entry),
                None => gold_targets.push(GoldTarget { indices: t.target.clone(), opinions: vec![entry] }),
            }
        }
        gold_targets.sort_by_key(|t| (t.indices.first().copied(), t.indices.len()));

        let mut s = AlignedSentence { tokens: g.tokens.clone(), predicted, gold: gold_targets, pairs: Vec::new() };
        let pw: Vec<Vec<String>> = s.predicted.iter().map(|t| s.words(&t.indices)).collect();
        let gw: Vec<Vec<String>> = s.gold.iter().map(|t| s.words(&t.indices)).collect();
        s.pairs = greedy_assign(pw.len(), gw.len(), |a, b| span_match(&pw[a], &gw[b]));
        sentences.push(s);
    }
    Ok(Aligned { sentences })
}

/// Mean and population standard deviation of per-pair GLEU values.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GleuSummary {
    pub pairs: usize,
    pub mean: f64,
    pub std: f64,
}

impl GleuSummary {
    pub fn from_values(values: &[f64]) -> Self {
        if values.is_empty() {
            return GleuSummary::default();
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        GleuSummary { pairs: values.len(), mean, std: var.sqrt() }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Prf {
    pub fn new(precision: f64, recall: f64) -> Self {
        let f1 = if precision + recall > 0.0 { 2.0 * precision * recall / (precision + recall) } else { 0.0 };
        Prf { precision, recall, f1 }
    }
}

/// Rate with a zero denominator reported as 0 and a warning recorded.
pub(crate) fn rate(num: usize, den: usize, what: &str, warnings: &mut Vec<String>) -> f64 {
    if den == 0 {
        let w = format!("{}: zero denominator, reported as 0", what);
        if !warnings.contains(&w) {
            log::warn!("{}", w);
            warnings.push(w);
        }
        0.0
    } else {
        num as f64 / den as f64
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TargetScores {
    pub predicted: usize,
    pub gold: usize,
    pub matched: usize,
    pub precision: f64,
    pub recall: f64,
    /// GLEU of matched pairs with determiners removed from both sides.
    pub gleu: GleuSummary,
}

pub fn evaluate_targets(aligned: &Aligned, warnings: &mut Vec<String>) -> TargetScores {
    let per_sentence: Vec<Vec<f64>> = aligned
        .sentences
        .par_iter()
        .map(|s| {
            s.pairs
                .iter()
                .map(|&(p, g)| {
                    let pw = strip_function_words(&s.words(&s.predicted[p].indices), true, false);
                    let gw = strip_function_words(&s.words(&s.gold[g].indices), true, false);
                    gleu(&pw, &gw, GLEU_ORDER).value
                })
                .collect()
        })
        .collect();
    let values: Vec<f64> = per_sentence.into_iter().flatten().collect();
    let predicted = aligned.sentences.iter().map(|s| s.predicted.len()).sum();
    let gold = aligned.sentences.iter().map(|s| s.gold.len()).sum();
    let matched = values.len();
    TargetScores {
        predicted,
        gold,
        matched,
        precision: rate(matched, predicted, "target precision", warnings),
        recall: rate(matched, gold, "target recall", warnings),
        gleu: GleuSummary::from_values(&values),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SentimentScore {
    pub matched: usize,
    pub correct: usize,
    pub accuracy: f64,
}

/// Accuracy of the inherited sentiment over matched targets. A label is
/// correct when any gold triplet of the target carries it.
pub fn evaluate_sentiment(aligned: &Aligned, warnings: &mut Vec<String>) -> SentimentScore {
    let mut matched = 0;
    let mut correct = 0;
    for s in &aligned.sentences {
        for &(p, g) in &s.pairs {
            matched += 1;
            correct += usize::from(s.gold[g].opinions.iter().any(|(_, l)| *l == s.predicted[p].sentiment));
        }
    }
    SentimentScore { matched, correct, accuracy: rate(correct, matched, "sentiment accuracy", warnings) }
}

/// Opinion and triplet scores for one method.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodScores {
    pub method: Method,
    /// Matched targets whose opinion also matches.
    pub ote_correct: usize,
    /// Matched targets whose opinion and sentiment both match one gold triplet.
    pub full_correct: usize,
    /// Scores among matched targets only (precision = recall = F1).
    pub conditioned_ote: Prf,
    pub conditioned_full: Prf,
    /// Scores against all predicted and all gold targets.
    pub ote: Prf,
    pub full: Prf,
    /// Opinion GLEU over pairs with a matching opinion.
    pub opinion_gleu: GleuSummary,
}

fn opinion_candidates(t: &PredictedTriplet) -> impl Iterator<Item = &Vec<usize>> {
    std::iter::once(&t.opinion).chain(&t.alternatives)
}

fn strip_for(method: Method) -> bool {
    // Copulas and determiners come off for methods that return word strings.
    method != Method::Hn
}

struct MethodTally {
    ote: usize,
    full: usize,
    gleu: Vec<f64>,
}

fn tally_sentence(s: &AlignedSentence, method: Method) -> MethodTally {
    let mut tally = MethodTally { ote: 0, full: 0, gleu: Vec::new() };
    for &(p, g) in &s.pairs {
        let Some(t) = s.predicted[p].triplet(method) else {
            continue;
        };
        let gold = &s.gold[g];
        let opinion_ok = |o: &[usize]| opinion_candidates(t).any(|c| span_match(&s.words(c), &s.words(o)));
        let ote = gold.opinions.iter().any(|(o, _)| opinion_ok(o));
        if !ote {
            continue;
        }
        tally.ote += 1;
        tally.full += usize::from(gold.opinions.iter().any(|(o, l)| *l == t.sentiment && opinion_ok(o)));
        let strip = strip_for(method);
        let pw = strip_function_words(&s.words(&t.opinion), strip, strip);
        let best = gold
            .opinions
            .iter()
            .map(|(o, _)| gleu(&pw, &strip_function_words(&s.words(o), strip, strip), GLEU_ORDER).value)
            .fold(0.0, f64::max);
        tally.gleu.push(best);
    }
    tally
}

pub fn evaluate_triplets(aligned: &Aligned, method: Method, warnings: &mut Vec<String>) -> MethodScores {
    let tallies: Vec<MethodTally> = aligned.sentences.par_iter().map(|s| tally_sentence(s, method)).collect();
    let ote_correct: usize = tallies.iter().map(|t| t.ote).sum();
    let full_correct: usize = tallies.iter().map(|t| t.full).sum();
    let values: Vec<f64> = tallies.into_iter().flat_map(|t| t.gleu).collect();

    let matched: usize = aligned.sentences.iter().map(|s| s.pairs.len()).sum();
    let predicted: usize = aligned.sentences.iter().map(|s| s.predicted.len()).sum();
    let gold: usize = aligned.sentences.iter().map(|s| s.gold.len()).sum();
    let cond = |n: usize, w: &mut Vec<String>| {
        let r = rate(n, matched, "opinion scores among matched targets", w);
        Prf::new(r, r)
    };
    let corpus = |n: usize, w: &mut Vec<String>| {
        Prf::new(rate(n, predicted, "triplet precision", w), rate(n, gold, "triplet recall", w))
    };
    MethodScores {
        method,
        ote_correct,
        full_correct,
        conditioned_ote: cond(ote_correct, warnings),
        conditioned_full: cond(full_correct, warnings),
        ote: corpus(ote_correct, warnings),
        full: corpus(full_correct, warnings),
        opinion_gleu: GleuSummary::from_values(&values),
    }
}

/// GLEU of the whole sentence against the best gold opinion of each
/// matched target, as a floor for the opinion GLEU figures.
pub fn full_sentence_gleu(aligned: &Aligned) -> GleuSummary {
    let values: Vec<f64> = aligned
        .sentences
        .iter()
        .flat_map(|s| {
            let sentence = s.words(&(0..s.tokens.len()).collect::<Vec<_>>());
            s.pairs
                .iter()
                .map(|&(_, g)| {
                    s.gold[g]
                        .opinions
                        .iter()
                        .map(|(o, _)| gleu(&sentence, &s.words(o), GLEU_ORDER).value)
                        .fold(0.0, f64::max)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    GleuSummary::from_values(&values)
}
