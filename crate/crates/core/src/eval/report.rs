use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::scoring::{
    align, evaluate_sentiment, evaluate_targets, evaluate_triplets, full_sentence_gleu, GleuSummary, MethodScores, Prf,
    SentimentScore, TargetScores,
};
use super::EvalError;
use crate::corpus::{GoldRecord, PredictionRecord};
use crate::extraction::Method;

// Slack for float comparisons in the ordering checks.
const TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub dataset: String,
    pub sentences: usize,
    pub targets: TargetScores,
    pub sentiment: SentimentScore,
    pub methods: Vec<MethodScores>,
    pub full_sentence_gleu: GleuSummary,
    pub warnings: Vec<String>,
}

/// Scores `predictions` against `gold` for each of `methods` and checks the
/// ordering invariants of the result.
pub fn evaluate(
    dataset: &str,
    predictions: &[PredictionRecord],
    gold: &[GoldRecord],
    methods: &[Method],
) -> Result<EvalReport, EvalError> {
    let aligned = align(predictions, gold)?;
    let mut warnings = Vec::new();
    if aligned.sentences.is_empty() {
        log::warn!("empty dataset");
        warnings.push("empty dataset".to_owned());
    }
    let mut methods = methods.to_vec();
    methods.sort();
    methods.dedup();
    let targets = evaluate_targets(&aligned, &mut warnings);
    let sentiment = evaluate_sentiment(&aligned, &mut warnings);
    let methods = methods.iter().map(|&m| evaluate_triplets(&aligned, m, &mut warnings)).collect();
    let report = EvalReport {
        dataset: dataset.to_owned(),
        sentences: aligned.sentences.len(),
        targets,
        sentiment,
        methods,
        full_sentence_gleu: full_sentence_gleu(&aligned),
        warnings,
    };
    report.check_invariants().map_err(EvalError::Invariant)?;
    Ok(report)
}

type Recall = fn(&MethodScores) -> f64;

impl EvalReport {
    pub fn method(&self, m: Method) -> Option<&MethodScores> {
        self.methods.iter().find(|s| s.method == m)
    }

    /// Rates in `[0, 1]`, full-triplet scores never above opinion scores,
    /// and the merged method recalling at least as much as either part.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut rates = vec![
            ("target precision", self.targets.precision),
            ("target recall", self.targets.recall),
            ("sentiment accuracy", self.sentiment.accuracy),
        ];
        for m in &self.methods {
            for (name, prf) in [
                ("conditioned", m.conditioned_ote),
                ("conditioned -3", m.conditioned_full),
                ("", m.ote),
                ("-3", m.full),
            ] {
                rates.push((name, prf.precision));
                rates.push((name, prf.recall));
                rates.push((name, prf.f1));
            }
            if m.full.f1 > m.ote.f1 + TOLERANCE || m.conditioned_full.f1 > m.conditioned_ote.f1 + TOLERANCE {
                return Err(format!("{}: -3 F1 exceeds opinion F1", m.method));
            }
        }
        if let Some((name, v)) = rates.iter().find(|(_, v)| !(0.0..=1.0).contains(v)) {
            return Err(format!("{} = {} outside [0, 1]", name, v));
        }
        if let (Some(hn), Some(ss), Some(un)) =
            (self.method(Method::Hn), self.method(Method::Ss), self.method(Method::Union))
        {
            let pairs: [(&str, Recall); 4] = [
                ("opinion recall", |m| m.ote.recall),
                ("-3 recall", |m| m.full.recall),
                ("conditioned opinion recall", |m| m.conditioned_ote.recall),
                ("conditioned -3 recall", |m| m.conditioned_full.recall),
            ];
            for (name, get) in pairs {
                if get(un) + TOLERANCE < get(hn).max(get(ss)) {
                    return Err(format!("UNION {} below max(HN, SS)", name));
                }
            }
        }
        Ok(())
    }

    /// Fixed-layout plain-text tables.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "dataset: {}", self.dataset);
        let _ = writeln!(out, "sentences: {}", self.sentences);
        let _ = writeln!(out);

        let t = &self.targets;
        let _ = writeln!(out, "Targets");
        let _ = writeln!(
            out,
            "{:<10} {:>9} {:>6} {:>8} {:>7} {:>7} {:>9} {:>7}",
            "", "predicted", "gold", "matched", "P", "R", "avg GLEU", "sigma"
        );
        let _ = writeln!(
            out,
            "{:<10} {:>9} {:>6} {:>8} {:>7.3} {:>7.3} {:>9.3} {:>7.3}",
            "all", t.predicted, t.gold, t.matched, t.precision, t.recall, t.gleu.mean, t.gleu.std
        );
        let _ = writeln!(out);

        let s = &self.sentiment;
        let _ = writeln!(out, "Target sentiment");
        let _ = writeln!(out, "{:<10} {:>8} {:>8} {:>9}", "", "matched", "correct", "accuracy");
        let _ = writeln!(out, "{:<10} {:>8} {:>8} {:>9.3}", "all", s.matched, s.correct, s.accuracy);
        let _ = writeln!(out);

        let _ = writeln!(out, "Opinion terms among matched targets (F1 = P = R)");
        let _ = writeln!(out, "{:<10} {:>8} {:>7}", "", "correct", "F1");
        for m in &self.methods {
            let _ = writeln!(out, "{:<10} {:>8} {:>7.3}", m.method, m.ote_correct, m.conditioned_ote.f1);
        }
        for m in &self.methods {
            let _ =
                writeln!(out, "{:<10} {:>8} {:>7.3}", format!("{}-3", m.method), m.full_correct, m.conditioned_full.f1);
        }
        let _ = writeln!(out);

        let _ = writeln!(out, "Opinion GLEU");
        let _ = writeln!(out, "{:<10} {:>6} {:>9} {:>7}", "", "pairs", "avg GLEU", "sigma");
        let f = &self.full_sentence_gleu;
        let _ = writeln!(out, "{:<10} {:>6} {:>9.3} {:>7.3}", "Full Sent", f.pairs, f.mean, f.std);
        for m in &self.methods {
            let g = &m.opinion_gleu;
            let _ = writeln!(out, "{:<10} {:>6} {:>9.3} {:>7.3}", m.method, g.pairs, g.mean, g.std);
        }
        let _ = writeln!(out);

        let _ = writeln!(out, "Triplets");
        let _ = writeln!(out, "{:<10} {:>7} {:>7} {:>7}", "", "P", "R", "F1");
        for m in &self.methods {
            let Prf { precision, recall, f1 } = m.full;
            let _ = writeln!(out, "{:<10} {:>7.3} {:>7.3} {:>7.3}", m.method, precision, recall, f1);
        }

        if !self.warnings.is_empty() {
            let _ = writeln!(out);
            for w in &self.warnings {
                let _ = writeln!(out, "warning: {}", w);
            }
        }
        out
    }

    /// One JSON object per table row, tagged by `section`.
    pub fn render_jsonl(&self) -> String {
        let mut rows = vec![
            Row::Summary { dataset: &self.dataset, sentences: self.sentences },
            Row::Targets(&self.targets),
            Row::Sentiment(&self.sentiment),
            Row::FullSentenceGleu(&self.full_sentence_gleu),
        ];
        rows.extend(self.methods.iter().map(Row::Method));
        rows.extend(self.warnings.iter().map(|w| Row::Warning { message: w }));
        rows.iter().map(|r| serde_json::to_string(r).expect("report rows serialize") + "\n").collect()
    }
}

#[derive(Serialize)]
#[serde(tag = "section", rename_all = "snake_case")]
enum Row<'a> {
    Summary { dataset: &'a str, sentences: usize },
    Targets(&'a TargetScores),
    Sentiment(&'a SentimentScore),
    FullSentenceGleu(&'a GleuSummary),
    Method(&'a MethodScores),
    Warning { message: &'a str },
}
