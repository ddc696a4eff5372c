//! Gold triplet files.
//!
//! Two line formats are accepted and may be mixed:
//!
//! * the public release format `tokens####[([t..], [o..], 'POS'), ...]` with
//!   whitespace-tokenized text and 0-based token indices;
//! * normalized JSON records
//!   `{"sentence": "...", "triplets": [{"target": [..], "opinion": [..], "sentiment": "positive"}]}`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CorpusError;
use crate::Sentiment;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldTriplet {
    pub target: Vec<usize>,
    pub opinion: Vec<usize>,
    pub sentiment: Sentiment,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldRecord {
    pub tokens: Vec<String>,
    pub triplets: Vec<GoldTriplet>,
}

impl GoldRecord {
    pub fn words(&self, indices: &[usize]) -> Vec<String> {
        indices.iter().map(|&i| self.tokens[i].clone()).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct JsonRecord {
    sentence: String,
    #[serde(default)]
    triplets: Vec<GoldTriplet>,
}

pub fn read_triplet_gold(path: impl AsRef<Path>) -> Result<Vec<GoldRecord>, CorpusError> {
    let text = fs::read_to_string(path)?;
    parse_triplet_gold(&text)
}

pub fn parse_triplet_gold(text: &str) -> Result<Vec<GoldRecord>, CorpusError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_line(l.trim()).map_err(|e| e.at(i + 1)))
        .collect()
}

/// Normalized JSON form of a record.
pub fn to_json_line(record: &GoldRecord) -> String {
    serde_json::to_string(&JsonRecord { sentence: record.tokens.join(" "), triplets: record.triplets.clone() })
        .expect("gold records serialize")
}

enum LineError {
    Format(String),
    Range(String),
}

impl LineError {
    fn at(self, line: usize) -> CorpusError {
        match self {
            LineError::Format(msg) => CorpusError::Format { line, msg },
            LineError::Range(msg) => CorpusError::Range { line, msg },
        }
    }
}

fn parse_line(line: &str) -> Result<GoldRecord, LineError> {
    let record = if line.starts_with('{') {
        let rec: JsonRecord = serde_json::from_str(line).map_err(|e| LineError::Format(e.to_string()))?;
        GoldRecord { tokens: rec.sentence.split_whitespace().map(str::to_owned).collect(), triplets: rec.triplets }
    } else {
        let (sentence, annotation) =
            line.split_once("####").ok_or_else(|| LineError::Format("missing '####' separator".to_owned()))?;
        GoldRecord {
            tokens: sentence.split_whitespace().map(str::to_owned).collect(),
            triplets: parse_annotation(annotation.trim()).map_err(LineError::Format)?,
        }
    };

    let n = record.tokens.len();
    for t in &record.triplets {
        if t.target.is_empty() {
            return Err(LineError::Format("empty target span".to_owned()));
        }
        if let Some(&bad) = t.target.iter().chain(&t.opinion).find(|&&i| i >= n) {
            return Err(LineError::Range(format!("token index {} outside a {}-token sentence", bad, n)));
        }
    }
    Ok(record)
}

/// Parses a Python-literal list of `([int, ..], [int, ..], 'LABEL')` tuples.
fn parse_annotation(s: &str) -> Result<Vec<GoldTriplet>, String> {
    let mut p = Cursor { s: s.as_bytes(), pos: 0 };
    p.expect(b'[')?;
    let mut out = Vec::new();
    loop {
        p.skip_ws();
        if p.eat(b']') {
            break;
        }
        p.expect(b'(')?;
        let target = p.int_list()?;
        p.expect(b',')?;
        let opinion = p.int_list()?;
        p.expect(b',')?;
        let label = p.quoted()?;
        p.expect(b')')?;
        let sentiment = label.parse::<Sentiment>().map_err(|e| e.to_string())?;
        out.push(GoldTriplet { target, opinion, sentiment });
        p.skip_ws();
        if !p.eat(b',') {
            p.expect(b']')?;
            break;
        }
    }
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(format!("trailing input at column {}", p.pos + 1));
    }
    Ok(out)
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), String> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(format!("expected '{}' at column {}", c as char, self.pos + 1))
        }
    }

    fn int_list(&mut self) -> Result<Vec<usize>, String> {
        self.expect(b'[')?;
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            if self.eat(b']') {
                return Ok(out);
            }
            let start = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let digits = std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("");
            out.push(digits.parse().map_err(|_| format!("expected index at column {}", start + 1))?);
            if !self.eat(b',') {
                self.expect(b']')?;
                return Ok(out);
            }
        }
    }

    fn quoted(&mut self) -> Result<String, String> {
        self.skip_ws();
        let quote = match self.s.get(self.pos) {
            Some(&q @ (b'\'' | b'"')) => q,
            _ => return Err(format!("expected quoted label at column {}", self.pos + 1)),
        };
        self.pos += 1;
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos] != quote {
            self.pos += 1;
        }
        if self.pos == self.s.len() {
            return Err("unterminated label".to_owned());
        }
        let label = String::from_utf8_lossy(&self.s[start..self.pos]).into_owned();
        self.pos += 1;
        Ok(label)
    }
}
