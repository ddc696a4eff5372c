use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Three-way sentiment label.
///
/// The discriminant is the class index used by the classifier output, so
/// `Negative < Neutral < Positive` also orders the classes for tie-breaking.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sentiment {
    Negative = 0,
    Neutral = 1,
    Positive = 2,
}

impl Sentiment {
    pub const ALL: [Sentiment; 3] = [Sentiment::Negative, Sentiment::Neutral, Sentiment::Positive];
    pub const COUNT: usize = 3;

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(idx: usize) -> Option<Sentiment> {
        Self::ALL.get(idx).copied()
    }

    /// Collapse a fine-grained SST label (0..=4) onto three classes.
    pub fn from_sst5(label: u8) -> Option<Sentiment> {
        match label {
            0 | 1 => Some(Sentiment::Negative),
            2 => Some(Sentiment::Neutral),
            3 | 4 => Some(Sentiment::Positive),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sentiment::Negative => "negative",
            Sentiment::Neutral => "neutral",
            Sentiment::Positive => "positive",
        }
    }
}

impl fmt::Display for Sentiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown sentiment label '{0}'")]
pub struct ParseSentimentError(pub String);

impl FromStr for Sentiment {
    type Err = ParseSentimentError;

    /// Accepts full names and the abbreviations used by the public triplet
    /// releases (`POS`, `NEG`, `NEU`), case-insensitively.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "negative" | "neg" => Ok(Sentiment::Negative),
            "neutral" | "neu" => Ok(Sentiment::Neutral),
            "positive" | "pos" => Ok(Sentiment::Positive),
            _ => Err(ParseSentimentError(s.to_owned())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sst_collapse_is_total_and_surjective() {
        let mapped: Vec<_> = (0..=4).map(|l| Sentiment::from_sst5(l).unwrap()).collect();
        for s in Sentiment::ALL {
            assert!(mapped.contains(&s));
        }
        assert_eq!(Sentiment::from_sst5(2), Some(Sentiment::Neutral));
        assert_eq!(Sentiment::from_sst5(4), Some(Sentiment::Positive));
        assert_eq!(Sentiment::from_sst5(5), None);
    }

    #[test]
    fn parses_abbreviations() {
        assert_eq!("POS".parse::<Sentiment>().unwrap(), Sentiment::Positive);
        assert_eq!("neg".parse::<Sentiment>().unwrap(), Sentiment::Negative);
        assert_eq!("Neutral".parse::<Sentiment>().unwrap(), Sentiment::Neutral);
        assert!("good".parse::<Sentiment>().is_err());
    }
}
