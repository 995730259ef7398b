use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::util::percent_2dp;

/// Polarity in [-1, 1] and subjectivity in [0, 1] for one text.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SentimentScore {
    polarity: f64,
    subjectivity: f64,
}

impl SentimentScore {
    pub fn new(polarity: f64, subjectivity: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&polarity) {
            return Err(Error::Contract(format!(
                "polarity {polarity} outside [-1, 1]"
            )));
        }
        if !(0.0..=1.0).contains(&subjectivity) {
            return Err(Error::Contract(format!(
                "subjectivity {subjectivity} outside [0, 1]"
            )));
        }
        Ok(SentimentScore {
            polarity,
            subjectivity,
        })
    }

    /// Clamps into range; NaN becomes 0.
    pub fn clamped(polarity: f64, subjectivity: f64) -> Self {
        let fix = |v: f64, lo: f64| if v.is_nan() { 0.0 } else { v.clamp(lo, 1.0) };
        SentimentScore {
            polarity: fix(polarity, -1.0),
            subjectivity: fix(subjectivity, 0.0),
        }
    }

    pub fn polarity(&self) -> f64 {
        self.polarity
    }

    pub fn subjectivity(&self) -> f64 {
        self.subjectivity
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolarityClass {
    Positive,
    Neutral,
    Negative,
}

impl PolarityClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            PolarityClass::Positive => "positive",
            PolarityClass::Neutral => "neutral",
            PolarityClass::Negative => "negative",
        }
    }

    /// Maps common label spellings (`pos`, `positive`, ...) to a class.
    pub fn from_label(label: &str) -> Option<Self> {
        match label.to_ascii_lowercase().as_str() {
            "pos" | "positive" => Some(PolarityClass::Positive),
            "neu" | "neutral" => Some(PolarityClass::Neutral),
            "neg" | "negative" => Some(PolarityClass::Negative),
            _ => None,
        }
    }
}

impl fmt::Display for PolarityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubjectivityClass {
    Subjective,
    Objective,
}

impl SubjectivityClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            SubjectivityClass::Subjective => "subjective",
            SubjectivityClass::Objective => "objective",
        }
    }
}

/// Sign of the score: >0 positive, <0 negative, exactly 0 neutral.
pub fn polarity_class(score: f64) -> Result<PolarityClass> {
    if !(-1.0..=1.0).contains(&score) {
        return Err(Error::Contract(format!("polarity {score} outside [-1, 1]")));
    }
    Ok(if score > 0.0 {
        PolarityClass::Positive
    } else if score < 0.0 {
        PolarityClass::Negative
    } else {
        PolarityClass::Neutral
    })
}

pub const DEFAULT_SUBJECTIVITY_THRESHOLD: f64 = 0.5;

/// Subjective iff strictly above `threshold`.
pub fn subjectivity_class(score: f64, threshold: f64) -> Result<SubjectivityClass> {
    if !(0.0..=1.0).contains(&score) {
        return Err(Error::Contract(format!(
            "subjectivity {score} outside [0, 1]"
        )));
    }
    Ok(if score > threshold {
        SubjectivityClass::Subjective
    } else {
        SubjectivityClass::Objective
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ClassCounts {
    pub positive: usize,
    pub neutral: usize,
    pub negative: usize,
}

impl ClassCounts {
    pub fn total(&self) -> usize {
        self.positive + self.neutral + self.negative
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ClassPercentages {
    pub positive: f64,
    pub neutral: f64,
    pub negative: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PolarityDistribution {
    pub counts: ClassCounts,
    pub percentages: ClassPercentages,
}

impl PolarityDistribution {
    pub fn from_counts(counts: ClassCounts) -> Self {
        let total = counts.total();
        PolarityDistribution {
            counts,
            percentages: ClassPercentages {
                positive: percent_2dp(counts.positive, total),
                neutral: percent_2dp(counts.neutral, total),
                negative: percent_2dp(counts.negative, total),
            },
        }
    }
}

pub fn distribution<'a>(
    labels: impl IntoIterator<Item = &'a PolarityClass>,
) -> PolarityDistribution {
    let mut counts = ClassCounts::default();
    for label in labels {
        match label {
            PolarityClass::Positive => counts.positive += 1,
            PolarityClass::Neutral => counts.neutral += 1,
            PolarityClass::Negative => counts.negative += 1,
        }
    }
    PolarityDistribution::from_counts(counts)
}
