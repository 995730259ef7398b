//! The tweet preprocessing pipeline:
//! clean -> tokenize -> spell-correct -> stopword filter -> stem,
//! with retweets and empty results rejected.

mod spell;
mod stem;
mod stopwords;
mod text;

use std::collections::HashMap;

use chrono::{DateTime, FixedOffset};
use serde::{Deserialize, Serialize};

pub use spell::{correct_spelling, Dictionary};
pub use stem::stem;
pub use stopwords::{load_word_list, parse_word_list, StopwordSet};
pub use text::{clean, has_retweet_prefix, surface_tokens, tokenize};

use crate::analytics::{bucket_of, TimeBucket};
use crate::ingest::TweetRecord;

/// Tokens shorter than this are never spell-corrected.
pub const MIN_CORRECTION_LEN: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcessedTweet {
    pub record_id: String,
    pub created_at: DateTime<FixedOffset>,
    pub bucket: Option<TimeBucket>,
    /// Final lowercase stems.
    pub tokens: Vec<String>,
    /// Cleaned tokens before correction, filtering and stemming; actor
    /// matching runs on these.
    pub surface_tokens: Vec<String>,
    pub raw_token_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rejection {
    Retweet,
    Empty,
}

#[derive(Debug, Clone, Default)]
pub struct PipelineConfig {
    pub stopwords: StopwordSet,
    /// `None` disables spell correction.
    pub dictionary: Option<Dictionary>,
    pub stem: bool,
}

impl PipelineConfig {
    pub fn new(stopwords: StopwordSet) -> Self {
        PipelineConfig {
            stopwords,
            dictionary: None,
            stem: true,
        }
    }

    pub fn with_dictionary(mut self, dictionary: Dictionary) -> Self {
        self.dictionary = Some(dictionary);
        self
    }

    pub fn without_stemming(mut self) -> Self {
        self.stem = false;
        self
    }
}

pub fn is_retweet(record: &TweetRecord) -> bool {
    record.is_retweet || has_retweet_prefix(&record.text)
}

fn correctable(token: &str) -> bool {
    token.chars().count() >= MIN_CORRECTION_LEN && token.chars().all(char::is_alphabetic)
}

/// Runs the token stages on already-cleaned text. `correct` is consulted
/// only for correctable tokens.
fn process_tokens(
    surface: &[String],
    config: &PipelineConfig,
    mut correct: impl FnMut(&str) -> String,
) -> Vec<String> {
    surface
        .iter()
        .map(|t| match &config.dictionary {
            Some(d) if correctable(t) && !d.contains(t) => correct(t),
            _ => t.clone(),
        })
        .filter(|t| !config.stopwords.contains(t))
        .map(|t| if config.stem { stem(&t) } else { t })
        .filter(|t| !t.is_empty() && !config.stopwords.contains(t))
        .collect()
}

fn assemble(
    record: &TweetRecord,
    config: &PipelineConfig,
    correct: impl FnMut(&str) -> String,
) -> Result<ProcessedTweet, Rejection> {
    if is_retweet(record) {
        return Err(Rejection::Retweet);
    }
    let surface = surface_tokens(&record.text);
    let tokens = process_tokens(&surface, config, correct);
    if tokens.is_empty() {
        return Err(Rejection::Empty);
    }
    Ok(ProcessedTweet {
        record_id: record.id.clone(),
        created_at: record.created_at,
        bucket: bucket_of(record.created_at.time()),
        tokens,
        raw_token_count: surface.len(),
        surface_tokens: surface,
    })
}

pub fn preprocess_pipeline(
    record: &TweetRecord,
    config: &PipelineConfig,
) -> Result<ProcessedTweet, Rejection> {
    assemble(record, config, |t| {
        correct_spelling(t, config.dictionary.as_ref().expect("checked by caller"))
    })
}

/// Token stages applied to free text (no retweet or emptiness checks), for
/// corpora that are not tweet records, such as labeled training text.
pub fn preprocess_text(text: &str, config: &PipelineConfig) -> Vec<String> {
    process_tokens(&surface_tokens(text), config, |t| {
        correct_spelling(t, config.dictionary.as_ref().expect("checked by caller"))
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PreprocessReport {
    pub input: usize,
    pub kept: usize,
    pub retweets: usize,
    pub empty: usize,
}

/// Runs the pipeline over a batch, memoizing spelling corrections.
pub fn preprocess_all(
    records: &[TweetRecord],
    config: &PipelineConfig,
) -> (Vec<ProcessedTweet>, PreprocessReport) {
    let mut cache: HashMap<String, String> = HashMap::new();
    let mut report = PreprocessReport {
        input: records.len(),
        ..Default::default()
    };
    let mut kept = Vec::new();
    for rec in records {
        let outcome = assemble(rec, config, |t| {
            cache
                .entry(t.to_string())
                .or_insert_with(|| {
                    correct_spelling(t, config.dictionary.as_ref().expect("checked by caller"))
                })
                .clone()
        });
        match outcome {
            Ok(t) => kept.push(t),
            Err(Rejection::Retweet) => report.retweets += 1,
            Err(Rejection::Empty) => report.empty += 1,
        }
    }
    report.kept = kept.len();
    (kept, report)
}
