//! Sense-level lexicon in the SentiWordNet 3.0 tab-separated layout:
//!
//! ```text
//! # POS  ID        PosScore  NegScore  SynsetTerms             Gloss
//! a      00001740  0.125     0         able#1                  (usually ...
//! ```
//!
//! Each synset row expands to one [`SenseEntry`] per `term#rank`.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::engine::SentimentEngine;
use super::score::SentimentScore;
use crate::error::{Error, Result};
use crate::preprocess::stem;

/// Tolerance on the Pos + Neg + Obj = 1 invariant.
pub const SUM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PosTag {
    #[serde(rename = "n")]
    Noun,
    #[serde(rename = "v")]
    Verb,
    #[serde(rename = "a")]
    Adjective,
    #[serde(rename = "r")]
    Adverb,
}

impl PosTag {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "n" => Some(PosTag::Noun),
            "v" => Some(PosTag::Verb),
            "a" => Some(PosTag::Adjective),
            "r" => Some(PosTag::Adverb),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SenseEntry {
    pub lemma: String,
    pub pos_tag: PosTag,
    pub sense_rank: u32,
    pub pos_score: f64,
    pub neg_score: f64,
    pub obj_score: f64,
}

impl SenseEntry {
    fn satisfies_invariant(&self) -> bool {
        let in_unit = |v: f64| (0.0..=1.0).contains(&v);
        in_unit(self.pos_score)
            && in_unit(self.neg_score)
            && in_unit(self.obj_score)
            && (self.pos_score + self.neg_score + self.obj_score - 1.0).abs() <= SUM_TOLERANCE
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SenseLexiconReport {
    pub rows_read: usize,
    pub rows_accepted: usize,
    pub rows_rejected: usize,
    pub entries: usize,
}

/// Rank-weighted sentiment of one lemma.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WordSentiment {
    pub pos: f64,
    pub neg: f64,
    pub obj: f64,
}

#[derive(Debug, Clone, Default)]
pub struct SenseLexicon {
    by_lemma: HashMap<String, Vec<SenseEntry>>,
    by_stem: HashMap<String, Vec<SenseEntry>>,
}

fn parse_row(line: &str) -> Option<Vec<SenseEntry>> {
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() < 5 {
        return None;
    }
    let pos_tag = PosTag::parse(cols[0].trim())?;
    let pos_score: f64 = cols[2].trim().parse().ok()?;
    let neg_score: f64 = cols[3].trim().parse().ok()?;
    if !pos_score.is_finite() || !neg_score.is_finite() {
        return None;
    }
    let obj_score = 1.0 - pos_score - neg_score;

    let mut entries = Vec::new();
    for term in cols[4].split_whitespace() {
        let (lemma, rank) = term.rsplit_once('#')?;
        let sense_rank: u32 = rank.parse().ok().filter(|&r| r > 0)?;
        if lemma.is_empty() {
            return None;
        }
        entries.push(SenseEntry {
            lemma: lemma.to_lowercase(),
            pos_tag,
            sense_rank,
            pos_score,
            neg_score,
            obj_score,
        });
    }
    if entries.is_empty() || !entries[0].satisfies_invariant() {
        return None;
    }
    Some(entries)
}

impl SenseLexicon {
    pub fn from_entries(entries: impl IntoIterator<Item = SenseEntry>) -> Self {
        let mut lex = SenseLexicon::default();
        for e in entries {
            lex.by_stem
                .entry(stem(&e.lemma))
                .or_default()
                .push(e.clone());
            lex.by_lemma.entry(e.lemma.clone()).or_default().push(e);
        }
        lex
    }

    /// Parses the tab format. `#` lines and blank lines are ignored; a row
    /// that is malformed or whose scores break Pos + Neg + Obj = 1 is
    /// rejected and counted.
    pub fn read<R: Read>(input: R) -> Result<(Self, SenseLexiconReport)> {
        let mut report = SenseLexiconReport::default();
        let mut entries = Vec::new();
        for line in BufReader::new(input).lines() {
            let line = line?;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            report.rows_read += 1;
            match parse_row(line) {
                Some(es) => {
                    report.rows_accepted += 1;
                    entries.extend(es);
                }
                None => report.rows_rejected += 1,
            }
        }
        report.entries = entries.len();
        Ok((SenseLexicon::from_entries(entries), report))
    }

    pub fn load(path: &Path) -> Result<(Self, SenseLexiconReport)> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read(file)
    }

    pub fn senses(&self, lemma: &str) -> &[SenseEntry] {
        self.by_lemma
            .get(lemma)
            .or_else(|| self.by_stem.get(lemma))
            .map_or(&[], Vec::as_slice)
    }

    pub fn entries(&self) -> impl Iterator<Item = &SenseEntry> {
        self.by_lemma.values().flatten()
    }

    pub fn len(&self) -> usize {
        self.by_lemma.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.by_lemma.is_empty()
    }

    /// Average over all senses of a lemma (every part of speech), each
    /// weighted by `1 / sense_rank`.
    pub fn word_sentiment(&self, lemma: &str) -> Option<WordSentiment> {
        let senses = self.senses(lemma);
        if senses.is_empty() {
            return None;
        }
        let (mut w, mut pos, mut neg, mut obj) = (0.0, 0.0, 0.0, 0.0);
        for s in senses {
            let weight = 1.0 / s.sense_rank as f64;
            w += weight;
            pos += weight * s.pos_score;
            neg += weight * s.neg_score;
            obj += weight * s.obj_score;
        }
        Some(WordSentiment {
            pos: pos / w,
            neg: neg / w,
            obj: obj / w,
        })
    }
}

pub fn swn_word_sentiment(lexicon: &SenseLexicon, lemma: &str) -> Option<(f64, f64)> {
    lexicon.word_sentiment(lemma).map(|s| (s.pos, s.neg))
}

/// Mean of (pos - neg) over tokens found in the lexicon; 0 when none are.
pub fn swn_polarity(tokens: &[String], lexicon: &SenseLexicon) -> f64 {
    swn_score(tokens, lexicon).polarity()
}

/// Polarity as in [`swn_polarity`]; subjectivity is 1 - mean Obj over the
/// matched tokens, 0 when nothing matched.
pub fn swn_score(tokens: &[String], lexicon: &SenseLexicon) -> SentimentScore {
    let matched: Vec<WordSentiment> = tokens
        .iter()
        .filter_map(|t| lexicon.word_sentiment(t))
        .collect();
    if matched.is_empty() {
        return SentimentScore::default();
    }
    let n = matched.len() as f64;
    let pol = matched.iter().map(|s| s.pos - s.neg).sum::<f64>() / n;
    let obj = matched.iter().map(|s| s.obj).sum::<f64>() / n;
    SentimentScore::clamped(pol, 1.0 - obj)
}

pub struct SwnEngine {
    lexicon: SenseLexicon,
}

impl SwnEngine {
    pub fn new(lexicon: SenseLexicon) -> Self {
        SwnEngine { lexicon }
    }
}

impl SentimentEngine for SwnEngine {
    fn name(&self) -> &str {
        "swn"
    }

    fn score(&self, tokens: &[String]) -> SentimentScore {
        swn_score(tokens, &self.lexicon)
    }

    fn notes(&self) -> Option<&str> {
        Some("subjectivity derived as 1 - mean objective score; senses of all parts of speech merged")
    }
}
