//! Word-level polarity/subjectivity lexicon and the averaging scorer built
//! on it.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::engine::SentimentEngine;
use super::score::SentimentScore;
use crate::error::{Error, Result};
use crate::preprocess::stem;

/// Tokens before a match that are searched for a negator.
pub const NEGATION_WINDOW: usize = 2;
/// Factor applied to a negated word's polarity.
pub const NEGATION_FACTOR: f64 = -0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PatternEntry {
    pub polarity: f64,
    pub subjectivity: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LexiconReport {
    pub rows_read: usize,
    pub rows_rejected: usize,
    pub entries: usize,
}

#[derive(Debug, Clone, Default)]
pub struct PatternLexicon {
    entries: BTreeMap<String, PatternEntry>,
    /// Porter stems of lemmas, averaged over lemmas sharing a stem, so that
    /// stemmed tweet tokens still find their word.
    by_stem: HashMap<String, PatternEntry>,
}

#[derive(Debug, Deserialize)]
struct PatternRow {
    lemma: String,
    polarity: f64,
    subjectivity: f64,
}

fn average(rows: &[PatternEntry]) -> PatternEntry {
    let n = rows.len() as f64;
    PatternEntry {
        polarity: rows.iter().map(|e| e.polarity).sum::<f64>() / n,
        subjectivity: rows.iter().map(|e| e.subjectivity).sum::<f64>() / n,
    }
}

impl PatternLexicon {
    /// Builds from `(lemma, entry)` rows; duplicate lemmas are averaged.
    pub fn from_rows(rows: impl IntoIterator<Item = (String, PatternEntry)>) -> Self {
        let mut grouped: BTreeMap<String, Vec<PatternEntry>> = BTreeMap::new();
        for (lemma, e) in rows {
            grouped.entry(lemma.to_lowercase()).or_default().push(e);
        }
        let entries: BTreeMap<String, PatternEntry> = grouped
            .into_iter()
            .map(|(l, es)| (l, average(&es)))
            .collect();

        let mut stems: HashMap<String, Vec<PatternEntry>> = HashMap::new();
        for (lemma, e) in &entries {
            stems.entry(stem(lemma)).or_default().push(*e);
        }
        let by_stem = stems.into_iter().map(|(s, es)| (s, average(&es))).collect();
        PatternLexicon { entries, by_stem }
    }

    /// Reads CSV with header `lemma,polarity,subjectivity`. Rows that fail to
    /// parse or fall outside the legal ranges are counted and skipped.
    pub fn read<R: Read>(input: R) -> Result<(Self, LexiconReport)> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(input);
        let mut report = LexiconReport::default();
        let mut rows = Vec::new();
        for row in reader.deserialize::<PatternRow>() {
            report.rows_read += 1;
            match row {
                Ok(r)
                    if (-1.0..=1.0).contains(&r.polarity)
                        && (0.0..=1.0).contains(&r.subjectivity)
                        && !r.lemma.is_empty() =>
                {
                    rows.push((
                        r.lemma,
                        PatternEntry {
                            polarity: r.polarity,
                            subjectivity: r.subjectivity,
                        },
                    ))
                }
                Ok(_) => report.rows_rejected += 1,
                Err(e) if e.is_io_error() => return Err(e.into()),
                Err(_) => report.rows_rejected += 1,
            }
        }
        let lex = PatternLexicon::from_rows(rows);
        report.entries = lex.len();
        Ok((lex, report))
    }

    pub fn load(path: &Path) -> Result<(Self, LexiconReport)> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read(file)
    }

    /// Exact lemma first, then the stem index.
    pub fn lookup(&self, token: &str) -> Option<PatternEntry> {
        self.entries
            .get(token)
            .or_else(|| self.by_stem.get(token))
            .copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Mean polarity and subjectivity over the tokens found in the lexicon. A
/// negator among the two preceding tokens flips and halves a word's
/// polarity. Nothing matched scores (0, 0).
pub fn pattern_score(
    tokens: &[String],
    lexicon: &PatternLexicon,
    negators: &BTreeSet<String>,
) -> SentimentScore {
    let mut pol = 0.0;
    let mut subj = 0.0;
    let mut n = 0usize;
    for (i, tok) in tokens.iter().enumerate() {
        let Some(entry) = lexicon.lookup(tok) else {
            continue;
        };
        let negated = tokens[i.saturating_sub(NEGATION_WINDOW)..i]
            .iter()
            .any(|t| negators.contains(t));
        pol += if negated {
            entry.polarity * NEGATION_FACTOR
        } else {
            entry.polarity
        };
        subj += entry.subjectivity;
        n += 1;
    }
    if n == 0 {
        return SentimentScore::default();
    }
    SentimentScore::clamped(pol / n as f64, subj / n as f64)
}

pub struct PatternEngine {
    lexicon: PatternLexicon,
    negators: BTreeSet<String>,
}

impl PatternEngine {
    /// Negators are matched in both surface and stemmed form, since tweet
    /// tokens may be stems.
    pub fn new(lexicon: PatternLexicon, negators: BTreeSet<String>) -> Self {
        let negators = negators
            .iter()
            .map(|n| stem(n))
            .chain(negators.iter().cloned())
            .collect();
        PatternEngine { lexicon, negators }
    }
}

impl SentimentEngine for PatternEngine {
    fn name(&self) -> &str {
        "pattern"
    }

    fn score(&self, tokens: &[String]) -> SentimentScore {
        pattern_score(tokens, &self.lexicon, &self.negators)
    }
}
