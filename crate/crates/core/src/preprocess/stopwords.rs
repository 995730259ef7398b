use std::collections::BTreeSet;
use std::path::Path;

use crate::error::{Error, Result};

const ENGLISH: &str = include_str!("english_stopwords.txt");

/// Reads one word per line; blank lines and `#` comments are ignored.
pub fn parse_word_list(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect()
}

pub fn load_word_list(path: &Path) -> Result<BTreeSet<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(parse_word_list(&text))
}

/// Base function words plus an optional extra layer (actor and party names)
/// that is only consulted when enabled.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StopwordSet {
    base: BTreeSet<String>,
    extra: BTreeSet<String>,
    use_extra: bool,
}

impl StopwordSet {
    pub fn new(base: impl IntoIterator<Item = String>) -> Self {
        StopwordSet {
            base: base.into_iter().map(|w| w.to_lowercase()).collect(),
            ..Default::default()
        }
    }

    /// The bundled English list.
    pub fn english() -> Self {
        StopwordSet::new(parse_word_list(ENGLISH))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(StopwordSet::new(load_word_list(path)?))
    }

    /// Adds words to the extra layer and switches it on.
    pub fn with_extra(mut self, words: impl IntoIterator<Item = String>) -> Self {
        self.extra
            .extend(words.into_iter().map(|w| w.to_lowercase()));
        self.use_extra = true;
        self
    }

    pub fn set_extra_enabled(&mut self, enabled: bool) {
        self.use_extra = enabled;
    }

    pub fn extra_enabled(&self) -> bool {
        self.use_extra
    }

    pub fn contains(&self, word: &str) -> bool {
        let w = word.to_lowercase();
        self.base.contains(&w) || (self.use_extra && self.extra.contains(&w))
    }

    pub fn len(&self) -> usize {
        self.base.len() + if self.use_extra { self.extra.len() } else { 0 }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
