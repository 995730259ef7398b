//! Unigram spelling corrector: the most frequent dictionary word within two
//! edits (deletion, transposition, substitution, insertion).

use std::collections::{BTreeSet, HashMap};
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default)]
pub struct Dictionary {
    counts: HashMap<String, u64>,
    /// Characters used to generate insertions and substitutions.
    alphabet: Vec<char>,
}

impl Dictionary {
    pub fn from_counts(counts: impl IntoIterator<Item = (String, u64)>) -> Self {
        let mut dict = Dictionary::default();
        for (w, c) in counts {
            *dict.counts.entry(w.to_lowercase()).or_default() += c;
        }
        dict.rebuild_alphabet();
        dict
    }

    fn rebuild_alphabet(&mut self) {
        let chars: BTreeSet<char> = self.counts.keys().flat_map(|w| w.chars()).collect();
        self.alphabet = chars.into_iter().collect();
    }

    /// Reads `word<TAB>count` lines. Blank lines and `#` comments are skipped;
    /// any other malformed line is an error.
    pub fn read<R: Read>(input: R) -> Result<Self> {
        let mut pairs = Vec::new();
        for (n, line) in BufReader::new(input).lines().enumerate() {
            let line = line?;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (word, count) = line.split_once('\t').ok_or_else(|| {
                Error::Config(format!(
                    "dictionary line {}: expected word<TAB>count",
                    n + 1
                ))
            })?;
            let count: u64 = count.trim().parse().map_err(|_| {
                Error::Config(format!("dictionary line {}: bad count '{count}'", n + 1))
            })?;
            pairs.push((word.trim().to_string(), count));
        }
        Ok(Dictionary::from_counts(pairs))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read(file)
    }

    /// Marks words as known without changing any count ranking.
    pub fn protect(&mut self, words: impl IntoIterator<Item = String>) {
        for w in words {
            self.counts.entry(w.to_lowercase()).or_insert(0);
        }
        self.rebuild_alphabet();
    }

    pub fn contains(&self, word: &str) -> bool {
        self.counts.contains_key(word)
    }

    pub fn count(&self, word: &str) -> Option<u64> {
        self.counts.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    fn edits1(&self, word: &[char]) -> Vec<Vec<char>> {
        let n = word.len();
        let mut out = Vec::with_capacity(n * (2 * self.alphabet.len() + 2) + self.alphabet.len());
        for i in 0..n {
            let mut w = word.to_vec();
            w.remove(i);
            out.push(w);
        }
        for i in 0..n.saturating_sub(1) {
            let mut w = word.to_vec();
            w.swap(i, i + 1);
            out.push(w);
        }
        for i in 0..n {
            for &c in &self.alphabet {
                if c != word[i] {
                    let mut w = word.to_vec();
                    w[i] = c;
                    out.push(w);
                }
            }
        }
        for i in 0..=n {
            for &c in &self.alphabet {
                let mut w = word.to_vec();
                w.insert(i, c);
                out.push(w);
            }
        }
        out
    }

    /// Best-ranked word: highest count, then lexicographically smallest.
    fn consider(&self, cand: &[char], best: &mut Option<(u64, String)>) {
        let word: String = cand.iter().collect();
        if let Some(&count) = self.counts.get(&word) {
            let better = match best {
                None => true,
                Some((bc, bw)) => count > *bc || (count == *bc && word < *bw),
            };
            if better {
                *best = Some((count, word));
            }
        }
    }
}

/// Returns the token itself when known, otherwise the highest-frequency
/// dictionary word within edit distance 2 (ties broken lexicographically),
/// otherwise the token unchanged.
pub fn correct_spelling(token: &str, dictionary: &Dictionary) -> String {
    if dictionary.is_empty() || dictionary.contains(token) {
        return token.to_string();
    }
    let chars: Vec<char> = token.chars().collect();
    let mut best = None;
    for e1 in dictionary.edits1(&chars) {
        dictionary.consider(&e1, &mut best);
        for e2 in dictionary.edits1(&e1) {
            dictionary.consider(&e2, &mut best);
        }
    }
    best.map_or_else(|| token.to_string(), |(_, w)| w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dict(pairs: &[(&str, u64)]) -> Dictionary {
        Dictionary::from_counts(pairs.iter().map(|(w, c)| (w.to_string(), *c)))
    }

    #[test]
    fn corrects_single_insertion() {
        let d = dict(&[("election", 50), ("elect", 5), ("selection", 3)]);
        assert_eq!(correct_spelling("electin", &d), "election");
        assert_eq!(correct_spelling("election", &d), "election");
        assert_eq!(correct_spelling("zzqqx", &d), "zzqqx");
    }

    #[test]
    fn frequency_beats_distance_and_ties_are_lexicographic() {
        // "cat" is 1 edit from "cxt", "cut" too; "coat" is 2 edits away but most frequent.
        let d = dict(&[("cat", 3), ("cut", 3), ("coat", 9)]);
        assert_eq!(correct_spelling("cxt", &d), "coat");
        let d = dict(&[("cat", 3), ("cut", 3)]);
        assert_eq!(correct_spelling("cxt", &d), "cat");
    }

    #[test]
    fn transposition_counts_as_one_edit() {
        let d = dict(&[("votes", 1)]);
        assert_eq!(correct_spelling("vtoes", &d), "votes");
        assert_eq!(correct_spelling("vtoe", &d), "votes");
        assert_eq!(correct_spelling("otvse", &d), "otvse");
    }

    #[test]
    fn empty_dictionary_is_identity() {
        let d = Dictionary::default();
        assert_eq!(correct_spelling("anything", &d), "anything");
    }

    #[test]
    fn protected_words_are_known() {
        let mut d = dict(&[("obama", 10)]);
        d.protect(["obiano".to_string()]);
        assert_eq!(correct_spelling("obiano", &d), "obiano");
        assert_eq!(d.count("obiano"), Some(0));
    }

    #[test]
    fn reads_tab_separated_counts() {
        let d = Dictionary::read("# c\nvote\t12\nwin\t3\n".as_bytes()).unwrap();
        assert_eq!(d.count("vote"), Some(12));
        assert_eq!(d.len(), 2);
        assert!(Dictionary::read("vote 12\n".as_bytes()).is_err());
    }
}
