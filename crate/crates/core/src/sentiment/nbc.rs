//! Multinomial Naive Bayes over token lists with additive smoothing.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbcModel {
    /// P(label).
    pub class_priors: BTreeMap<String, f64>,
    /// P(word | label) for every vocabulary word.
    pub word_likelihoods: BTreeMap<String, BTreeMap<String, f64>>,
    pub vocabulary: BTreeSet<String>,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prediction {
    pub label: String,
    pub posterior: f64,
    /// Posterior of every label, summing to 1.
    pub posteriors: BTreeMap<String, f64>,
}

/// Trains on `(label, tokens)` documents. Needs at least two labels and a
/// positive `alpha`.
pub fn nbc_train(docs: &[(String, Vec<String>)], alpha: f64) -> Result<NbcModel> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Training(format!(
            "smoothing alpha must be > 0, got {alpha}"
        )));
    }
    if docs.is_empty() {
        return Err(Error::Training("empty training corpus".into()));
    }

    let mut doc_counts: BTreeMap<&str, usize> = BTreeMap::new();
    let mut word_counts: BTreeMap<&str, BTreeMap<&str, usize>> = BTreeMap::new();
    let mut token_totals: BTreeMap<&str, usize> = BTreeMap::new();
    let mut vocabulary = BTreeSet::new();
    for (label, tokens) in docs {
        *doc_counts.entry(label).or_default() += 1;
        let wc = word_counts.entry(label).or_default();
        for t in tokens {
            *wc.entry(t).or_default() += 1;
            vocabulary.insert(t.clone());
        }
        *token_totals.entry(label).or_default() += tokens.len();
    }
    if doc_counts.len() < 2 {
        return Err(Error::Training(format!(
            "need at least two labels, found {}",
            doc_counts.len()
        )));
    }

    let total_docs = docs.len() as f64;
    let v = vocabulary.len() as f64;
    let class_priors = doc_counts
        .iter()
        .map(|(l, &c)| (l.to_string(), c as f64 / total_docs))
        .collect();
    let word_likelihoods = doc_counts
        .keys()
        .map(|&label| {
            let denom = token_totals[label] as f64 + alpha * v;
            let wc = &word_counts[label];
            let probs = vocabulary
                .iter()
                .map(|w| {
                    let c = wc.get(w.as_str()).copied().unwrap_or(0) as f64;
                    (w.clone(), (c + alpha) / denom)
                })
                .collect();
            (label.to_string(), probs)
        })
        .collect();

    Ok(NbcModel {
        class_priors,
        word_likelihoods,
        vocabulary,
        alpha,
    })
}

impl NbcModel {
    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.class_priors.keys().map(String::as_str)
    }

    /// Log P(label) + sum of log P(word | label); unknown words skipped.
    pub fn log_scores(&self, tokens: &[String]) -> BTreeMap<String, f64> {
        self.class_priors
            .iter()
            .map(|(label, prior)| {
                let likes = &self.word_likelihoods[label];
                let s = tokens
                    .iter()
                    .filter_map(|t| likes.get(t))
                    .map(|p| p.ln())
                    .sum::<f64>();
                (label.clone(), prior.ln() + s)
            })
            .collect()
    }

    pub fn classify(&self, tokens: &[String]) -> Prediction {
        nbc_classify(self, tokens)
    }
}

/// Most probable label with its normalized posterior. Ties go to the
/// lexicographically smallest label.
pub fn nbc_classify(model: &NbcModel, tokens: &[String]) -> Prediction {
    let scores = model.log_scores(tokens);
    let max = scores.values().copied().fold(f64::NEG_INFINITY, f64::max);
    let z: f64 = scores.values().map(|s| (s - max).exp()).sum();
    let posteriors: BTreeMap<String, f64> = scores
        .iter()
        .map(|(l, s)| (l.clone(), (s - max).exp() / z))
        .collect();
    // BTreeMap iterates in label order, so the first maximum wins ties.
    let (label, _) = scores
        .iter()
        .fold(None::<(&String, f64)>, |best, (l, &s)| match best {
            Some((_, bs)) if bs >= s => best,
            _ => Some((l, s)),
        })
        .expect("model has labels");
    Prediction {
        label: label.clone(),
        posterior: posteriors[label],
        posteriors,
    }
}

/// Reads a `label,text` CSV (header required).
pub fn read_labeled_corpus<R: Read>(input: R) -> Result<Vec<(String, String)>> {
    #[derive(Deserialize)]
    struct Row {
        label: String,
        text: String,
    }
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(input);
    reader
        .deserialize::<Row>()
        .map(|r| r.map(|r| (r.label, r.text)).map_err(Error::from))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(label: &str, text: &str) -> (String, Vec<String>) {
        (
            label.into(),
            text.split_whitespace().map(str::to_string).collect(),
        )
    }

    fn two_doc() -> NbcModel {
        nbc_train(&[doc("pos", "good win"), doc("neg", "bad loss")], 1.0).unwrap()
    }

    #[test]
    fn priors_and_likelihoods() {
        let m = two_doc();
        assert_eq!(m.class_priors["pos"], 0.5);
        assert!((m.word_likelihoods["pos"]["good"] - 2.0 / 6.0).abs() < 1e-15);
        assert!((m.word_likelihoods["pos"]["bad"] - 1.0 / 6.0).abs() < 1e-15);
        let m = nbc_train(
            &[
                doc("pos", "a"),
                doc("pos", "b"),
                doc("pos", "a b"),
                doc("neg", "c"),
            ],
            1.0,
        )
        .unwrap();
        assert_eq!(m.class_priors["pos"], 0.75);
    }

    #[test]
    fn likelihoods_normalized() {
        let m = two_doc();
        for probs in m.word_likelihoods.values() {
            let s: f64 = probs.values().sum();
            assert!((s - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn training_errors() {
        assert!(nbc_train(&[], 1.0).is_err());
        assert!(nbc_train(&[doc("pos", "a"), doc("pos", "b")], 1.0).is_err());
        assert!(nbc_train(&[doc("pos", "a"), doc("neg", "b")], 0.0).is_err());
    }

    #[test]
    fn classification() {
        let m = two_doc();
        let p = nbc_classify(&m, &["good".into(), "win".into()]);
        assert_eq!(p.label, "pos");
        // (2/6)^2 * .5 vs (1/6)^2 * .5 -> 4 / (4 + 1)
        assert!((p.posterior - 0.8).abs() < 1e-12);
    }

    #[test]
    fn prior_only_cases() {
        let m = nbc_train(&[doc("b", "x"), doc("a", "y"), doc("b", "z")], 1.0).unwrap();
        assert_eq!(nbc_classify(&m, &[]).label, "b");
        assert_eq!(nbc_classify(&m, &["unseen".into()]).label, "b");
        // equal priors: tie goes to the smaller label
        let m = two_doc();
        assert_eq!(nbc_classify(&m, &[]).label, "neg");
        assert_eq!(nbc_classify(&m, &[]).posterior, 0.5);
    }

    #[test]
    fn corpus_csv() {
        let rows =
            read_labeled_corpus("label,text\npos,\"good, win\"\nneg,bad\n".as_bytes()).unwrap();
        assert_eq!(
            rows,
            [
                ("pos".into(), "good, win".into()),
                ("neg".into(), "bad".into())
            ]
        );
    }
}
