use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::preprocess::ProcessedTweet;

/// Documents as token-id sequences over a sorted vocabulary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Corpus {
    pub vocabulary: Vec<String>,
    pub docs: Vec<Vec<usize>>,
    /// Source tweet id (or caller label) of each kept doc.
    pub doc_ids: Vec<String>,
    /// Group the corpus was built from, e.g. an actor id.
    pub provenance: String,
    /// Docs dropped for being shorter than the minimum length.
    pub dropped: usize,
}

impl Corpus {
    /// Builds from `(id, tokens)` pairs, dropping docs shorter than
    /// `min_doc_len` (at least 1, so no doc is empty).
    pub fn from_token_docs<'a, I>(docs: I, min_doc_len: usize, provenance: &str) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a [String])>,
    {
        let min_len = min_doc_len.max(1);
        let mut kept: Vec<(&str, &[String])> = Vec::new();
        let mut dropped = 0;
        for (id, toks) in docs {
            if toks.len() >= min_len {
                kept.push((id, toks));
            } else {
                dropped += 1;
            }
        }
        if kept.is_empty() {
            return Err(Error::EmptyCorpus(format!(
                "no document in '{provenance}' has at least {min_len} tokens ({dropped} dropped)"
            )));
        }
        let vocabulary: Vec<String> = kept
            .iter()
            .flat_map(|(_, t)| t.iter().cloned())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let ids: HashMap<&str, usize> = vocabulary
            .iter()
            .enumerate()
            .map(|(i, w)| (w.as_str(), i))
            .collect();
        let docs = kept
            .iter()
            .map(|(_, t)| t.iter().map(|w| ids[w.as_str()]).collect())
            .collect();
        Ok(Corpus {
            doc_ids: kept.iter().map(|(id, _)| id.to_string()).collect(),
            vocabulary,
            docs,
            provenance: provenance.to_string(),
            dropped,
        })
    }

    pub fn vocab_size(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn num_docs(&self) -> usize {
        self.docs.len()
    }

    pub fn num_tokens(&self) -> usize {
        self.docs.iter().map(Vec::len).sum()
    }
}

/// Corpus over the final tokens of a tweet group.
pub fn build_corpus(
    tweets: &[ProcessedTweet],
    min_doc_len: usize,
    provenance: &str,
) -> Result<Corpus> {
    Corpus::from_token_docs(
        tweets
            .iter()
            .map(|t| (t.record_id.as_str(), t.tokens.as_slice())),
        min_doc_len,
        provenance,
    )
}
