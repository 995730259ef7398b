//! The shipped data files, run through the library end to end.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use electionpulse::actors::ActorSet;
use electionpulse::ingest::{parse_tweet_file, DatasetTimezone, FieldMap};
use electionpulse::preprocess::{
    load_word_list, preprocess_all, Dictionary, PipelineConfig, ProcessedTweet, StopwordSet,
};
use electionpulse::sentiment::{PatternLexicon, SenseLexicon};
use electionpulse::topics::build_corpus;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn processed() -> Vec<ProcessedTweet> {
    let (records, report) = parse_tweet_file(
        &data("tweets.jsonl"),
        &FieldMap::default(),
        DatasetTimezone::default(),
    )
    .unwrap();
    assert_eq!((report.lines_read, report.records), (50, 50));
    let actors = ActorSet::load(&data("actors.toml")).unwrap();
    let mut dict = Dictionary::load(&data("dictionary.tsv")).unwrap();
    dict.protect(actors.all_alias_words());
    dict.protect(load_word_list(&data("negators.txt")).unwrap());
    let cfg = PipelineConfig::new(StopwordSet::load(&data("stopwords.txt")).unwrap())
        .with_dictionary(dict);
    let (tweets, rep) = preprocess_all(&records, &cfg);
    assert_eq!(rep.retweets, 2);
    tweets
}

#[test]
fn corpus_vocabulary_is_the_token_set() {
    let tweets = processed();
    let corpus = build_corpus(&tweets, 1, "all").unwrap();
    let expected: BTreeSet<String> = tweets.iter().flat_map(|t| t.tokens.clone()).collect();
    assert_eq!(corpus.vocabulary, expected.into_iter().collect::<Vec<_>>());
    for (doc, t) in corpus.docs.iter().zip(&tweets) {
        let words: Vec<&str> = doc.iter().map(|&i| corpus.vocabulary[i].as_str()).collect();
        assert_eq!(words, t.tokens);
    }
}

#[test]
fn misspellings_are_corrected() {
    let tweets = processed();
    let all: BTreeSet<&str> = tweets
        .iter()
        .flat_map(|t| t.tokens.iter().map(String::as_str))
        .collect();
    assert!(!all.contains("electin") && !all.contains("reslt"));
    assert!(all.contains("elect") && all.contains("result"));
    // protected names are never "corrected"
    assert!(all.contains("obiano") && all.contains("ojukwu"));
}

#[test]
fn lexicons_load_cleanly() {
    let (p, rep) = PatternLexicon::load(&data("pattern_lexicon.csv")).unwrap();
    assert_eq!(rep.rows_rejected, 0);
    assert!(p.len() > 50);
    let (s, rep) = SenseLexicon::load(&data("swn_lexicon.txt")).unwrap();
    assert_eq!(rep.rows_rejected, 0);
    assert!(!s.is_empty());
}

#[test]
fn actor_config_is_valid() {
    let a = ActorSet::load(&data("actors.toml")).unwrap();
    assert_eq!(a.len(), 15);
    assert_eq!(a.combined().count(), 5);
}
