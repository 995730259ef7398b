//! Per-tweet sentiment: score types, the two lexicon engines behind a
//! common [`SentimentEngine`] trait, and a Naive Bayes classifier.

mod engine;
mod nbc;
mod pattern;
mod score;
mod swn;

pub use engine::{
    compare_classifiers, score_all, score_tweets, ClassifierRow, EngineRegistry, SentimentEngine,
};
pub use nbc::{nbc_classify, nbc_train, read_labeled_corpus, NbcModel, Prediction};
pub use pattern::{
    pattern_score, LexiconReport, PatternEngine, PatternEntry, PatternLexicon, NEGATION_FACTOR,
    NEGATION_WINDOW,
};
pub use score::{
    distribution, polarity_class, subjectivity_class, ClassCounts, ClassPercentages, PolarityClass,
    PolarityDistribution, SentimentScore, SubjectivityClass, DEFAULT_SUBJECTIVITY_THRESHOLD,
};
pub use swn::{
    swn_polarity, swn_score, swn_word_sentiment, PosTag, SenseEntry, SenseLexicon,
    SenseLexiconReport, SwnEngine, WordSentiment, SUM_TOLERANCE,
};

/// The bundled negator list.
pub fn english_negators() -> std::collections::BTreeSet<String> {
    crate::preprocess::parse_word_list(include_str!("english_negators.txt"))
}

/// Registry holding the pattern and sense-lexicon engines.
pub fn default_registry(
    pattern: PatternLexicon,
    negators: std::collections::BTreeSet<String>,
    senses: SenseLexicon,
) -> EngineRegistry {
    let mut reg = EngineRegistry::new();
    reg.register(Box::new(PatternEngine::new(pattern, negators)));
    reg.register(Box::new(SwnEngine::new(senses)));
    reg
}
