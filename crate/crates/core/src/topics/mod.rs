//! LDA topic extraction over tweet groups.

mod corpus;
mod lda;
mod report;

pub use corpus::{build_corpus, Corpus};
pub use lda::{
    doc_topics, lda_fit, top_keywords, GibbsSampler, LdaParams, TopicModel, DEFAULT_ALPHA,
    DEFAULT_BETA, DEFAULT_ITERATIONS, DEFAULT_TOPICS, DEFAULT_TOP_WORDS,
};
pub use report::{parse_topic_labels, topic_report, TopicEntry, TopicReport};
