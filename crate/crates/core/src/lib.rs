//! Election tweet analytics: ingestion, preprocessing, lexicon and Naive
//! Bayes sentiment, actor mention detection, time-bucketed aggregation and
//! LDA topics.

pub mod actors;
pub mod analytics;
pub mod error;
pub mod ingest;
pub mod preprocess;
pub mod sentiment;
pub mod topics;
mod util;

pub use error::{Error, Result};
pub use util::{mean, percent_2dp};
