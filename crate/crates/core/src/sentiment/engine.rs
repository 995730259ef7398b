use std::collections::BTreeMap;

use serde::Serialize;

use super::score::{distribution, polarity_class, PolarityDistribution, SentimentScore};
use crate::error::{Error, Result};
use crate::preprocess::ProcessedTweet;

/// A per-tweet polarity/subjectivity scorer.
pub trait SentimentEngine: Send + Sync {
    /// Registry key, also used as `--engine` value.
    fn name(&self) -> &str;

    fn score(&self, tokens: &[String]) -> SentimentScore;

    /// Caveats carried into output metadata.
    fn notes(&self) -> Option<&str> {
        None
    }
}

/// Engines by name.
#[derive(Default)]
pub struct EngineRegistry {
    engines: BTreeMap<String, Box<dyn SentimentEngine>>,
}

impl EngineRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers an engine under its own name, replacing any previous one.
    pub fn register(
        &mut self,
        engine: Box<dyn SentimentEngine>,
    ) -> Option<Box<dyn SentimentEngine>> {
        let name = engine.name().to_string();
        let previous = self.engines.insert(name.clone(), engine);
        if previous.is_some() {
            log::warn!("sentiment engine '{name}' replaced");
        }
        previous
    }

    pub fn get(&self, name: &str) -> Result<&dyn SentimentEngine> {
        self.engines.get(name).map(|b| b.as_ref()).ok_or_else(|| {
            Error::Config(format!(
                "unknown sentiment engine '{name}' (available: {})",
                self.names().collect::<Vec<_>>().join(", ")
            ))
        })
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.engines.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn SentimentEngine> {
        self.engines.values().map(|b| b.as_ref())
    }

    pub fn len(&self) -> usize {
        self.engines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.engines.is_empty()
    }
}

/// Scores every tweet; the two output lists follow input order.
pub fn score_all(tweets: &[ProcessedTweet], engine: &dyn SentimentEngine) -> (Vec<f64>, Vec<f64>) {
    let mut polarity_vals = Vec::with_capacity(tweets.len());
    let mut subjectivity_vals = Vec::with_capacity(tweets.len());
    for t in tweets {
        let s = engine.score(&t.tokens);
        polarity_vals.push(s.polarity());
        subjectivity_vals.push(s.subjectivity());
    }
    (polarity_vals, subjectivity_vals)
}

pub fn score_tweets(
    tweets: &[ProcessedTweet],
    engine: &dyn SentimentEngine,
) -> Vec<SentimentScore> {
    tweets.iter().map(|t| engine.score(&t.tokens)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifierRow {
    pub engine: String,
    pub distribution: PolarityDistribution,
}

/// Polarity distribution of every registered engine over the same tweets.
pub fn compare_classifiers(
    tweets: &[ProcessedTweet],
    registry: &EngineRegistry,
) -> Result<Vec<ClassifierRow>> {
    registry
        .iter()
        .map(|engine| {
            let (pol, _) = score_all(tweets, engine);
            let classes = pol
                .into_iter()
                .map(polarity_class)
                .collect::<Result<Vec<_>>>()?;
            Ok(ClassifierRow {
                engine: engine.name().to_string(),
                distribution: distribution(&classes),
            })
        })
        .collect()
}
