use std::collections::BTreeMap;

use serde::Serialize;

use super::buckets::{TimeBucket, BUCKET_COUNT};
use crate::actors::ActorSet;
use crate::error::{Error, Result};
use crate::preprocess::ProcessedTweet;
use crate::sentiment::{
    polarity_class, subjectivity_class, PolarityClass, SentimentScore, SubjectivityClass,
};

pub const DEFAULT_POLARITY_SCALE: f64 = 100.0;

/// One (actor, bucket) cell. Means are `None` when the cell is empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesCell {
    pub bucket: TimeBucket,
    pub count: usize,
    pub mean_polarity_x100: Option<f64>,
    pub mean_subjectivity: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SentimentSeries {
    pub actor: String,
    pub cells: Vec<SeriesCell>,
}

impl SentimentSeries {
    pub fn cell(&self, bucket: TimeBucket) -> &SeriesCell {
        &self.cells[bucket.index()]
    }

    pub fn total_count(&self) -> usize {
        self.cells.iter().map(|c| c.count).sum()
    }
}

/// Tweet indices in canonical (timestamp, id) order, so floating-point
/// reductions do not depend on input order.
pub(crate) fn canonical_order(tweets: &[ProcessedTweet]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..tweets.len()).collect();
    idx.sort_by(|&a, &b| {
        let (ta, tb) = (&tweets[a], &tweets[b]);
        ta.created_at
            .cmp(&tb.created_at)
            .then_with(|| ta.record_id.cmp(&tb.record_id))
    });
    idx
}

pub(crate) fn check_aligned(tweets: usize, scores: usize) -> Result<()> {
    if tweets != scores {
        return Err(Error::Consistency(format!(
            "{scores} sentiment scores for {tweets} tweets"
        )));
    }
    Ok(())
}

/// Per scope actor and bucket: mean polarity (times `scale`) and mean
/// subjectivity over the tweets whose sole mention is that actor.
pub fn avg_sentiment_series(
    tweets: &[ProcessedTweet],
    scores: &[SentimentScore],
    actors: &ActorSet,
    scope: &[String],
    scale: f64,
) -> Result<Vec<SentimentSeries>> {
    check_aligned(tweets.len(), scores.len())?;
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::Config(format!(
            "polarity scale must be > 0, got {scale}"
        )));
    }

    // actor -> bucket -> (n, sum polarity, sum subjectivity)
    let mut acc: BTreeMap<&str, [(usize, f64, f64); BUCKET_COUNT]> = scope
        .iter()
        .map(|a| (a.as_str(), [(0, 0.0, 0.0); BUCKET_COUNT]))
        .collect();
    for i in canonical_order(tweets) {
        let tweet = &tweets[i];
        let Some(bucket) = tweet.bucket else { continue };
        let Some(actor) = actors.sole_mention(&actors.match_actors(tweet), scope) else {
            continue;
        };
        if let Some(cells) = acc.get_mut(actor.as_str()) {
            let cell = &mut cells[bucket.index()];
            cell.0 += 1;
            cell.1 += scores[i].polarity();
            cell.2 += scores[i].subjectivity();
        }
    }

    Ok(scope
        .iter()
        .map(|actor| {
            let cells = &acc[actor.as_str()];
            SentimentSeries {
                actor: actor.clone(),
                cells: TimeBucket::all()
                    .map(|b| {
                        let (n, pol, subj) = cells[b.index()];
                        let mean = |s: f64| (n > 0).then(|| s / n as f64);
                        SeriesCell {
                            bucket: b,
                            count: n,
                            mean_polarity_x100: mean(pol).map(|m| m * scale),
                            mean_subjectivity: mean(subj),
                        }
                    })
                    .collect(),
            }
        })
        .collect())
}

/// Mean unscaled polarity over tweets matching each combined actor (both
/// candidate and party named). `None` when no tweet matches.
pub fn combined_avg_polarity(
    tweets: &[ProcessedTweet],
    scores: &[SentimentScore],
    actors: &ActorSet,
) -> Result<Vec<(String, Option<f64>)>> {
    check_aligned(tweets.len(), scores.len())?;
    let matched: Vec<_> = tweets.iter().map(|t| actors.match_actors(t)).collect();
    let order = canonical_order(tweets);
    Ok(actors
        .combined()
        .map(|a| {
            let (n, sum) = order
                .iter()
                .filter(|&&i| matched[i].contains(&a.id))
                .fold((0usize, 0.0), |(n, s), &i| {
                    (n + 1, s + scores[i].polarity())
                });
            (a.id.clone(), (n > 0).then(|| sum / n as f64))
        })
        .collect())
}

/// Polarity and subjectivity class counts for one group of tweets.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ActorSentimentCounts {
    pub actor: String,
    pub tweets: usize,
    pub positive: usize,
    pub neutral: usize,
    pub negative: usize,
    pub subjective: usize,
    pub objective: usize,
}

/// Class counts per scope actor over its sole-mention tweets, plus a
/// corpus-wide row keyed `"all"`.
pub fn actor_sentiment_counts(
    tweets: &[ProcessedTweet],
    scores: &[SentimentScore],
    actors: &ActorSet,
    scope: &[String],
    subjectivity_threshold: f64,
) -> Result<Vec<ActorSentimentCounts>> {
    check_aligned(tweets.len(), scores.len())?;
    let mut rows: Vec<ActorSentimentCounts> = std::iter::once("all")
        .chain(scope.iter().map(String::as_str))
        .map(|a| ActorSentimentCounts {
            actor: a.to_string(),
            ..Default::default()
        })
        .collect();
    for (tweet, score) in tweets.iter().zip(scores) {
        let pol = polarity_class(score.polarity())?;
        let subj = subjectivity_class(score.subjectivity(), subjectivity_threshold)?;
        let sole = actors.sole_mention(&actors.match_actors(tweet), scope);
        let targets = std::iter::once(0).chain(
            sole.and_then(|s| scope.iter().position(|a| *a == s))
                .map(|p| p + 1),
        );
        for r in targets {
            let row = &mut rows[r];
            row.tweets += 1;
            match pol {
                PolarityClass::Positive => row.positive += 1,
                PolarityClass::Neutral => row.neutral += 1,
                PolarityClass::Negative => row.negative += 1,
            }
            match subj {
                SubjectivityClass::Subjective => row.subjective += 1,
                SubjectivityClass::Objective => row.objective += 1,
            }
        }
    }
    Ok(rows)
}
