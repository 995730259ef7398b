use std::collections::HashMap;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use super::buckets::{TimeBucket, BUCKET_COUNT};
use crate::actors::ActorSet;
use crate::preprocess::{stem, ProcessedTweet, StopwordSet};

/// Ranked `(term, count)` rows: counts descending, ties lexicographic.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct FrequencyTable {
    pub rows: Vec<(String, usize)>,
}

impl FrequencyTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, term: &str) -> Option<usize> {
        self.rows.iter().find(|(t, _)| t == term).map(|(_, c)| *c)
    }
}

/// Counts tokens across a group, drops excluded terms, keeps the `top_n`
/// most frequent.
pub fn term_frequencies<'a, I>(groups: I, exclusions: &StopwordSet, top_n: usize) -> FrequencyTable
where
    I: IntoIterator<Item = &'a [String]>,
{
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for tokens in groups {
        for t in tokens {
            *counts.entry(t.as_str()).or_default() += 1;
        }
    }
    let mut rows: Vec<(String, usize)> = counts
        .into_iter()
        .filter(|(t, _)| !exclusions.contains(t))
        .map(|(t, c)| (t.to_string(), c))
        .collect();
    rows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    rows.truncate(top_n);
    FrequencyTable { rows }
}

/// `base` plus every actor alias word and its stem, with the extra layer
/// switched on.
pub fn actor_exclusions(actors: &ActorSet, base: StopwordSet) -> StopwordSet {
    let words = actors.all_alias_words();
    let stems: Vec<String> = words.iter().map(|w| stem(w)).collect();
    base.with_extra(words.into_iter().chain(stems))
}

/// Words co-occurring with one actor, over every tweet that mentions it.
/// Actor names are always excluded on top of `exclusions`.
pub fn cooccurrence_cloud(
    tweets: &[ProcessedTweet],
    actors: &ActorSet,
    actor: &str,
    exclusions: &StopwordSet,
    top_n: usize,
) -> FrequencyTable {
    let exclusions = actor_exclusions(actors, exclusions.clone());
    let group = tweets
        .iter()
        .filter(|t| actors.match_actors(t).contains(actor))
        .map(|t| t.tokens.as_slice());
    term_frequencies(group, &exclusions, top_n)
}

/// Dense (scope actor x bucket) grid of frequency tables over sole-mention
/// tweets. A cell with no tweets is `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyHeatmap {
    pub actors: Vec<String>,
    pub cells: Vec<[Option<FrequencyTable>; BUCKET_COUNT]>,
}

impl FrequencyHeatmap {
    pub fn cell(&self, actor: &str, bucket: TimeBucket) -> Option<&FrequencyTable> {
        let row = self.actors.iter().position(|a| a == actor)?;
        self.cells[row][bucket.index()].as_ref()
    }
}

/// Serializes as `{actor: {bucket: [[term, count], ...] | null}}` in scope
/// and bucket order.
impl Serialize for FrequencyHeatmap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        struct Row<'a>(&'a [Option<FrequencyTable>; BUCKET_COUNT]);
        impl Serialize for Row<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(BUCKET_COUNT))?;
                for b in TimeBucket::all() {
                    m.serialize_entry(b.label(), &self.0[b.index()])?;
                }
                m.end()
            }
        }
        let mut m = s.serialize_map(Some(self.actors.len()))?;
        for (a, row) in self.actors.iter().zip(&self.cells) {
            m.serialize_entry(a, &Row(row))?;
        }
        m.end()
    }
}

pub fn frequency_heatmap(
    tweets: &[ProcessedTweet],
    actors: &ActorSet,
    scope: &[String],
    exclusions: &StopwordSet,
    top_n: usize,
) -> FrequencyHeatmap {
    let mut groups: Vec<[Vec<&[String]>; BUCKET_COUNT]> =
        scope.iter().map(|_| Default::default()).collect();
    for t in tweets {
        let Some(bucket) = t.bucket else { continue };
        let Some(actor) = actors.sole_mention(&actors.match_actors(t), scope) else {
            continue;
        };
        if let Some(row) = scope.iter().position(|a| *a == actor) {
            groups[row][bucket.index()].push(&t.tokens);
        }
    }
    let cells = groups
        .into_iter()
        .map(|row| {
            row.map(|group| (!group.is_empty()).then(|| term_frequencies(group, exclusions, top_n)))
        })
        .collect();
    FrequencyHeatmap {
        actors: scope.to_vec(),
        cells,
    }
}
