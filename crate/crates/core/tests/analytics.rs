//! Series and heatmap cells against per-cell brute-force recomputation.

use std::collections::BTreeMap;

use chrono::{DateTime, Duration, FixedOffset, NaiveTime, Timelike};
use electionpulse::actors::ActorSet;
use electionpulse::analytics::{
    avg_sentiment_series, bucket_of, frequency_heatmap, term_frequencies, TimeBucket,
};
use electionpulse::preprocess::{surface_tokens, ProcessedTweet, StopwordSet};
use electionpulse::sentiment::SentimentScore;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ACTORS: &str = r#"
[[actor]]
id = "obiano"
kind = "candidate"
aliases = ["obiano"]

[[actor]]
id = "apga"
kind = "party"
aliases = ["apga"]

[[actor]]
id = "obiano_apga"
kind = "combined"
components = ["obiano", "apga"]

[[actor]]
id = "nwoye"
kind = "candidate"
aliases = ["nwoye"]

[[actor]]
id = "pdp"
kind = "party"
aliases = ["pdp"]
"#;

const WORDS: &[&str] = &[
    "vote", "card", "reader", "fail", "peace", "rig", "win", "calm", "result", "turnout", "ojukwu",
];
const NAMES: &[&str] = &["obiano", "apga", "nwoye", "pdp"];

fn fixture(n: usize, seed: u64) -> (Vec<ProcessedTweet>, Vec<SentimentScore>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start: DateTime<FixedOffset> =
        DateTime::parse_from_rfc3339("2017-11-18T00:00:00+01:00").unwrap();
    let mut tweets = Vec::new();
    let mut scores = Vec::new();
    for i in 0..n {
        let mut words: Vec<&str> = (0..rng.gen_range(1..6))
            .map(|_| WORDS[rng.gen_range(0..WORDS.len())])
            .collect();
        for _ in 0..rng.gen_range(0..3) {
            words.insert(
                rng.gen_range(0..=words.len()),
                NAMES[rng.gen_range(0..NAMES.len())],
            );
        }
        let text = words.join(" ");
        let created_at = start + Duration::seconds(rng.gen_range(0..86_400));
        let tokens = surface_tokens(&text);
        tweets.push(ProcessedTweet {
            record_id: format!("{i:04}"),
            created_at,
            bucket: bucket_of(created_at.time()),
            raw_token_count: tokens.len(),
            surface_tokens: tokens.clone(),
            tokens,
        });
        scores.push(
            SentimentScore::new(rng.gen_range(-1.0..=1.0), rng.gen_range(0.0..=1.0)).unwrap(),
        );
    }
    (tweets, scores)
}

/// Brute-force sole-mention rule, written from the definition: the scope
/// actors named in the tweet, where a candidate named with their own party
/// counts only as the combined actor.
fn sole(t: &ProcessedTweet, scope: &[&str]) -> Option<String> {
    let has = |w: &str| t.surface_tokens.iter().any(|x| x == w);
    let pair = has("obiano") && has("apga");
    let named: Vec<&str> = scope
        .iter()
        .copied()
        .filter(|&a| match a {
            "obiano_apga" => pair,
            "obiano" | "apga" => has(a) && !pair,
            _ => has(a),
        })
        .collect();
    (named.len() == 1).then(|| named[0].to_string())
}

fn manual_bucket(t: NaiveTime) -> Option<usize> {
    let h = t.hour() as usize;
    if h < 6 {
        None
    } else if h >= 20 {
        Some(7)
    } else {
        Some((h - 6) / 2)
    }
}

#[test]
fn series_and_heatmap_are_compositional() {
    let (tweets, scores) = fixture(200, 42);
    let actors = ActorSet::from_toml_str(ACTORS).unwrap();
    let scope_ids = ["obiano", "nwoye", "obiano_apga"];
    let scope: Vec<String> = scope_ids.iter().map(|s| s.to_string()).collect();
    let series = avg_sentiment_series(&tweets, &scores, &actors, &scope, 100.0).unwrap();
    let stop = StopwordSet::default();
    let heat = frequency_heatmap(&tweets, &actors, &scope, &stop, 5);

    let mut cells: BTreeMap<(String, usize), Vec<usize>> = BTreeMap::new();
    for (i, t) in tweets.iter().enumerate() {
        if let (Some(a), Some(b)) = (sole(t, &scope_ids), manual_bucket(t.created_at.time())) {
            cells.entry((a, b)).or_default().push(i);
        }
    }
    let mut nonempty = 0;
    for (ai, a) in scope_ids.iter().enumerate() {
        let mut per_actor = 0;
        for b in TimeBucket::all() {
            let idx = cells
                .get(&(a.to_string(), b.index()))
                .cloned()
                .unwrap_or_default();
            let cell = series[ai].cell(b);
            assert_eq!(cell.count, idx.len(), "{a} {b}");
            per_actor += cell.count;
            if idx.is_empty() {
                assert_eq!(cell.mean_polarity_x100, None);
                assert_eq!(cell.mean_subjectivity, None);
                assert!(heat.cell(a, b).is_none());
                continue;
            }
            nonempty += 1;
            let n = idx.len() as f64;
            let pol = idx.iter().map(|&i| scores[i].polarity()).sum::<f64>() / n * 100.0;
            let subj = idx.iter().map(|&i| scores[i].subjectivity()).sum::<f64>() / n;
            assert!((cell.mean_polarity_x100.unwrap() - pol).abs() < 1e-9);
            assert!((cell.mean_subjectivity.unwrap() - subj).abs() < 1e-9);

            let direct =
                term_frequencies(idx.iter().map(|&i| tweets[i].tokens.as_slice()), &stop, 5);
            assert_eq!(heat.cell(a, b).unwrap(), &direct);
        }
        let total = tweets
            .iter()
            .filter(|t| t.bucket.is_some() && sole(t, &scope_ids).as_deref() == Some(*a))
            .count();
        assert_eq!(per_actor, total);
    }
    assert!(nonempty >= 10, "fixture too sparse: {nonempty} cells");
}

#[test]
fn ranking_unchanged_by_scale() {
    let (tweets, scores) = fixture(200, 7);
    let actors = ActorSet::from_toml_str(ACTORS).unwrap();
    let scope: Vec<String> = ["obiano", "nwoye", "pdp"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let scaled = avg_sentiment_series(&tweets, &scores, &actors, &scope, 100.0).unwrap();
    let unit = avg_sentiment_series(&tweets, &scores, &actors, &scope, 1.0).unwrap();
    for b in TimeBucket::all() {
        let order = |s: &[electionpulse::analytics::SentimentSeries]| {
            let mut v: Vec<(usize, f64)> = s
                .iter()
                .enumerate()
                .filter_map(|(i, x)| x.cell(b).mean_polarity_x100.map(|m| (i, m)))
                .collect();
            v.sort_by(|x, y| x.1.total_cmp(&y.1).then(x.0.cmp(&y.0)));
            v.into_iter().map(|x| x.0).collect::<Vec<_>>()
        };
        assert_eq!(order(&scaled), order(&unit));
    }
}

#[test]
fn buckets_partition_in_range_tweets() {
    let (tweets, _) = fixture(500, 3);
    let in_range = tweets
        .iter()
        .filter(|t| manual_bucket(t.created_at.time()).is_some())
        .count();
    let per_bucket: usize = TimeBucket::all()
        .map(|b| tweets.iter().filter(|t| t.bucket == Some(b)).count())
        .sum();
    assert_eq!(per_bucket, in_range);
    for t in &tweets {
        assert_eq!(
            t.bucket.map(|b| b.index()),
            manual_bucket(t.created_at.time())
        );
    }
}
