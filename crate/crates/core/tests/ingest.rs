use std::collections::BTreeMap;
use std::fs::File;
use std::path::PathBuf;

use chrono::{Duration, TimeZone, Utc};
use electionpulse::actors::ActorSet;
use electionpulse::ingest::{
    dataset_stats, parse_tweet_stream, read_records_csv, write_records_csv, DatasetTimezone,
    FieldMap, TweetRecord,
};
use electionpulse::preprocess::{preprocess_all, PipelineConfig, ProcessedTweet, StopwordSet};
use proptest::prelude::*;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

const ACTORS: &str = r#"
[[actor]]
id = "apga"
kind = "party"
aliases = ["apga"]

[[actor]]
id = "obiano"
kind = "candidate"
aliases = ["obiano"]

[[actor]]
id = "pdp"
kind = "party"
aliases = ["pdp"]
"#;

fn actors() -> ActorSet {
    ActorSet::from_toml_str(ACTORS).unwrap()
}

#[test]
fn ten_line_fixture() {
    let file = File::open(data("ten_lines.jsonl")).unwrap();
    let (records, report) =
        parse_tweet_stream(file, &FieldMap::default(), DatasetTimezone::default()).unwrap();
    assert_eq!(report.lines_read, 10);
    assert_eq!(records.len(), 9);
    assert_eq!(report.skipped, 1);
    let retweets: Vec<&str> = records
        .iter()
        .filter(|r| r.is_retweet)
        .map(|r| r.id.as_str())
        .collect();
    assert_eq!(retweets, ["2", "4"]);
    assert_eq!(
        records[0].created_at.to_rfc3339(),
        "2017-11-18T08:00:00+01:00"
    );
}

fn record(i: usize, text: &str) -> TweetRecord {
    let created_at = Utc
        .with_ymd_and_hms(2017, 11, 18, 6, 0, 0)
        .unwrap()
        .with_timezone(&DatasetTimezone::default().offset())
        + Duration::minutes(37 * i as i64);
    TweetRecord {
        id: format!("t{i:02}"),
        created_at,
        author: "u".into(),
        text: text.into(),
        is_retweet: text.starts_with("RT @"),
    }
}

/// 20 records: 5 retweets, 3 empty after preprocessing, 12 kept, of which
/// 5 name APGA.
fn twenty() -> Vec<TweetRecord> {
    [
        "APGA rally in Awka",
        "RT @x: APGA rally",
        "Obiano of APGA votes",
        "the and of",
        "PDP agents arrive",
        "RT @y: PDP agents",
        "apga supporters celebrate",
        "https://t.co/zzz",
        "Obiano speaks",
        "RT @z: Obiano speaks",
        "Collation is calm",
        "APGA wins Awka north",
        "@someone",
        "Results soon",
        "RT @w: APGA APGA",
        "PDP concedes",
        "Polls close at two",
        "voters happy with APGA",
        "RT @v: results",
        "Turnout was low",
    ]
    .iter()
    .enumerate()
    .map(|(i, t)| record(i, t))
    .collect()
}

fn kept(records: &[TweetRecord]) -> Vec<ProcessedTweet> {
    let cfg = PipelineConfig::new(StopwordSet::english());
    preprocess_all(records, &cfg).0
}

#[test]
fn twenty_record_stats() {
    let records = twenty();
    let kept = kept(&records);
    assert_eq!(kept.len(), 12);
    let stats = dataset_stats(&records, &kept, &actors()).unwrap();
    assert_eq!(stats.total_raw, 20);
    assert_eq!(stats.total_kept, 12);
    assert_eq!(stats.per_group["apga"].kept, 5);

    // brute force over the raw text
    let raw_apga = records
        .iter()
        .filter(|r| {
            r.text
                .to_lowercase()
                .split(|c: char| !c.is_alphanumeric())
                .any(|w| w == "apga")
        })
        .count();
    assert_eq!(stats.per_group["apga"].raw, raw_apga);
    for g in stats.per_group.values() {
        assert!(g.kept <= g.raw);
    }
    // coverage: kept tweets naming at least one actor
    let covered = kept
        .iter()
        .filter(|t| !actors().match_actors(t).is_empty())
        .count();
    assert_eq!(stats.coverage_pct, electionpulse::percent_2dp(covered, 12));
}

#[test]
fn empty_stats_and_consistency_error() {
    let stats = dataset_stats(&[], &[], &actors()).unwrap();
    assert_eq!(
        (stats.total_raw, stats.total_kept, stats.coverage_pct),
        (0, 0, 0.0)
    );
    assert!(stats.per_group.values().all(|g| g.raw == 0 && g.kept == 0));

    let records = twenty();
    let kept = kept(&records);
    assert!(dataset_stats(&records[..1], &kept, &actors()).is_err());
}

#[test]
fn header_only_export() {
    let mut buf = Vec::new();
    write_records_csv(&[], &actors(), &mut buf).unwrap();
    assert_eq!(
        String::from_utf8(buf).unwrap(),
        "id,created_at,bucket,tokens,apga,obiano,pdp\n"
    );
}

#[test]
fn apga_only_row() {
    let records = vec![record(0, "APGA rally in Awka")];
    let mut buf = Vec::new();
    write_records_csv(&kept(&records), &actors(), &mut buf).unwrap();
    let rows = read_records_csv(buf.as_slice()).unwrap();
    assert_eq!(
        rows[0].actors,
        BTreeMap::from([
            ("apga".to_string(), true),
            ("obiano".to_string(), false),
            ("pdp".to_string(), false)
        ])
    );
}

proptest! {
    #[test]
    fn parsing_is_total(lines in prop::collection::vec(prop::collection::vec(any::<u8>(), 0..60), 0..20)) {
        let mut bytes = Vec::new();
        for l in &lines {
            bytes.extend(l.iter().filter(|&&b| b != b'\n'));
            bytes.push(b'\n');
        }
        let (records, report) =
            parse_tweet_stream(bytes.as_slice(), &FieldMap::default(), DatasetTimezone::default()).unwrap();
        prop_assert_eq!(report.lines_read, lines.len());
        prop_assert_eq!(report.records + report.skipped, report.lines_read);
        prop_assert_eq!(records.len(), report.records);
    }

    #[test]
    fn stats_permutation_invariant(seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let records = twenty();
        let kept = kept(&records);
        let base = dataset_stats(&records, &kept, &actors()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let (mut r2, mut k2) = (records.clone(), kept.clone());
        r2.shuffle(&mut rng);
        k2.shuffle(&mut rng);
        prop_assert_eq!(dataset_stats(&r2, &k2, &actors()).unwrap(), base);
    }

    #[test]
    fn export_round_trip(texts in prop::collection::vec("[a-zA-Z ,.!'#@]{1,60}", 0..15)) {
        let records: Vec<TweetRecord> =
            texts.iter().enumerate().map(|(i, t)| record(i, t)).collect();
        let tweets = kept(&records);
        let mut buf = Vec::new();
        write_records_csv(&tweets, &actors(), &mut buf).unwrap();
        let rows = read_records_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(rows.len(), tweets.len());
        for (row, t) in rows.iter().zip(&tweets) {
            prop_assert_eq!(&row.id, &t.record_id);
            prop_assert_eq!(row.created_at, t.created_at);
            prop_assert_eq!(row.bucket.as_str(), electionpulse::analytics::bucket_label(t.bucket));
            prop_assert_eq!(&row.tokens, &t.tokens);
            let matched = actors().match_actors(t);
            for (id, flag) in &row.actors {
                prop_assert_eq!(*flag, matched.contains(id));
            }
        }
    }
}
