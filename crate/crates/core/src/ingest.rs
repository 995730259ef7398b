//! Tweet stream ingestion, dataset statistics and CSV export.
//!
//! Input is JSON-lines: one tweet object per line. Which JSON fields feed
//! each record attribute is controlled by a [`FieldMap`], so dumps from
//! different collectors can be replayed without code changes.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::str::FromStr;

use chrono::{DateTime, FixedOffset};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use unicode_normalization::UnicodeNormalization;

use crate::actors::ActorSet;
use crate::analytics::bucket_label;
use crate::error::{Error, Result};
use crate::preprocess::{surface_tokens, ProcessedTweet};
use crate::util::percent_2dp;

/// Upper bound on tweet text size after normalization.
pub const MAX_TEXT_BYTES: usize = 1120;

/// Twitter's legacy `created_at` layout, e.g. `Sat Nov 18 10:15:00 +0000 2017`.
const TWITTER_TIME_FORMAT: &str = "%a %b %d %H:%M:%S %z %Y";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TweetRecord {
    pub id: String,
    pub created_at: DateTime<FixedOffset>,
    pub author: String,
    pub text: String,
    pub is_retweet: bool,
}

/// The single timezone every timestamp of a dataset is normalized to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DatasetTimezone(pub FixedOffset);

impl DatasetTimezone {
    pub fn offset(&self) -> FixedOffset {
        self.0
    }
}

impl Default for DatasetTimezone {
    /// West Africa Time, UTC+01:00.
    fn default() -> Self {
        DatasetTimezone(FixedOffset::east_opt(3600).expect("valid offset"))
    }
}

impl fmt::Display for DatasetTimezone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for DatasetTimezone {
    type Err = Error;

    /// Accepts `UTC`, `Z`, `+01:00`, `-0530`, `UTC+1`, `UTC+01:00`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("invalid timezone offset '{s}'"));
        let t = s.trim();
        let t = t
            .strip_prefix("UTC")
            .or_else(|| t.strip_prefix("GMT"))
            .unwrap_or(t);
        if t.is_empty() || t == "Z" {
            return Ok(DatasetTimezone(
                FixedOffset::east_opt(0).expect("zero offset"),
            ));
        }
        let (sign, rest) = match t.as_bytes()[0] {
            b'+' => (1, &t[1..]),
            b'-' => (-1, &t[1..]),
            _ => return Err(bad()),
        };
        let (hours, minutes) = if let Some((h, m)) = rest.split_once(':') {
            (h, m)
        } else if rest.len() == 4 {
            rest.split_at(2)
        } else {
            (rest, "0")
        };
        let hours: i32 = hours.parse().map_err(|_| bad())?;
        let minutes: i32 = minutes.parse().map_err(|_| bad())?;
        if hours > 14 || minutes >= 60 {
            return Err(bad());
        }
        FixedOffset::east_opt(sign * (hours * 3600 + minutes * 60))
            .map(DatasetTimezone)
            .ok_or_else(bad)
    }
}

/// Ordered candidate JSON paths (dot-separated) for each record attribute.
/// The first path that resolves to a usable value wins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FieldMap {
    pub id: Vec<String>,
    pub created_at: Vec<String>,
    pub text: Vec<String>,
    pub author: Vec<String>,
    /// Presence of any of these marks the record as a retweet.
    pub retweeted_status: Vec<String>,
}

impl Default for FieldMap {
    fn default() -> Self {
        let v = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect();
        FieldMap {
            id: v(&["id_str", "id"]),
            created_at: v(&["created_at"]),
            text: v(&["extended_tweet.full_text", "full_text", "text"]),
            author: v(&["user.screen_name"]),
            retweeted_status: v(&["retweeted_status"]),
        }
    }
}

impl FieldMap {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config(format!("field map: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }
}

fn lookup<'a>(value: &'a Value, path: &str) -> Option<&'a Value> {
    path.split('.')
        .try_fold(value, |v, key| v.get(key))
        .filter(|v| !v.is_null())
}

fn first_string(value: &Value, paths: &[String]) -> Option<String> {
    paths.iter().find_map(|p| match lookup(value, p)? {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    })
}

fn parse_timestamp(raw: &str) -> Option<DateTime<FixedOffset>> {
    DateTime::parse_from_str(raw, TWITTER_TIME_FORMAT)
        .or_else(|_| DateTime::parse_from_rfc3339(raw))
        .ok()
}

/// Why a line did not yield a record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipReason {
    Blank,
    Malformed,
    MissingField,
    BadTimestamp,
    InvalidText,
    Duplicate,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ParseReport {
    pub lines_read: usize,
    pub records: usize,
    pub skipped: usize,
    pub skip_reasons: BTreeMap<SkipReason, usize>,
}

impl ParseReport {
    fn skip(&mut self, reason: SkipReason) {
        self.skipped += 1;
        *self.skip_reasons.entry(reason).or_default() += 1;
    }
}

fn record_from_line(
    line: &[u8],
    fields: &FieldMap,
    tz: DatasetTimezone,
) -> std::result::Result<TweetRecord, SkipReason> {
    let line = std::str::from_utf8(line).map_err(|_| SkipReason::Malformed)?;
    if line.trim().is_empty() {
        return Err(SkipReason::Blank);
    }
    let value: Value = serde_json::from_str(line).map_err(|_| SkipReason::Malformed)?;
    if !value.is_object() {
        return Err(SkipReason::Malformed);
    }
    let id = first_string(&value, &fields.id)
        .filter(|s| !s.is_empty())
        .ok_or(SkipReason::MissingField)?;
    let created_raw = first_string(&value, &fields.created_at).ok_or(SkipReason::MissingField)?;
    let text = first_string(&value, &fields.text).ok_or(SkipReason::MissingField)?;
    let created_at = parse_timestamp(&created_raw)
        .ok_or(SkipReason::BadTimestamp)?
        .with_timezone(&tz.offset());

    let text: String = text.nfc().collect();
    if text.trim().is_empty() || text.len() > MAX_TEXT_BYTES {
        return Err(SkipReason::InvalidText);
    }
    let author = first_string(&value, &fields.author).unwrap_or_default();
    let flagged = fields
        .retweeted_status
        .iter()
        .any(|p| lookup(&value, p).is_some());
    let is_retweet = flagged || crate::preprocess::has_retweet_prefix(&text);

    Ok(TweetRecord {
        id,
        created_at,
        author,
        text,
        is_retweet,
    })
}

/// Parses a JSON-lines stream. Bad lines are counted and skipped; only a
/// failing reader aborts. Repeated ids keep their first occurrence.
pub fn parse_tweet_stream<R: Read>(
    source: R,
    fields: &FieldMap,
    tz: DatasetTimezone,
) -> Result<(Vec<TweetRecord>, ParseReport)> {
    let mut reader = BufReader::new(source);
    let mut report = ParseReport::default();
    let mut records = Vec::new();
    let mut seen = HashSet::new();
    let mut buf = Vec::new();

    loop {
        buf.clear();
        if reader.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        report.lines_read += 1;
        if buf.last() == Some(&b'\n') {
            buf.pop();
        }
        if buf.last() == Some(&b'\r') {
            buf.pop();
        }
        match record_from_line(&buf, fields, tz) {
            Ok(rec) if !seen.insert(rec.id.clone()) => report.skip(SkipReason::Duplicate),
            Ok(rec) => {
                report.records += 1;
                records.push(rec);
            }
            Err(reason) => report.skip(reason),
        }
    }
    Ok((records, report))
}

pub fn parse_tweet_file(
    path: &Path,
    fields: &FieldMap,
    tz: DatasetTimezone,
) -> Result<(Vec<TweetRecord>, ParseReport)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_tweet_stream(file, fields, tz)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupCount {
    pub raw: usize,
    pub kept: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub total_raw: usize,
    pub total_kept: usize,
    pub per_group: BTreeMap<String, GroupCount>,
    pub coverage_pct: f64,
}

/// Table-1 style counts. Groups overlap, so the totals are population
/// sizes and not sums of the group rows.
pub fn dataset_stats(
    records: &[TweetRecord],
    kept: &[ProcessedTweet],
    groups: &ActorSet,
) -> Result<DatasetStats> {
    let known: HashSet<&str> = records.iter().map(|r| r.id.as_str()).collect();
    if let Some(stray) = kept.iter().find(|t| !known.contains(t.record_id.as_str())) {
        return Err(Error::Consistency(format!(
            "kept tweet '{}' has no source record",
            stray.record_id
        )));
    }

    let mut per_group: BTreeMap<String, GroupCount> = groups
        .iter()
        .map(|a| (a.id.clone(), GroupCount::default()))
        .collect();

    for rec in records {
        for id in groups.match_tokens(&surface_tokens(&rec.text)) {
            per_group
                .get_mut(&id)
                .expect("matched id is configured")
                .raw += 1;
        }
    }
    let mut covered = 0;
    for tweet in kept {
        let matched = groups.match_tokens(&tweet.surface_tokens);
        if !matched.is_empty() {
            covered += 1;
        }
        for id in matched {
            per_group
                .get_mut(&id)
                .expect("matched id is configured")
                .kept += 1;
        }
    }

    Ok(DatasetStats {
        total_raw: records.len(),
        total_kept: kept.len(),
        per_group,
        coverage_pct: percent_2dp(covered, kept.len()),
    })
}

/// One row of the exported CSV, as read back.
#[derive(Debug, Clone, PartialEq)]
pub struct ExportedRow {
    pub id: String,
    pub created_at: DateTime<FixedOffset>,
    pub bucket: String,
    pub tokens: Vec<String>,
    pub actors: BTreeMap<String, bool>,
}

/// Writes one row per tweet: id, timestamp, bucket, space-joined tokens,
/// then a boolean column per configured actor.
pub fn write_records_csv<W: Write>(
    tweets: &[ProcessedTweet],
    actors: &ActorSet,
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec![
        "id".to_string(),
        "created_at".to_string(),
        "bucket".to_string(),
        "tokens".to_string(),
    ];
    header.extend(actors.iter().map(|a| a.id.clone()));
    w.write_record(&header)?;

    for t in tweets {
        let matched = actors.match_tokens(&t.surface_tokens);
        let mut row = vec![
            t.record_id.clone(),
            t.created_at.to_rfc3339(),
            bucket_label(t.bucket).to_string(),
            t.tokens.join(" "),
        ];
        row.extend(actors.iter().map(|a| matched.contains(&a.id).to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn export_records(tweets: &[ProcessedTweet], actors: &ActorSet, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_records_csv(tweets, actors, file)
}

pub fn read_records_csv<R: Read>(input: R) -> Result<Vec<ExportedRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    if header.len() < 4 {
        return Err(Error::Consistency(
            "export header has fewer than 4 columns".into(),
        ));
    }
    let actor_cols: Vec<String> = header.iter().skip(4).map(str::to_string).collect();

    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let created_at = DateTime::parse_from_rfc3339(&rec[1])
            .map_err(|e| Error::Consistency(format!("bad timestamp '{}': {e}", &rec[1])))?;
        let mut actors = BTreeMap::new();
        for (i, name) in actor_cols.iter().enumerate() {
            let flag = match &rec[4 + i] {
                "true" => true,
                "false" => false,
                other => {
                    return Err(Error::Consistency(format!(
                        "non-boolean '{other}' in column {name}"
                    )))
                }
            };
            actors.insert(name.clone(), flag);
        }
        rows.push(ExportedRow {
            id: rec[0].to_string(),
            created_at,
            bucket: rec[2].to_string(),
            tokens: rec[3].split_whitespace().map(str::to_string).collect(),
            actors,
        });
    }
    Ok(rows)
}

/// Index of records by id, for joining processed tweets back to raw text.
pub fn index_by_id(records: &[TweetRecord]) -> HashMap<&str, &TweetRecord> {
    records.iter().map(|r| (r.id.as_str(), r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(id: &str, text: &str) -> String {
        serde_json::json!({
            "id_str": id,
            "created_at": "Sat Nov 18 10:15:00 +0000 2017",
            "text": text,
            "user": {"screen_name": "someone"}
        })
        .to_string()
    }

    fn parse(input: &str) -> (Vec<TweetRecord>, ParseReport) {
        parse_tweet_stream(
            input.as_bytes(),
            &FieldMap::default(),
            DatasetTimezone::default(),
        )
        .unwrap()
    }

    #[test]
    fn three_good_lines() {
        let input = [line("1", "a"), line("2", "b"), line("3", "c")].join("\n");
        let (recs, rep) = parse(&input);
        assert_eq!(recs.len(), 3);
        assert_eq!(rep.skipped, 0);
        assert_eq!(rep.lines_read, 3);
    }

    #[test]
    fn truncated_middle_line_is_skipped() {
        let mid = line("2", "b");
        let input = [
            line("1", "a"),
            mid[..mid.len() / 2].to_string(),
            line("3", "c"),
        ]
        .join("\n");
        let (recs, rep) = parse(&input);
        assert_eq!(recs.len(), 2);
        assert_eq!(rep.skipped, 1);
        assert_eq!(rep.skip_reasons[&SkipReason::Malformed], 1);
    }

    #[test]
    fn missing_text_and_duplicates() {
        let no_text = r#"{"id_str":"9","created_at":"Sat Nov 18 10:15:00 +0000 2017"}"#;
        let input = [line("1", "a"), no_text.to_string(), line("1", "again")].join("\n");
        let (recs, rep) = parse(&input);
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].text, "a");
        assert_eq!(rep.skip_reasons[&SkipReason::MissingField], 1);
        assert_eq!(rep.skip_reasons[&SkipReason::Duplicate], 1);
    }

    #[test]
    fn numeric_id_and_timezone_normalization() {
        let l = r#"{"id":42,"created_at":"Sat Nov 18 23:30:00 +0000 2017","text":"x"}"#;
        let (recs, _) = parse(l);
        assert_eq!(recs[0].id, "42");
        assert_eq!(recs[0].created_at.to_rfc3339(), "2017-11-19T00:30:00+01:00");
        assert_eq!(recs[0].author, "");
    }

    #[test]
    fn oversized_text_rejected() {
        let big = "x".repeat(MAX_TEXT_BYTES + 1);
        let (recs, rep) = parse(&line("1", &big));
        assert!(recs.is_empty());
        assert_eq!(rep.skip_reasons[&SkipReason::InvalidText], 1);
    }

    #[test]
    fn timezone_parsing() {
        let tz: DatasetTimezone = "+01:00".parse().unwrap();
        assert_eq!(tz, DatasetTimezone::default());
        assert_eq!("UTC+1".parse::<DatasetTimezone>().unwrap(), tz);
        assert_eq!(
            "-0530"
                .parse::<DatasetTimezone>()
                .unwrap()
                .0
                .local_minus_utc(),
            -19800
        );
        assert_eq!(
            "UTC"
                .parse::<DatasetTimezone>()
                .unwrap()
                .0
                .local_minus_utc(),
            0
        );
        assert!("Lagos".parse::<DatasetTimezone>().is_err());
    }

    #[test]
    fn custom_field_map() {
        let map = FieldMap::from_toml_str(
            r#"
            id = ["tweet.key"]
            created_at = ["tweet.when"]
            text = ["tweet.body"]
            "#,
        )
        .unwrap();
        let l = r#"{"tweet":{"key":"k1","when":"2017-11-18T09:00:00Z","body":"hello"}}"#;
        let (recs, _) = parse_tweet_stream(l.as_bytes(), &map, DatasetTimezone::default()).unwrap();
        assert_eq!(recs[0].id, "k1");
        assert_eq!(map.author, FieldMap::default().author);
    }
}
