use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use super::lda::{top_keywords, TopicModel};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopicEntry {
    pub id: usize,
    /// Empty unless a label was configured.
    pub label: String,
    pub keywords: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopicReport {
    pub topics: Vec<TopicEntry>,
}

/// Reads a `{"0": "label", ...}` style map (TOML table keys are strings).
pub fn parse_topic_labels(raw: &BTreeMap<String, String>) -> Result<BTreeMap<usize, String>> {
    raw.iter()
        .map(|(k, v)| {
            k.trim()
                .parse::<usize>()
                .map(|id| (id, v.clone()))
                .map_err(|_| Error::Config(format!("topic label key '{k}' is not a topic id")))
        })
        .collect()
}

pub fn topic_report(
    model: &TopicModel,
    n: usize,
    labels: Option<&BTreeMap<usize, String>>,
) -> Result<TopicReport> {
    let k = model.num_topics();
    if let Some(labels) = labels {
        let unknown: Vec<String> = labels
            .keys()
            .filter(|&&id| id >= k)
            .map(|id| id.to_string())
            .collect();
        if !unknown.is_empty() {
            return Err(Error::Config(format!(
                "topic labels reference nonexistent topics {} (model has {k})",
                unknown.join(", ")
            )));
        }
    }
    let topics = (0..k)
        .map(|id| TopicEntry {
            id,
            label: labels.and_then(|l| l.get(&id)).cloned().unwrap_or_default(),
            keywords: top_keywords(model, id, n),
        })
        .collect();
    Ok(TopicReport { topics })
}

impl TopicReport {
    /// Flat CSV: `topic,label,rank,term,weight`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["topic", "label", "rank", "term", "weight"])?;
        for t in &self.topics {
            for (rank, (term, weight)) in t.keywords.iter().enumerate() {
                w.write_record([
                    t.id.to_string(),
                    t.label.clone(),
                    (rank + 1).to_string(),
                    term.clone(),
                    weight.to_string(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topics::{lda_fit, Corpus, LdaParams};

    fn model(k: usize) -> TopicModel {
        let docs: Vec<(String, Vec<String>)> = (0..6)
            .map(|i| {
                let toks = (0..12).map(|j| format!("w{}", (i * 3 + j) % 14)).collect();
                (i.to_string(), toks)
            })
            .collect();
        let c =
            Corpus::from_token_docs(docs.iter().map(|(i, t)| (i.as_str(), t.as_slice())), 1, "t")
                .unwrap();
        lda_fit(
            &c,
            LdaParams {
                k,
                iterations: 30,
                ..Default::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn shape_and_order() {
        let r = topic_report(&model(5), 10, None).unwrap();
        assert_eq!(r.topics.len(), 5);
        for t in &r.topics {
            assert_eq!(t.keywords.len(), 10);
            assert!(t.label.is_empty());
            assert!(t.keywords.windows(2).all(|w| w[0].1 >= w[1].1));
        }
    }

    #[test]
    fn labels() {
        let m = model(2);
        let raw = BTreeMap::from([("1".to_string(), "Voting Hindrances".to_string())]);
        let labels = parse_topic_labels(&raw).unwrap();
        let r = topic_report(&m, 3, Some(&labels)).unwrap();
        assert_eq!(r.topics[1].label, "Voting Hindrances");
        let bad = BTreeMap::from([(7, "x".to_string())]);
        assert!(matches!(
            topic_report(&m, 3, Some(&bad)),
            Err(Error::Config(_))
        ));
        let raw = BTreeMap::from([("one".to_string(), "x".to_string())]);
        assert!(parse_topic_labels(&raw).is_err());
    }

    #[test]
    fn csv_rows() {
        let r = topic_report(&model(2), 3, None).unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1 + 2 * 3);
        assert!(text.starts_with("topic,label,rank,term,weight\n0,,1,"));
    }
}
