//! Run configuration: one TOML file drives every subcommand.

use std::path::{Path, PathBuf};

use std::collections::BTreeMap;

use electionpulse::actors::ActorSet;
use electionpulse::ingest::FieldMap;
use electionpulse::topics::{
    parse_topic_labels, DEFAULT_ALPHA, DEFAULT_BETA, DEFAULT_ITERATIONS, DEFAULT_TOPICS,
    DEFAULT_TOP_WORDS,
};
use serde::{Deserialize, Serialize};

/// Environment variable that overrides the configured seed.
pub const SEED_ENV: &str = "ELECTIONPULSE_SEED";

/// The only bucket scheme supported: eight local-time windows from 06:00.
pub const TWO_HOURLY: &str = "two-hourly";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub input: Vec<PathBuf>,
    pub timezone: String,
    pub field_map: Option<PathBuf>,
    pub actors: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub preprocess: PreprocessConfig,
    pub sentiment: SentimentConfig,
    pub analytics: AnalyticsConfig,
    pub topics: TopicsConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PreprocessConfig {
    /// Empty means the bundled English list.
    pub stopwords: Vec<PathBuf>,
    pub negators: Option<PathBuf>,
    pub dictionary: Option<PathBuf>,
    pub spellcheck: bool,
    pub stem: bool,
    /// Treat actor and party names as stopwords.
    pub exclude_actor_names: bool,
    pub min_doc_len: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SentimentConfig {
    pub engine: String,
    pub pattern_lexicon: Option<PathBuf>,
    pub swn_lexicon: Option<PathBuf>,
    pub nbc_corpus: Option<PathBuf>,
    pub nbc_alpha: f64,
    pub subjectivity_threshold: f64,
    pub polarity_scale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalyticsConfig {
    /// Actor ids for sole-mention analyses; empty means every candidate and
    /// combined actor.
    pub scope: Vec<String>,
    pub buckets: String,
    pub top_n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TopicsConfig {
    /// `"all"` or an actor id whose matching tweets form the corpus.
    pub group: String,
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub iterations: usize,
    pub top_words: usize,
    pub labels: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            input: Vec::new(),
            timezone: "+01:00".into(),
            field_map: None,
            actors: None,
            out_dir: PathBuf::from("out"),
            seed: 2017,
            preprocess: PreprocessConfig::default(),
            sentiment: SentimentConfig::default(),
            analytics: AnalyticsConfig::default(),
            topics: TopicsConfig::default(),
        }
    }
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        PreprocessConfig {
            stopwords: Vec::new(),
            negators: None,
            dictionary: None,
            spellcheck: true,
            stem: true,
            exclude_actor_names: false,
            min_doc_len: 2,
        }
    }
}

impl Default for SentimentConfig {
    fn default() -> Self {
        SentimentConfig {
            engine: "pattern".into(),
            pattern_lexicon: None,
            swn_lexicon: None,
            nbc_corpus: None,
            nbc_alpha: 1.0,
            subjectivity_threshold: electionpulse::sentiment::DEFAULT_SUBJECTIVITY_THRESHOLD,
            polarity_scale: electionpulse::analytics::DEFAULT_POLARITY_SCALE,
        }
    }
}

impl Default for AnalyticsConfig {
    fn default() -> Self {
        AnalyticsConfig {
            scope: Vec::new(),
            buckets: TWO_HOURLY.into(),
            top_n: 10,
        }
    }
}

impl Default for TopicsConfig {
    fn default() -> Self {
        TopicsConfig {
            group: "all".into(),
            k: DEFAULT_TOPICS,
            alpha: DEFAULT_ALPHA,
            beta: DEFAULT_BETA,
            iterations: DEFAULT_ITERATIONS,
            top_words: DEFAULT_TOP_WORDS,
            labels: None,
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(s: &str) -> Result<Self, String> {
        toml::from_str(s).map_err(|e| e.to_string())
    }

    /// Reads a config file; relative paths inside it are taken relative to
    /// the file's directory.
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let mut cfg = Self::from_toml_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.resolve_paths(base);
        Ok(cfg)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        self.input.iter_mut().for_each(fix);
        self.field_map.iter_mut().for_each(fix);
        self.actors.iter_mut().for_each(fix);
        fix(&mut self.out_dir);
        self.preprocess.stopwords.iter_mut().for_each(fix);
        self.preprocess.negators.iter_mut().for_each(fix);
        self.preprocess.dictionary.iter_mut().for_each(fix);
        self.sentiment.pattern_lexicon.iter_mut().for_each(fix);
        self.sentiment.swn_lexicon.iter_mut().for_each(fix);
        self.sentiment.nbc_corpus.iter_mut().for_each(fix);
        self.topics.labels.iter_mut().for_each(fix);
    }

    /// Seed after the environment override.
    pub fn effective_seed(&self) -> Result<u64, String> {
        match std::env::var(SEED_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| format!("{SEED_ENV}='{v}' is not an unsigned integer")),
            Err(_) => Ok(self.seed),
        }
    }
}

/// Reads a topic-label file: a `[labels]` table keyed by topic id.
pub fn load_topic_labels(path: &Path) -> Result<BTreeMap<usize, String>, String> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct LabelFile {
        #[serde(default)]
        labels: BTreeMap<String, String>,
    }
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let file: LabelFile = toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_topic_labels(&file.labels).map_err(|e| e.to_string())
}

fn load_actors(path: &Path) -> Result<ActorSet, Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| vec![e.to_string()])?;
    ActorSet::from_toml_str(&text)
}

/// What a subcommand reads, so validation only insists on relevant files.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Needs {
    pub input: bool,
    pub actors: bool,
    pub lexicons: bool,
    pub nbc_corpus: bool,
}

/// Every problem with the configuration, not just the first.
pub fn validate_config(cfg: &RunConfig, needs: Needs) -> Vec<String> {
    let mut problems = Vec::new();
    fn file(problems: &mut Vec<String>, label: &str, path: &Path) {
        if !path.is_file() {
            problems.push(format!("{label}: file not found: {}", path.display()));
        }
    }

    if needs.input && cfg.input.is_empty() {
        file(&mut problems, "input", Path::new(""));
    }
    for p in &cfg.input {
        file(&mut problems, "input", p);
    }
    if let Some(p) = &cfg.field_map {
        file(&mut problems, "field_map", p);
    }
    match &cfg.actors {
        Some(p) => file(&mut problems, "actors", p),
        None if needs.actors => problems.push("actors: no actor config given".into()),
        None => {}
    }
    for p in &cfg.preprocess.stopwords {
        file(&mut problems, "preprocess.stopwords", p);
    }
    if let Some(p) = &cfg.preprocess.negators {
        file(&mut problems, "preprocess.negators", p);
    }
    match &cfg.preprocess.dictionary {
        Some(p) => file(&mut problems, "preprocess.dictionary", p),
        None if cfg.preprocess.spellcheck && needs.input => {
            problems.push("preprocess.dictionary: spellcheck is on but no dictionary given".into())
        }
        None => {}
    }
    for (label, p) in [
        ("sentiment.pattern_lexicon", &cfg.sentiment.pattern_lexicon),
        ("sentiment.swn_lexicon", &cfg.sentiment.swn_lexicon),
    ] {
        match p {
            Some(p) => file(&mut problems, label, p),
            None if needs.lexicons => problems.push(format!("{label}: not configured")),
            None => {}
        }
    }
    match &cfg.sentiment.nbc_corpus {
        Some(p) => file(&mut problems, "sentiment.nbc_corpus", p),
        None if needs.nbc_corpus => problems.push("sentiment.nbc_corpus: not configured".into()),
        None => {}
    }
    if let Some(p) = &cfg.topics.labels {
        file(&mut problems, "topics.labels", p);
    }

    if let Some(p) = cfg.field_map.as_ref().filter(|p| p.is_file()) {
        if let Err(e) = FieldMap::load(p) {
            problems.push(format!("field_map: {e}"));
        }
    }
    let group = cfg.topics.group.as_str();
    match cfg
        .actors
        .as_ref()
        .filter(|p| p.is_file())
        .map(|p| load_actors(p))
    {
        Some(Ok(set)) => {
            for id in &cfg.analytics.scope {
                if set.get(id).is_none() {
                    problems.push(format!("analytics.scope: unknown actor '{id}'"));
                }
            }
            if group != "all" && set.get(group).is_none() {
                problems.push(format!("topics.group: unknown actor '{group}'"));
            }
        }
        Some(Err(errs)) => problems.extend(errs.into_iter().map(|e| format!("actors: {e}"))),
        None if cfg.actors.is_none() => {
            if !cfg.analytics.scope.is_empty() {
                problems.push("analytics.scope: set but no actor config given".into());
            }
            if group != "all" {
                problems.push(format!("topics.group: '{group}' needs an actor config"));
            }
        }
        None => {}
    }
    if let Some(p) = cfg.topics.labels.as_ref().filter(|p| p.is_file()) {
        match load_topic_labels(p) {
            Ok(labels) => {
                if let Some(id) = labels.keys().find(|&&id| id >= cfg.topics.k) {
                    problems.push(format!(
                        "topics.labels: topic {id} does not exist with k = {}",
                        cfg.topics.k
                    ));
                }
            }
            Err(e) => problems.push(format!("topics.labels: {e}")),
        }
    }

    if let Err(e) = cfg
        .timezone
        .parse::<electionpulse::ingest::DatasetTimezone>()
    {
        problems.push(format!("timezone: {e}"));
    }
    if let Err(e) = cfg.effective_seed() {
        problems.push(e);
    }
    let s = &cfg.sentiment;
    if !["pattern", "swn"].contains(&s.engine.as_str()) {
        problems.push(format!(
            "sentiment.engine: unknown engine '{}' (pattern, swn)",
            s.engine
        ));
    }
    if !(s.polarity_scale > 0.0 && s.polarity_scale.is_finite()) {
        problems.push(format!(
            "sentiment.polarity_scale must be > 0, got {}",
            s.polarity_scale
        ));
    }
    if !(0.0..=1.0).contains(&s.subjectivity_threshold) {
        problems.push(format!(
            "sentiment.subjectivity_threshold must be in [0, 1], got {}",
            s.subjectivity_threshold
        ));
    }
    if !(s.nbc_alpha > 0.0 && s.nbc_alpha.is_finite()) {
        problems.push(format!(
            "sentiment.nbc_alpha must be > 0, got {}",
            s.nbc_alpha
        ));
    }
    if cfg.analytics.buckets != TWO_HOURLY {
        problems.push(format!(
            "analytics.buckets: only '{TWO_HOURLY}' is supported, got '{}'",
            cfg.analytics.buckets
        ));
    }
    if cfg.analytics.top_n == 0 {
        problems.push("analytics.top_n must be >= 1".into());
    }
    if cfg.preprocess.min_doc_len == 0 {
        problems.push("preprocess.min_doc_len must be >= 1".into());
    }
    let t = &cfg.topics;
    if t.k == 0 {
        problems.push("topics.k must be >= 1".into());
    }
    if t.iterations == 0 {
        problems.push("topics.iterations must be >= 1".into());
    }
    if t.top_words == 0 {
        problems.push("topics.top_words must be >= 1".into());
    }
    for (name, v) in [("topics.alpha", t.alpha), ("topics.beta", t.beta)] {
        if !(v > 0.0 && v.is_finite()) {
            problems.push(format!("{name} must be > 0, got {v}"));
        }
    }
    problems
}
