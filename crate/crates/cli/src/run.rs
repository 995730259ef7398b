//! Subcommand execution: load once, run the requested analyses, stage the
//! artifacts and move them into place only if everything succeeded.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs::File;
use std::io::{self, Read, Seek, SeekFrom};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, Context as _};
use electionpulse::actors::{ActorKind, ActorSet};
use electionpulse::analytics::{
    actor_sentiment_counts, avg_sentiment_series, bucket_label, cooccurrence_cloud,
    frequency_heatmap, FrequencyTable,
};
use electionpulse::ingest::{
    dataset_stats, parse_tweet_stream, write_records_csv, DatasetTimezone, FieldMap, ParseReport,
    TweetRecord,
};
use electionpulse::preprocess::{
    load_word_list, preprocess_all, preprocess_text, Dictionary, PipelineConfig, PreprocessReport,
    ProcessedTweet, StopwordSet,
};
use electionpulse::sentiment::{
    compare_classifiers, default_registry, distribution, english_negators, nbc_classify, nbc_train,
    polarity_class, read_labeled_corpus, score_tweets, subjectivity_class, ClassifierRow,
    EngineRegistry, NbcModel, PatternLexicon, PolarityClass, SenseLexicon, SentimentScore,
};
use electionpulse::topics::{build_corpus, lda_fit, topic_report, LdaParams};
use serde::Serialize;

use crate::config::{load_topic_labels, validate_config, Needs, RunConfig};
use crate::manifest::{sha256_file, RunManifest};
use crate::output::Staging;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Task {
    Ingest,
    Actors,
    Sentiment,
    Compare,
    Counts,
    Cloud { actor: Option<String> },
    Timeseries,
    Heatmap,
    Topics,
    All,
    TrainNbc,
    Validate,
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Ingest => "ingest",
            Task::Actors => "actors",
            Task::Sentiment => "sentiment",
            Task::Compare => "compare",
            Task::Counts => "counts",
            Task::Cloud { .. } => "cloud",
            Task::Timeseries => "timeseries",
            Task::Heatmap => "heatmap",
            Task::Topics => "topics",
            Task::All => "all",
            Task::TrainNbc => "train-nbc",
            Task::Validate => "validate",
        }
    }

    fn needs(&self, cfg: &RunConfig) -> Needs {
        let input = Needs {
            input: true,
            ..Default::default()
        };
        match self {
            Task::Ingest | Task::Cloud { .. } | Task::Heatmap => Needs {
                actors: true,
                ..input
            },
            Task::Actors => Needs {
                actors: true,
                ..Default::default()
            },
            Task::Sentiment | Task::Compare => Needs {
                lexicons: true,
                ..input
            },
            Task::Counts | Task::Timeseries | Task::All | Task::Validate => Needs {
                actors: true,
                lexicons: true,
                ..input
            },
            Task::Topics => Needs {
                actors: cfg.topics.group != "all",
                ..input
            },
            Task::TrainNbc => Needs {
                nbc_corpus: true,
                ..Default::default()
            },
        }
    }
}

#[derive(Debug)]
pub enum RunError {
    /// Invalid configuration; every diagnostic.
    Config(Vec<String>),
    Pipeline(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Pipeline(_) => 1,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Config(problems) => {
                write!(f, "invalid configuration:")?;
                for p in problems {
                    write!(f, "\n  - {p}")?;
                }
                Ok(())
            }
            RunError::Pipeline(e) => write!(f, "pipeline error: {e}"),
        }
    }
}

impl std::error::Error for RunError {}

#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub artifacts: Vec<String>,
    pub manifest: Option<PathBuf>,
}

fn write_manifest(manifest: &RunManifest, out_dir: &Path) -> Option<PathBuf> {
    match manifest.write(out_dir) {
        Ok(p) => Some(p),
        Err(e) => {
            log::warn!("could not write run manifest to {}: {e}", out_dir.display());
            None
        }
    }
}

/// Validates, runs and records one subcommand. `seed_override` beats both
/// the environment and the config file.
pub fn run(task: &Task, cfg: &RunConfig, seed_override: Option<u64>) -> Result<Outcome, RunError> {
    let mut manifest = RunManifest::new(task.name(), cfg.clone());
    let problems = validate_config(cfg, task.needs(cfg));
    if !problems.is_empty() {
        manifest.finish(Some(problems.join("; ")));
        write_manifest(&manifest, &cfg.out_dir);
        return Err(RunError::Config(problems));
    }
    let seed = match seed_override {
        Some(s) => s,
        None => cfg
            .effective_seed()
            .map_err(|e| RunError::Config(vec![e]))?,
    };
    manifest.seed = Some(seed);

    let result = if *task == Task::Validate {
        Ok(Vec::new())
    } else {
        Staging::new(&cfg.out_dir)
            .with_context(|| format!("cannot create output directory {}", cfg.out_dir.display()))
            .and_then(|mut staging| {
                execute(task, cfg, seed, &mut manifest, &mut staging)?;
                staging.commit().context("cannot move artifacts into place")
            })
    };
    match result {
        Ok(files) => {
            manifest.artifacts = files.clone();
            manifest.finish(None);
            Ok(Outcome {
                artifacts: files,
                manifest: write_manifest(&manifest, &cfg.out_dir),
            })
        }
        Err(e) => {
            let msg = format!("{e:#}");
            manifest.finish(Some(msg.clone()));
            write_manifest(&manifest, &cfg.out_dir);
            let is_config = e
                .chain()
                .any(|c| matches!(c.downcast_ref(), Some(electionpulse::Error::Config(_))));
            Err(if is_config {
                RunError::Config(vec![msg])
            } else {
                RunError::Pipeline(msg)
            })
        }
    }
}

/// Preprocessing resources shared by every command that touches text.
struct Prep {
    actors: ActorSet,
    pipeline: PipelineConfig,
    negators: BTreeSet<String>,
}

impl Prep {
    fn load(cfg: &RunConfig) -> anyhow::Result<Self> {
        let actors = match &cfg.actors {
            Some(p) => ActorSet::load(p)?,
            None => ActorSet::default(),
        };
        let negators = match &cfg.preprocess.negators {
            Some(p) => load_word_list(p)?,
            None => english_negators(),
        };
        let pc = &cfg.preprocess;
        let base = if pc.stopwords.is_empty() {
            StopwordSet::english()
        } else {
            let mut words = BTreeSet::new();
            for p in &pc.stopwords {
                words.extend(load_word_list(p)?);
            }
            StopwordSet::new(words)
        };
        let stopwords = if pc.exclude_actor_names {
            electionpulse::analytics::actor_exclusions(&actors, base)
        } else {
            base
        };
        let mut pipeline = PipelineConfig::new(stopwords);
        if pc.spellcheck {
            if let Some(p) = &pc.dictionary {
                let mut dict = Dictionary::load(p)?;
                dict.protect(actors.all_alias_words());
                dict.protect(negators.iter().cloned());
                pipeline = pipeline.with_dictionary(dict);
            }
        }
        if !pc.stem {
            pipeline = pipeline.without_stemming();
        }
        Ok(Prep {
            actors,
            pipeline,
            negators,
        })
    }

    fn registry(
        &self,
        cfg: &RunConfig,
        manifest: &mut RunManifest,
    ) -> anyhow::Result<EngineRegistry> {
        let s = &cfg.sentiment;
        let started = Instant::now();
        let path = s
            .pattern_lexicon
            .as_ref()
            .ok_or_else(|| anyhow!("no pattern lexicon"))?;
        let (pattern, prep) = PatternLexicon::load(path)?;
        let path = s
            .swn_lexicon
            .as_ref()
            .ok_or_else(|| anyhow!("no sense lexicon"))?;
        let (senses, srep) = SenseLexicon::load(path)?;
        for (name, rejected) in [("pattern", prep.rows_rejected), ("swn", srep.rows_rejected)] {
            if rejected > 0 {
                log::warn!("{name} lexicon: {rejected} rows rejected");
            }
        }
        manifest.count("pattern_lexicon_rejected", prep.rows_rejected);
        manifest.count("swn_lexicon_rejected", srep.rows_rejected);
        manifest.stage(
            "lexicons",
            prep.rows_read + srep.rows_read,
            prep.entries + srep.entries,
            started,
        );
        Ok(default_registry(pattern, self.negators.clone(), senses))
    }
}

/// Opens every input as one stream so ids are deduplicated across files. A
/// newline is inserted after a file that lacks a trailing one.
fn open_inputs(paths: &[PathBuf]) -> anyhow::Result<Box<dyn Read>> {
    let mut stream: Box<dyn Read> = Box::new(io::empty());
    for p in paths {
        let mut f = File::open(p).with_context(|| format!("cannot open {}", p.display()))?;
        let len = f.metadata()?.len();
        let mut last = *b"\n";
        if len > 0 {
            f.seek(SeekFrom::End(-1))?;
            f.read_exact(&mut last)?;
            f.rewind()?;
        }
        stream = Box::new(stream.chain(f));
        if last[0] != b'\n' {
            stream = Box::new(stream.chain(&b"\n"[..]));
        }
    }
    Ok(stream)
}

struct Data {
    records: Vec<TweetRecord>,
    parse: ParseReport,
    tweets: Vec<ProcessedTweet>,
    preprocess: PreprocessReport,
}

impl Data {
    fn load(cfg: &RunConfig, prep: &Prep, manifest: &mut RunManifest) -> anyhow::Result<Self> {
        for p in &cfg.input {
            manifest
                .inputs
                .push(sha256_file(p).with_context(|| format!("cannot read {}", p.display()))?);
        }
        let tz: DatasetTimezone = cfg.timezone.parse()?;
        let fields = match &cfg.field_map {
            Some(p) => FieldMap::load(p)?,
            None => FieldMap::default(),
        };

        let started = Instant::now();
        let (records, parse) = parse_tweet_stream(open_inputs(&cfg.input)?, &fields, tz)?;
        manifest.stage("parse", parse.lines_read, records.len(), started);
        manifest.count("lines_read", parse.lines_read);
        manifest.count("records", parse.records);
        manifest.count("skipped_lines", parse.skipped);

        let started = Instant::now();
        let (tweets, preprocess) = preprocess_all(&records, &prep.pipeline);
        manifest.stage("preprocess", records.len(), tweets.len(), started);
        manifest.count("retweets", preprocess.retweets);
        manifest.count("empty_after_preprocess", preprocess.empty);
        manifest.count("kept", preprocess.kept);
        Ok(Data {
            records,
            parse,
            tweets,
            preprocess,
        })
    }
}

/// The analysis scope: configured ids, or every candidate and combined actor.
fn scope(cfg: &RunConfig, actors: &ActorSet) -> Vec<String> {
    if !cfg.analytics.scope.is_empty() {
        return cfg.analytics.scope.clone();
    }
    actors
        .iter()
        .filter(|a| matches!(a.kind, ActorKind::Candidate | ActorKind::Combined))
        .map(|a| a.id.clone())
        .collect()
}

fn json_bytes<T: Serialize + ?Sized>(value: &T) -> anyhow::Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

fn csv_bytes(
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.into_inner().map_err(|e| anyhow!("{e}"))
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn execute(
    task: &Task,
    cfg: &RunConfig,
    seed: u64,
    manifest: &mut RunManifest,
    out: &mut Staging,
) -> anyhow::Result<()> {
    let prep = Prep::load(cfg)?;
    match task {
        Task::TrainNbc => return emit_nbc_model(cfg, &prep, manifest, out),
        Task::Actors => {
            let actors: Vec<_> = prep.actors.iter().collect();
            return Ok(out.write("actors.json", &json_bytes(&actors)?)?);
        }
        Task::Validate => return Ok(()),
        _ => {}
    }
    let data = Data::load(cfg, &prep, manifest)?;
    let scope = scope(cfg, &prep.actors);
    let needs_scores = matches!(
        task,
        Task::Sentiment | Task::Compare | Task::Counts | Task::Timeseries | Task::All
    );
    let registry = if needs_scores {
        Some(prep.registry(cfg, manifest)?)
    } else {
        None
    };
    let scores = match &registry {
        Some(reg) => {
            let started = Instant::now();
            let engine = reg.get(&cfg.sentiment.engine)?;
            let scores = score_tweets(&data.tweets, engine);
            manifest.stage("score", data.tweets.len(), scores.len(), started);
            scores
        }
        None => Vec::new(),
    };

    let all = *task == Task::All;
    if all || *task == Task::Ingest {
        emit_ingest(&data, &prep, manifest, out)?;
    }
    if all || *task == Task::Sentiment {
        emit_scores(cfg, &data.tweets, &scores, out)?;
    }
    if all || *task == Task::Compare {
        let reg = registry.as_ref().expect("scores loaded");
        emit_compare(cfg, &prep, &data.tweets, reg, out)?;
    }
    if all || *task == Task::Counts {
        emit_counts(cfg, &prep.actors, &scope, &data.tweets, &scores, out)?;
    }
    if all || matches!(task, Task::Cloud { .. }) {
        let actor = match task {
            Task::Cloud { actor } => actor.clone(),
            _ => None,
        };
        emit_clouds(cfg, &prep, &scope, actor, &data.tweets, out)?;
    }
    if all || *task == Task::Timeseries {
        emit_timeseries(cfg, &prep.actors, &scope, &data.tweets, &scores, out)?;
    }
    if all || *task == Task::Heatmap {
        let started = Instant::now();
        let heatmap = frequency_heatmap(
            &data.tweets,
            &prep.actors,
            &scope,
            &prep.pipeline.stopwords,
            cfg.analytics.top_n,
        );
        manifest.stage("heatmap", data.tweets.len(), scope.len(), started);
        out.write("heatmap.json", &json_bytes(&heatmap)?)?;
    }
    if all || *task == Task::Topics {
        emit_topics(cfg, seed, &prep.actors, &data.tweets, manifest, out)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct IngestSummary<'a> {
    parse: &'a ParseReport,
    preprocess: &'a PreprocessReport,
    stats: electionpulse::ingest::DatasetStats,
}

fn emit_ingest(
    data: &Data,
    prep: &Prep,
    manifest: &mut RunManifest,
    out: &mut Staging,
) -> anyhow::Result<()> {
    let started = Instant::now();
    let stats = dataset_stats(&data.records, &data.tweets, &prep.actors)?;
    manifest.stage("stats", data.records.len(), stats.per_group.len(), started);
    out.write(
        "stats.json",
        &json_bytes(&IngestSummary {
            parse: &data.parse,
            preprocess: &data.preprocess,
            stats,
        })?,
    )?;
    let mut buf = Vec::new();
    write_records_csv(&data.tweets, &prep.actors, &mut buf)?;
    out.write("records.csv", &buf)?;
    Ok(())
}

fn emit_scores(
    cfg: &RunConfig,
    tweets: &[ProcessedTweet],
    scores: &[SentimentScore],
    out: &mut Staging,
) -> anyhow::Result<()> {
    let threshold = cfg.sentiment.subjectivity_threshold;
    let mut rows = Vec::with_capacity(tweets.len());
    for (t, s) in tweets.iter().zip(scores) {
        let subj = subjectivity_class(s.subjectivity(), threshold)?;
        rows.push(vec![
            t.record_id.clone(),
            t.created_at.to_rfc3339(),
            bucket_label(t.bucket).to_string(),
            cfg.sentiment.engine.clone(),
            s.polarity().to_string(),
            s.subjectivity().to_string(),
            polarity_class(s.polarity())?.as_str().to_string(),
            subj.as_str().to_string(),
        ]);
    }
    let header = [
        "id",
        "created_at",
        "bucket",
        "engine",
        "polarity",
        "subjectivity",
        "polarity_class",
        "subjectivity_class",
    ];
    out.write("scores.csv", &csv_bytes(&header, rows)?)?;
    Ok(())
}

fn load_nbc_training(cfg: &RunConfig, prep: &Prep) -> anyhow::Result<Option<NbcModel>> {
    let Some(path) = &cfg.sentiment.nbc_corpus else {
        return Ok(None);
    };
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let docs: Vec<(String, Vec<String>)> = read_labeled_corpus(file)?
        .into_iter()
        .map(|(label, text)| (label, preprocess_text(&text, &prep.pipeline)))
        .collect();
    Ok(Some(nbc_train(&docs, cfg.sentiment.nbc_alpha)?))
}

fn emit_nbc_model(
    cfg: &RunConfig,
    prep: &Prep,
    manifest: &mut RunManifest,
    out: &mut Staging,
) -> anyhow::Result<()> {
    let started = Instant::now();
    let model = load_nbc_training(cfg, prep)?.ok_or_else(|| anyhow!("no labeled corpus"))?;
    manifest.stage(
        "train_nbc",
        model.class_priors.len(),
        model.vocabulary.len(),
        started,
    );
    out.write("nbc_model.json", &json_bytes(&model)?)?;
    Ok(())
}

fn emit_compare(
    cfg: &RunConfig,
    prep: &Prep,
    tweets: &[ProcessedTweet],
    registry: &EngineRegistry,
    out: &mut Staging,
) -> anyhow::Result<()> {
    let mut rows: Vec<ClassifierRow> = compare_classifiers(tweets, registry)?;
    if let Some(model) = load_nbc_training(cfg, prep)? {
        let classes = tweets
            .iter()
            .map(|t| {
                let label = nbc_classify(&model, &t.tokens).label;
                PolarityClass::from_label(&label).ok_or_else(|| {
                    electionpulse::Error::Config(format!(
                        "nbc label '{label}' is not a polarity class (positive, neutral, negative)"
                    ))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(ClassifierRow {
            engine: "nbc".into(),
            distribution: distribution(&classes),
        });
    }
    let header = [
        "classifier",
        "positive",
        "neutral",
        "negative",
        "total",
        "positive_pct",
        "neutral_pct",
        "negative_pct",
    ];
    let rows = rows.into_iter().map(|r| {
        let (c, p) = (r.distribution.counts, r.distribution.percentages);
        vec![
            r.engine,
            c.positive.to_string(),
            c.neutral.to_string(),
            c.negative.to_string(),
            c.total().to_string(),
            p.positive.to_string(),
            p.neutral.to_string(),
            p.negative.to_string(),
        ]
    });
    out.write("compare.csv", &csv_bytes(&header, rows)?)?;
    Ok(())
}

/// Mentions per configured actor, with class counts over sole mentions for
/// scope actors. The first row covers every kept tweet.
fn emit_counts(
    cfg: &RunConfig,
    actors: &ActorSet,
    scope: &[String],
    tweets: &[ProcessedTweet],
    scores: &[SentimentScore],
    out: &mut Staging,
) -> anyhow::Result<()> {
    let mentions = actors.group_counts(&actors.mention_matrix(tweets));
    let classes: BTreeMap<String, _> = actor_sentiment_counts(
        tweets,
        scores,
        actors,
        scope,
        cfg.sentiment.subjectivity_threshold,
    )?
    .into_iter()
    .map(|c| (c.actor.clone(), c))
    .collect();

    let kind = |k: ActorKind| match k {
        ActorKind::Candidate => "candidate",
        ActorKind::Party => "party",
        ActorKind::Combined => "combined",
    };
    let ids = std::iter::once(("all".to_string(), "all", tweets.len())).chain(
        actors
            .iter()
            .map(|a| (a.id.clone(), kind(a.kind), mentions[&a.id])),
    );
    let rows = ids.map(|(id, kind, mentioned)| {
        let mut row = vec![id.clone(), kind.to_string(), mentioned.to_string()];
        match classes.get(&id) {
            Some(c) => row.extend(
                [
                    c.tweets,
                    c.positive,
                    c.neutral,
                    c.negative,
                    c.subjective,
                    c.objective,
                ]
                .map(|v| v.to_string()),
            ),
            None => row.extend(std::iter::repeat_n(String::new(), 6)),
        }
        row
    });
    let header = [
        "actor",
        "kind",
        "mentions",
        "sole_mentions",
        "positive",
        "neutral",
        "negative",
        "subjective",
        "objective",
    ];
    out.write("counts.csv", &csv_bytes(&header, rows)?)?;
    Ok(())
}

fn emit_clouds(
    cfg: &RunConfig,
    prep: &Prep,
    scope: &[String],
    actor: Option<String>,
    tweets: &[ProcessedTweet],
    out: &mut Staging,
) -> anyhow::Result<()> {
    let targets = match actor {
        Some(a) if prep.actors.get(&a).is_none() => {
            return Err(electionpulse::Error::Config(format!("cloud: unknown actor '{a}'")).into())
        }
        Some(a) => vec![a],
        None => scope.to_vec(),
    };
    let clouds: BTreeMap<&str, FrequencyTable> = targets
        .iter()
        .map(|a| {
            let table = cooccurrence_cloud(
                tweets,
                &prep.actors,
                a,
                &prep.pipeline.stopwords,
                cfg.analytics.top_n,
            );
            (a.as_str(), table)
        })
        .collect();
    out.write("clouds.json", &json_bytes(&clouds)?)?;
    Ok(())
}

fn emit_timeseries(
    cfg: &RunConfig,
    actors: &ActorSet,
    scope: &[String],
    tweets: &[ProcessedTweet],
    scores: &[SentimentScore],
    out: &mut Staging,
) -> anyhow::Result<()> {
    let series = avg_sentiment_series(tweets, scores, actors, scope, cfg.sentiment.polarity_scale)?;
    let rows = series.iter().flat_map(|s| {
        s.cells.iter().map(|c| {
            vec![
                s.actor.clone(),
                c.bucket.label().to_string(),
                c.count.to_string(),
                opt(c.mean_polarity_x100),
                opt(c.mean_subjectivity),
            ]
        })
    });
    let header = [
        "actor",
        "bucket",
        "count",
        "mean_polarity_x100",
        "mean_subjectivity",
    ];
    out.write("timeseries.csv", &csv_bytes(&header, rows)?)?;
    Ok(())
}

fn emit_topics(
    cfg: &RunConfig,
    seed: u64,
    actors: &ActorSet,
    tweets: &[ProcessedTweet],
    manifest: &mut RunManifest,
    out: &mut Staging,
) -> anyhow::Result<()> {
    let t = &cfg.topics;
    let group: Vec<ProcessedTweet> = if t.group == "all" {
        tweets.to_vec()
    } else {
        tweets
            .iter()
            .filter(|tw| actors.match_actors(tw).contains(&t.group))
            .cloned()
            .collect()
    };
    let started = Instant::now();
    let corpus = build_corpus(&group, cfg.preprocess.min_doc_len, &t.group)?;
    manifest.count("topic_docs", corpus.num_docs());
    manifest.count("topic_docs_dropped", corpus.dropped);
    manifest.count("topic_vocabulary", corpus.vocab_size());
    let params = LdaParams {
        k: t.k,
        alpha: t.alpha,
        beta: t.beta,
        iterations: t.iterations,
        seed,
    };
    let model = lda_fit(&corpus, params)?;
    manifest.stage("lda", group.len(), corpus.num_docs(), started);
    let labels = match &t.labels {
        Some(p) => Some(load_topic_labels(p).map_err(electionpulse::Error::Config)?),
        None => None,
    };
    let report = topic_report(&model, t.top_words, labels.as_ref())?;
    out.write("topics.json", &json_bytes(&report)?)?;
    let mut buf = Vec::new();
    report.write_csv(&mut buf)?;
    out.write("topics.csv", &buf)?;
    Ok(())
}
