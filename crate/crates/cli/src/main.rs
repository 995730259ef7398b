use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use electionpulse_cli::config::RunConfig;
use electionpulse_cli::run::{run, RunError, Task};

/// Election tweet analytics: sentiment, actor tracking, time series and topics.
#[derive(Parser)]
#[command(name = "electionpulse", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Run configuration (TOML). Flags below override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// JSON-lines tweet file; repeat for several.
    #[arg(long, global = true)]
    input: Vec<PathBuf>,
    /// Dataset UTC offset, e.g. +01:00.
    #[arg(long, global = true)]
    timezone: Option<String>,
    #[arg(long, global = true)]
    field_map: Option<PathBuf>,
    /// Actor config (TOML).
    #[arg(long, global = true)]
    actors: Option<PathBuf>,
    /// Stopword file; repeat for several. Replaces the configured list.
    #[arg(long, global = true)]
    stopwords: Vec<PathBuf>,
    /// Treat actor and party names as stopwords.
    #[arg(long, global = true)]
    extra_stopwords_from_actors: bool,
    #[arg(long, global = true)]
    no_spellcheck: bool,
    #[arg(long, global = true)]
    no_stem: bool,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Random seed; beats ELECTIONPULSE_SEED and the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Dataset statistics and the preprocessed CSV export.
    Ingest,
    /// Print the validated actor set as JSON.
    Actors,
    /// Per-tweet polarity and subjectivity.
    Sentiment {
        #[arg(long, value_parser = ["pattern", "swn"])]
        engine: Option<String>,
    },
    /// Polarity distribution per classifier.
    #[command(alias = "compare-classifiers")]
    Compare,
    /// Mention and sentiment class counts per actor.
    Counts,
    /// Co-occurring terms for one actor or every scope actor.
    Cloud {
        #[arg(long)]
        actor: Option<String>,
    },
    /// Two-hourly mean polarity and subjectivity per actor.
    Timeseries,
    /// Top terms per actor and two-hour bucket.
    Heatmap {
        #[arg(long)]
        top_n: Option<usize>,
    },
    /// LDA topics over all tweets or one actor's tweets.
    Topics {
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        iters: Option<usize>,
        #[arg(long)]
        top_words: Option<usize>,
    },
    /// Every analysis over one preprocessed population.
    All,
    /// Train the Naive Bayes classifier on the labeled corpus.
    TrainNbc {
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Check the configuration and report every problem.
    Validate,
}

fn build_config(g: &Global) -> Result<RunConfig, String> {
    let mut cfg = match &g.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if !g.input.is_empty() {
        cfg.input = g.input.clone();
    }
    if let Some(tz) = &g.timezone {
        cfg.timezone = tz.clone();
    }
    if g.field_map.is_some() {
        cfg.field_map = g.field_map.clone();
    }
    if g.actors.is_some() {
        cfg.actors = g.actors.clone();
    }
    if !g.stopwords.is_empty() {
        cfg.preprocess.stopwords = g.stopwords.clone();
    }
    if g.extra_stopwords_from_actors {
        cfg.preprocess.exclude_actor_names = true;
    }
    if g.no_spellcheck {
        cfg.preprocess.spellcheck = false;
    }
    if g.no_stem {
        cfg.preprocess.stem = false;
    }
    if let Some(out) = &g.out {
        cfg.out_dir = out.clone();
    }
    Ok(cfg)
}

fn task_and_overrides(cmd: Command, cfg: &mut RunConfig) -> Task {
    match cmd {
        Command::Ingest => Task::Ingest,
        Command::Actors => Task::Actors,
        Command::Sentiment { engine } => {
            if let Some(e) = engine {
                cfg.sentiment.engine = e;
            }
            Task::Sentiment
        }
        Command::Compare => Task::Compare,
        Command::Counts => Task::Counts,
        Command::Cloud { actor } => Task::Cloud { actor },
        Command::Timeseries => Task::Timeseries,
        Command::Heatmap { top_n } => {
            if let Some(n) = top_n {
                cfg.analytics.top_n = n;
            }
            Task::Heatmap
        }
        Command::Topics {
            group,
            k,
            alpha,
            beta,
            iters,
            top_words,
        } => {
            let t = &mut cfg.topics;
            if let Some(g) = group {
                t.group = g;
            }
            t.k = k.unwrap_or(t.k);
            t.alpha = alpha.unwrap_or(t.alpha);
            t.beta = beta.unwrap_or(t.beta);
            t.iterations = iters.unwrap_or(t.iterations);
            t.top_words = top_words.unwrap_or(t.top_words);
            Task::Topics
        }
        Command::All => Task::All,
        Command::TrainNbc { alpha } => {
            if let Some(a) = alpha {
                cfg.sentiment.nbc_alpha = a;
            }
            Task::TrainNbc
        }
        Command::Validate => Task::Validate,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let mut cfg = match build_config(&cli.global) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let task = task_and_overrides(cli.command, &mut cfg);
    match run(&task, &cfg, cli.global.seed) {
        Ok(outcome) => {
            if task == Task::Validate {
                println!("configuration ok");
            }
            for a in &outcome.artifacts {
                println!("{}", cfg.out_dir.join(a).display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match &e {
                RunError::Config(_) | RunError::Pipeline(_) => e.exit_code() as u8,
            })
        }
    }
}
