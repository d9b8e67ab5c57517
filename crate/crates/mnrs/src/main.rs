use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mnrs::config::{PartialConfig, RunConfig, OUTPUT_DIR_ENV};
use mnrs::{Command, Error};

/// Target-group normalized reader impact indicators.
#[derive(Debug, Parser)]
#[command(name = "mnrs", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Validate a corpus and report reader-count statistics per status group.
    IngestCheck(Opts),
    /// Compute baseline tables, one per target group.
    Baseline(Opts),
    /// Score every paper against the baselines.
    Score(Opts),
    /// Aggregate scores by entity and rank.
    Rank(Opts),
    /// Compare papers carrying a tag with the other tagged papers.
    Compare(Opts),
    /// Run ingest-check, baseline, score, rank and (with --tag) compare.
    Pipeline(Opts),
}

#[derive(Debug, Args)]
struct Opts {
    /// TOML file with defaults for any of the options below.
    #[arg(long, short)]
    config: Option<PathBuf>,
    /// Corpus file (JSON lines).
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Target groups: named groups, status-group lists joined by `+`, sector:NAME,
    /// usertype:NAME or citations. Repeat or separate with commas.
    #[arg(long = "group", short = 'g')]
    groups: Vec<String>,
    /// multiplicative, fractional, full-averaged or full-scaled.
    #[arg(long)]
    mode: Option<String>,
    /// Directory of frozen baseline tables to use instead of computing them.
    #[arg(long)]
    baseline_dir: Option<PathBuf>,
    /// journal, country, institution or custom:FIELD.
    #[arg(long)]
    entity: Option<String>,
    /// Minimum distinct papers for an entity to be ranked.
    #[arg(long)]
    min_distinct: Option<u64>,
    /// Number of entities in ranked reports.
    #[arg(long)]
    top_k: Option<usize>,
    /// Output directory [env: MNRS_OUTPUT_DIR, default: mnrs-out].
    #[arg(long, short)]
    output_dir: Option<PathBuf>,
    /// Report formats: csv, records, markdown. Repeat or separate with commas.
    #[arg(long = "format", short = 'f')]
    formats: Vec<String>,
    /// Worker threads; 0 uses one per core.
    #[arg(long, short = 'j')]
    workers: Option<usize>,
    /// TOML taxonomy override.
    #[arg(long)]
    taxonomy: Option<PathBuf>,
    /// Reference-set key: category+doc_type+year, category+year, category+doc_type or category.
    #[arg(long)]
    key_scope: Option<String>,
    /// Corpus schema version expected in the file header.
    #[arg(long)]
    schema_version: Option<String>,
    /// Tag for compare.
    #[arg(long)]
    tag: Option<String>,
}

impl Opts {
    fn into_config(self) -> Result<RunConfig, Error> {
        let file = match &self.config {
            Some(path) => PartialConfig::from_file(path)?,
            None => PartialConfig::default(),
        };
        let flags = PartialConfig {
            corpus: self.corpus,
            groups: (!self.groups.is_empty()).then_some(self.groups),
            mode: self.mode,
            baseline_dir: self.baseline_dir,
            entity: self.entity,
            min_distinct: self.min_distinct,
            top_k: self.top_k,
            output_dir: self.output_dir,
            formats: (!self.formats.is_empty()).then_some(self.formats),
            workers: self.workers,
            taxonomy: self.taxonomy,
            key_scope: self.key_scope,
            schema_version: self.schema_version,
            tag: self.tag,
        };
        let env_dir = std::env::var_os(OUTPUT_DIR_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from);
        RunConfig::resolve(flags.over(file), env_dir)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let (cmd, opts) = match cli.command {
        Cmd::IngestCheck(o) => (Command::IngestCheck, o),
        Cmd::Baseline(o) => (Command::Baseline, o),
        Cmd::Score(o) => (Command::Score, o),
        Cmd::Rank(o) => (Command::Rank, o),
        Cmd::Compare(o) => (Command::Compare, o),
        Cmd::Pipeline(o) => (Command::Pipeline, o),
    };
    let result = opts.into_config().and_then(|cfg| mnrs::run(cmd, &cfg));
    match result {
        Ok(outcome) => ExitCode::from(outcome.exit_code as u8),
        Err(e) => {
            eprintln!("mnrs: error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
