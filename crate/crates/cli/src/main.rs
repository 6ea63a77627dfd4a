use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use fallacy_eval::baseline::DEFAULT_SEED;
use fallacy_eval::{AggregateMode, TaxonomyLevel};

mod commands;
mod output;

/// Scores span-level fallacy annotations against gold standards with
/// alternative labels.
#[derive(Debug, Parser)]
#[command(name = "fallacy-eval", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a dataset (and optionally predictions) for structural problems.
    Validate {
        #[command(flatten)]
        input: DatasetArgs,
        #[command(flatten)]
        pred: OptionalPredArgs,
    },
    /// Precision, recall and F1 per document and in aggregate.
    Score {
        #[command(flatten)]
        input: DatasetArgs,
        #[command(flatten)]
        pred: PredArgs,
        #[command(flatten)]
        scoring: ScoringArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Uniform random sentence labels, grouped into spans.
    Baseline {
        #[command(flatten)]
        input: DatasetArgs,
        #[arg(long, env = "FALLACY_EVAL_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Prediction file to write (JSONL); stdout if omitted.
        #[arg(long, env = "FALLACY_EVAL_OUT")]
        out: Option<PathBuf>,
    },
    /// Turn per-sentence model outputs into a prediction file.
    Normalize {
        #[command(flatten)]
        input: DatasetArgs,
        #[arg(long, env = "FALLACY_EVAL_MODEL_OUT")]
        model_out: PathBuf,
        /// Let every label named in an output form its own runs.
        #[arg(long, env = "FALLACY_EVAL_MULTI_LABEL")]
        multi_label: bool,
        #[arg(long, env = "FALLACY_EVAL_OUT")]
        out: Option<PathBuf>,
    },
    /// Best-match scores next to the sum-based metric, flagging divergent rows.
    CompareMetrics {
        #[command(flatten)]
        input: DatasetArgs,
        #[command(flatten)]
        pred: PredArgs,
        #[arg(long, env = "FALLACY_EVAL_LEVEL", value_delimiter = ',', default_value = "all", value_parser = parse_level)]
        level: Vec<LevelSelection>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Score every annotator against every other.
    Cross {
        /// `NAME=PATH` of an annotator's dataset file; give at least two.
        #[arg(long = "annotator", required = true, num_args = 1, value_parser = parse_annotator)]
        annotators: Vec<(String, PathBuf)>,
        #[arg(long, env = "FALLACY_EVAL_TAXONOMY")]
        taxonomy: Option<PathBuf>,
        #[command(flatten)]
        scoring: ScoringArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact span-match counts, per level-1 category.
    Report {
        #[command(flatten)]
        input: DatasetArgs,
        #[command(flatten)]
        pred: PredArgs,
        #[arg(long, env = "FALLACY_EVAL_LEVEL", value_delimiter = ',', default_value = "all", value_parser = parse_level)]
        level: Vec<LevelSelection>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Convert the published corpus into the dataset format.
    Import {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, env = "FALLACY_EVAL_TAXONOMY")]
        taxonomy: Option<PathBuf>,
        /// Fail instead of skipping records that do not validate.
        #[arg(long)]
        strict: bool,
        #[arg(long, env = "FALLACY_EVAL_OUT")]
        out: Option<PathBuf>,
    },
    /// Print the label inventory as JSON.
    Taxonomy {
        #[arg(long, env = "FALLACY_EVAL_TAXONOMY")]
        taxonomy: Option<PathBuf>,
        #[arg(long, env = "FALLACY_EVAL_OUT")]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct DatasetArgs {
    #[arg(long, env = "FALLACY_EVAL_DATASET")]
    dataset: PathBuf,
    /// Label inventory to use instead of the bundled one.
    #[arg(long, env = "FALLACY_EVAL_TAXONOMY")]
    taxonomy: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PredArgs {
    #[arg(long, env = "FALLACY_EVAL_PRED", required_unless_present = "model_out", conflicts_with = "model_out")]
    pred: Option<PathBuf>,
    /// Per-sentence model outputs, normalized before scoring.
    #[arg(long, env = "FALLACY_EVAL_MODEL_OUT")]
    model_out: Option<PathBuf>,
    #[arg(long, env = "FALLACY_EVAL_MULTI_LABEL", requires = "model_out")]
    multi_label: bool,
}

#[derive(Debug, Args)]
struct OptionalPredArgs {
    #[arg(long, env = "FALLACY_EVAL_PRED", conflicts_with = "model_out")]
    pred: Option<PathBuf>,
    #[arg(long, env = "FALLACY_EVAL_MODEL_OUT")]
    model_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ScoringArgs {
    /// Levels to score: 0, 1, 2 or all (comma-separated).
    #[arg(long, env = "FALLACY_EVAL_LEVEL", value_delimiter = ',', default_value = "all", value_parser = parse_level)]
    level: Vec<LevelSelection>,
    #[arg(long, env = "FALLACY_EVAL_AGG", value_enum, default_value_t = AggArg::Macro)]
    agg: AggArg,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, env = "FALLACY_EVAL_FORMAT", value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, env = "FALLACY_EVAL_OUT")]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AggArg {
    Macro,
    Micro,
}

impl From<AggArg> for AggregateMode {
    fn from(a: AggArg) -> Self {
        match a {
            AggArg::Macro => AggregateMode::Macro,
            AggArg::Micro => AggregateMode::Micro,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum LevelSelection {
    One(TaxonomyLevel),
    All,
}

fn parse_level(s: &str) -> Result<LevelSelection, String> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(LevelSelection::All);
    }
    s.parse().map(LevelSelection::One).map_err(|_| format!("expected 0, 1, 2 or all, got {s:?}"))
}

/// Requested levels, deduplicated, coarsest first.
fn levels(selection: &[LevelSelection]) -> Vec<TaxonomyLevel> {
    TaxonomyLevel::ALL
        .into_iter()
        .filter(|l| {
            selection.iter().any(|s| match s {
                LevelSelection::All => true,
                LevelSelection::One(one) => one == l,
            })
        })
        .collect()
}

fn parse_annotator(s: &str) -> Result<(String, PathBuf), String> {
    match s.split_once('=') {
        Some((name, path)) if !name.is_empty() && !path.is_empty() => Ok((name.to_string(), PathBuf::from(path))),
        _ => Err(format!("expected NAME=PATH, got {s:?}")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::Cross { annotators, .. } = &cli.command {
        if annotators.len() < 2 {
            Cli::command()
                .error(ErrorKind::TooFewValues, "cross needs at least two --annotator files")
                .exit();
        }
    }
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
