//! `sollens`: contract analysis from the command line.
//!
//! Subcommands cover the full pipeline: ERC20 conformance checks, function
//! extraction, dataset preparation, training and evaluation of the
//! permission classifier, information-gain ranking, the keyword baseline,
//! predecessor/successor pair mining and pair diffing. All randomness
//! flows from `--seed`; identical invocations produce identical bytes.

mod commands;
mod report;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "sollens", version, about = "Static analysis and lineage mining for Solidity contracts")]
struct Cli {
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SeedArg {
    /// Seed for every random choice of the run.
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check ERC20 interface conformance of .sol files or corpus records.
    #[command(name = "check-erc20")]
    CheckErc20 {
        /// Solidity files (.sol) or line-delimited corpus files.
        #[arg(required = true)]
        paths: Vec<String>,
    },
    /// Extract labeled function records from .sol files or corpus records.
    Extract {
        #[arg(required = true)]
        paths: Vec<String>,
        /// File of modifier names that do not count as permission checks.
        #[arg(long, value_name = "FILE")]
        deny_modifiers: Option<String>,
        /// Write records here instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<String>,
    },
    /// Assign cross-validation fold IDs to a function dataset.
    Dataset {
        functions: String,
        #[command(flatten)]
        seed: SeedArg,
        /// Number of parts; the protocol uses 10.
        #[arg(long, default_value_t = 10)]
        folds: u8,
        #[arg(long, value_name = "FILE")]
        out: Option<String>,
    },
    /// Train one classifier on a full dataset and save the model.
    Train {
        dataset: String,
        /// Algorithm: dtree, knn, rf, logreg or nb.
        #[arg(long)]
        algo: String,
        #[command(flatten)]
        seed: SeedArg,
        /// Model output path.
        #[arg(long, value_name = "FILE")]
        out: String,
    },
    /// Cross-validate one classifier (10 rounds, 7/3 split).
    Eval {
        dataset: String,
        #[arg(long, default_value = "dtree")]
        algo: String,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, default_value_t = 10)]
        folds: u8,
    },
    /// Predict permission labels for every function of the given files.
    Predict {
        #[arg(long, value_name = "FILE")]
        model: String,
        #[arg(required = true)]
        paths: Vec<String>,
    },
    /// Rank dataset words by information gain.
    Ig {
        dataset: String,
        /// Show only the highest-ranked words.
        #[arg(long, value_name = "N")]
        top: Option<usize>,
    },
    /// Score the keyword baseline against the dataset labels.
    Baseline {
        dataset: String,
        /// Keyword list file, one lowercase keyword per line.
        #[arg(long, value_name = "FILE")]
        keywords: Option<String>,
    },
    /// Mine predecessor/successor pairs from a corpus.
    Pairs {
        /// Line-delimited corpus file.
        #[arg(long, value_name = "FILE")]
        corpus: String,
        /// Similarity cutoff; pairs must score strictly higher.
        #[arg(long, default_value_t = sollens_core::lineage::DEFAULT_SIMILARITY_THRESHOLD)]
        threshold: f64,
        /// Map identifiers to positional placeholders before comparing.
        #[arg(long)]
        normalize_identifiers: bool,
    },
    /// Line diff between two contract source files.
    Diff {
        old: String,
        new: String,
        /// Omit whitespace-only line changes.
        #[arg(long)]
        ignore_blank: bool,
    },
}

/// Failure classed by exit code: usage errors exit 1, unreadable or
/// unparseable inputs exit 2.
pub enum AppError {
    Usage(String),
    Input(String),
}

impl AppError {
    fn code(&self) -> u8 {
        match self {
            AppError::Usage(_) => 1,
            AppError::Input(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            AppError::Usage(m) | AppError::Input(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let format = cli.format;
    let result = match cli.command {
        Command::CheckErc20 { paths } => commands::check_erc20(&paths, format),
        Command::Extract {
            paths,
            deny_modifiers,
            out,
        } => commands::extract(&paths, deny_modifiers.as_deref(), out.as_deref()),
        Command::Dataset {
            functions,
            seed,
            folds,
            out,
        } => commands::dataset(&functions, seed.seed, folds, out.as_deref()),
        Command::Train {
            dataset,
            algo,
            seed,
            out,
        } => commands::train(&dataset, &algo, seed.seed, &out),
        Command::Eval {
            dataset,
            algo,
            seed,
            folds,
        } => commands::eval(&dataset, &algo, seed.seed, folds, format),
        Command::Predict { model, paths } => commands::predict(&model, &paths, format),
        Command::Ig { dataset, top } => commands::ig(&dataset, top, format),
        Command::Baseline { dataset, keywords } => {
            commands::baseline(&dataset, keywords.as_deref(), format)
        }
        Command::Pairs {
            corpus,
            threshold,
            normalize_identifiers,
        } => commands::pairs(&corpus, threshold, normalize_identifiers, format),
        Command::Diff {
            old,
            new,
            ignore_blank,
        } => commands::diff(&old, &new, ignore_blank, format),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.code())
        }
    }
}
