use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lingoreward_cli::bench::{self, BenchOptions};
use lingoreward_cli::extract::{self, ExtractOptions};
use lingoreward_cli::filter::{self, FilterOptions};
use lingoreward_cli::score::{self, ScoreOptions};
use lingoreward_cli::train::{self, TrainOptions};
use lingoreward_cli::{default_workers, io, model, report, CliResult, CONFIG_ENV};
use lingoreward_core::langid::{DEFAULT_SHARPNESS, DEFAULT_SMOOTHING};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "lingoreward", version, about = "Verifiable reward scoring for target-language reasoning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score completions; writes one line per record plus <output>.report.json.
    Score {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Reward config (TOML).
        #[arg(long, env = CONFIG_ENV)]
        config: Option<PathBuf>,
        /// Language model file; the bundled model when absent.
        #[arg(long)]
        model: Option<PathBuf>,
        /// Default weight table: table8 or maintext.
        #[arg(long, default_value = "table8")]
        preset: String,
        /// Worker threads (default: available cores).
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Extract answers the way a benchmark harness would.
    Extract {
        #[arg(long)]
        input: PathBuf,
        /// mgsm, math100, mc4, mc2 or bool.
        #[arg(long)]
        benchmark: String,
        #[arg(long)]
        output: PathBuf,
    },
    /// Filter and downsample annotated corpus records; writes <output>.stats.json.
    Filter {
        #[arg(long)]
        input: PathBuf,
        /// Sampling plan (TOML); default class ratios when absent.
        #[arg(long)]
        plan: Option<PathBuf>,
        #[arg(long)]
        output: PathBuf,
    },
    /// Train a language model from <code>.txt files.
    LangidTrain {
        #[arg(long)]
        corpus_dir: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Comma-separated language codes; every <code>.txt when absent.
        #[arg(long, value_delimiter = ',')]
        languages: Option<Vec<String>>,
        #[arg(long, default_value_t = DEFAULT_SMOOTHING)]
        smoothing: f64,
        #[arg(long, default_value_t = DEFAULT_SHARPNESS)]
        sharpness: f64,
        /// Cross-validation folds (0 to skip).
        #[arg(long, default_value_t = 5)]
        folds: usize,
    },
    /// Recompute the aggregate report from a score output file.
    Report {
        #[arg(long)]
        input: PathBuf,
        /// Report destination; stdout when absent.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Measure composite-scoring throughput on synthetic completions.
    Bench {
        #[arg(long, default_value_t = 20_000)]
        records: usize,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, default_value_t = 1024)]
        bytes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        model: Option<PathBuf>,
    },
}

fn print_json(value: &impl Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Score {
            input,
            output,
            config,
            model,
            preset,
            workers,
        } => {
            let opts = ScoreOptions {
                input,
                output,
                config,
                model,
                preset: preset.parse()?,
                workers: workers.unwrap_or_else(default_workers),
            };
            let report = score::run(&opts)?;
            eprintln!(
                "scored {} of {} records ({} errors), %TL {:.2}",
                report.scored, report.records, report.errors, report.target_language_pct
            );
        }
        Command::Extract {
            input,
            benchmark,
            output,
        } => {
            let opts = ExtractOptions {
                input,
                benchmark: benchmark.parse()?,
                output,
            };
            let n = extract::run(&opts)?;
            eprintln!("extracted {n} records");
        }
        Command::Filter { input, plan, output } => {
            let stats = filter::run(&FilterOptions { input, plan, output })?;
            eprintln!(
                "kept {} of {} records ({} malformed)",
                stats.kept, stats.total, stats.malformed
            );
        }
        Command::LangidTrain {
            corpus_dir,
            output,
            languages,
            smoothing,
            sharpness,
            folds,
        } => {
            let summary = train::run(&TrainOptions {
                corpus_dir,
                output,
                languages,
                smoothing,
                sharpness,
                folds,
            })?;
            print_json(&summary);
        }
        Command::Report { input, output } => {
            let report = report::from_output(&input)?;
            match output {
                Some(path) => io::write_json(&path, &report)?,
                None => print_json(&report),
            }
        }
        Command::Bench {
            records,
            workers,
            bytes,
            seed,
            model,
        } => {
            let opts = BenchOptions {
                records,
                workers: workers.unwrap_or_else(default_workers),
                bytes,
                seed,
            };
            print_json(&bench::run(model::load_model(model.as_deref())?, &opts)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

