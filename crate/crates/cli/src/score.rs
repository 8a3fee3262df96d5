//! `score`: composite rewards for a file of completions.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use lingoreward_core::langid::{LanguageIdentifier, TrigramModel};
use lingoreward_core::rewards::{composite_reward, Completion, ConfigFile, Preset, RewardBreakdown, RewardConfig};
use lingoreward_core::Error;
use rayon::prelude::*;

use crate::error::{CliResult, Failure};
use crate::io::{self, AtomicFile};
use crate::model::load_model;
use crate::report::{ErrorLine, OutputLine, ReportBuilder, ScoreReport, ScoredLine};

/// Lines scored per parallel batch.
const CHUNK_LINES: usize = 4096;

#[derive(Debug, Clone)]
pub struct ScoreOptions {
    pub input: PathBuf,
    pub output: PathBuf,
    pub config: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub preset: Preset,
    pub workers: usize,
}

/// Resolved configuration per model language. Languages the config file
/// excludes map to the message reported for their records.
pub struct Scorer {
    model: TrigramModel,
    configs: BTreeMap<String, Result<RewardConfig, String>>,
}

impl Scorer {
    pub fn new(model: TrigramModel, file: &ConfigFile, preset: Preset) -> CliResult<Self> {
        if let Some(pinned) = &file.language {
            model
                .language_index(pinned.as_str())
                .map_err(|e| Failure::Config(format!("config language: {e}")))?;
        }
        let mut configs = BTreeMap::new();
        for lang in model.languages() {
            let entry = match file.resolve(lang, preset) {
                Ok(cfg) => {
                    cfg.validate()?;
                    Ok(cfg)
                }
                Err(e @ Error::LanguageMismatch { .. }) => Err(e.to_string()),
                Err(e) => return Err(e.into()),
            };
            configs.insert(lang.to_string(), entry);
        }
        Ok(Self { model, configs })
    }

    pub fn model(&self) -> &TrigramModel {
        &self.model
    }

    /// Scores one parsed completion.
    pub fn score(&self, completion: &Completion) -> Result<RewardBreakdown, String> {
        if completion.id.is_empty() {
            return Err("record id is empty".into());
        }
        let lang = completion.target_language.as_str();
        let cfg = match self.configs.get(lang) {
            Some(Ok(cfg)) => cfg,
            Some(Err(msg)) => return Err(msg.clone()),
            None => return Err(Error::UnknownLanguage(lang.to_string()).to_string()),
        };
        composite_reward(completion, cfg, &self.model).map_err(|e| e.to_string())
    }

    /// Scores one input line; `line_no` is 1-based.
    pub fn score_line(&self, line_no: usize, line: &str) -> OutputLine {
        let error = |id: Option<String>, error: String| {
            OutputLine::Error(ErrorLine {
                line: line_no,
                id,
                error,
            })
        };
        if line.trim().is_empty() {
            return error(None, "empty record".into());
        }
        let completion: Completion = match serde_json::from_str(line) {
            Ok(c) => c,
            Err(e) => return error(salvage_id(line), format!("malformed record: {e}")),
        };
        match self.score(&completion) {
            Ok(breakdown) => OutputLine::Scored(ScoredLine {
                line: line_no,
                id: completion.id,
                target_language: completion.target_language.to_string(),
                breakdown,
            }),
            Err(msg) => error(Some(completion.id), msg),
        }
    }
}

/// The `id` field of a record that failed to parse as a completion, if any.
fn salvage_id(line: &str) -> Option<String> {
    let value: serde_json::Value = serde_json::from_str(line).ok()?;
    value.get("id")?.as_str().map(str::to_string)
}

pub fn load_config(path: Option<&Path>) -> CliResult<ConfigFile> {
    match path {
        Some(p) => ConfigFile::parse(&io::read_to_string(p)?).map_err(|e| Failure::at(p, e)),
        None => Ok(ConfigFile::default()),
    }
}

pub fn thread_pool(workers: usize) -> CliResult<rayon::ThreadPool> {
    if workers == 0 {
        return Err(Failure::Config("--workers must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Failure::Config(format!("cannot start {workers} workers: {e}")))
}

/// Writes one output line per input line, in input order, then the report
/// sidecar `<output>.report.json`.
pub fn run(opts: &ScoreOptions) -> CliResult<ScoreReport> {
    let config = load_config(opts.config.as_deref())?;
    let scorer = Scorer::new(load_model(opts.model.as_deref())?, &config, opts.preset)?;
    let pool = thread_pool(opts.workers)?;

    let mut reader = io::open_input(&opts.input)?;
    let mut out = AtomicFile::create(&opts.output)?;
    let mut report = ReportBuilder::default();
    let mut first_line = 1;
    loop {
        let lines = io::read_chunk(&mut reader, &opts.input, CHUNK_LINES)?;
        if lines.is_empty() {
            break;
        }
        let results: Vec<(OutputLine, String)> = pool.install(|| {
            lines
                .par_iter()
                .enumerate()
                .map(|(k, line)| {
                    let result = scorer.score_line(first_line + k, line);
                    let json = serde_json::to_string(&result).expect("serializable");
                    (result, json)
                })
                .collect()
        });
        for (result, json) in &results {
            report.add(result);
            out.write_line(json)?;
        }
        first_line += lines.len();
    }
    let report = report.finish();
    out.commit()?;
    io::write_json(&io::sidecar(&opts.output, ".report.json"), &report)?;
    Ok(report)
}
