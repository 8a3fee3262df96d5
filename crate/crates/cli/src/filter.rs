//! `filter`: mandatory and quality filters followed by class-balanced sampling.

use std::path::PathBuf;

use lingoreward_core::corpus::{filter_stats, run_pipeline, AnnotationRecord, FilterStats, SamplingPlan};

use crate::error::{CliResult, Failure};
use crate::io::{self, AtomicFile};

#[derive(Debug, Clone)]
pub struct FilterOptions {
    pub input: PathBuf,
    /// Sampling plan (TOML); the default class ratios when absent.
    pub plan: Option<PathBuf>,
    pub output: PathBuf,
}

pub fn load_plan(opts: &FilterOptions) -> CliResult<SamplingPlan> {
    match &opts.plan {
        Some(p) => SamplingPlan::parse(&io::read_to_string(p)?).map_err(|e| Failure::at(p, e)),
        None => Ok(SamplingPlan::default()),
    }
}

/// Writes kept input lines verbatim, in input order, plus `<output>.stats.json`.
/// Blank lines are ignored; lines that do not parse are counted as malformed.
pub fn run(opts: &FilterOptions) -> CliResult<FilterStats> {
    let plan = load_plan(opts)?;
    let mut reader = io::open_input(&opts.input)?;
    let mut lines = Vec::new();
    let mut records = Vec::new();
    let mut malformed = 0;
    loop {
        let chunk = io::read_chunk(&mut reader, &opts.input, 4096)?;
        if chunk.is_empty() {
            break;
        }
        for line in chunk {
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<AnnotationRecord>(&line) {
                Ok(rec) => {
                    records.push(rec);
                    lines.push(line);
                }
                Err(_) => malformed += 1,
            }
        }
    }
    let result = run_pipeline(&records, &plan)?;
    let mut stats = filter_stats(&result.outcomes);
    stats.malformed = malformed;

    let mut out = AtomicFile::create(&opts.output)?;
    for &i in &result.kept {
        out.write_line(&lines[i])?;
    }
    out.commit()?;
    io::write_json(&io::sidecar(&opts.output, ".stats.json"), &stats)?;
    Ok(stats)
}
