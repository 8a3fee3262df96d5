//! `extract`: per-benchmark answer extraction for auditing evaluation harnesses.

use std::path::PathBuf;

use lingoreward_core::extraction::{Benchmark, ExtractionStage};
use lingoreward_core::numeric::parse_math_answer;
use serde::{Deserialize, Serialize};

use crate::error::CliResult;
use crate::io::{self, AtomicFile};

#[derive(Debug, Clone)]
pub struct ExtractOptions {
    pub input: PathBuf,
    pub benchmark: Benchmark,
    pub output: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractLine {
    pub line: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub benchmark: Benchmark,
    pub value: String,
    pub stage: ExtractionStage,
    /// Canonical number for numeric benchmarks when the value is a rational.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalized: Option<String>,
}

#[derive(Deserialize)]
struct TextRecord {
    id: Option<String>,
    text: String,
}

/// A `{"id": .., "text": ..}` object, or the raw line as text.
fn parse_line(line: &str) -> (Option<String>, String) {
    if line.trim_start().starts_with('{') {
        if let Ok(rec) = serde_json::from_str::<TextRecord>(line) {
            return (rec.id, rec.text);
        }
    }
    (None, line.to_string())
}

pub fn extract_line(line_no: usize, line: &str, benchmark: Benchmark) -> ExtractLine {
    let (id, text) = parse_line(line);
    let answer = benchmark.extract(&text);
    let normalized = (benchmark.is_numeric() && answer.is_found())
        .then(|| parse_math_answer(&answer.value))
        .and_then(|v| v.rational().is_some().then(|| v.canonical()));
    ExtractLine {
        line: line_no,
        id,
        benchmark,
        value: answer.value,
        stage: answer.stage,
        normalized,
    }
}

pub fn run(opts: &ExtractOptions) -> CliResult<usize> {
    let mut reader = io::open_input(&opts.input)?;
    let mut out = AtomicFile::create(&opts.output)?;
    let mut count = 0;
    loop {
        let lines = io::read_chunk(&mut reader, &opts.input, 4096)?;
        if lines.is_empty() {
            break;
        }
        for line in &lines {
            count += 1;
            let rec = extract_line(count, line, opts.benchmark);
            out.write_line(&serde_json::to_string(&rec).expect("serializable"))?;
        }
    }
    out.commit()?;
    Ok(count)
}
