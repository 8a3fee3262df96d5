//! `langid-train`: builds a trigram model from one `<code>.txt` file per language.

use std::collections::BTreeMap;
use std::path::PathBuf;

use lingoreward_core::langid::{cross_validate, train_profiles, CrossValidation, LangCode};
use serde::Serialize;

use crate::error::{CliResult, Failure};
use crate::io;

#[derive(Debug, Clone)]
pub struct TrainOptions {
    pub corpus_dir: PathBuf,
    pub output: PathBuf,
    /// Languages to train; every `<code>.txt` in the directory when absent.
    pub languages: Option<Vec<String>>,
    pub smoothing: f64,
    pub sharpness: f64,
    /// Cross-validation folds; fewer than 2 skips cross-validation.
    pub folds: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrainSummary {
    pub languages: Vec<String>,
    pub characters: BTreeMap<String, usize>,
    pub model_bytes: usize,
    pub cross_validation: Option<CrossValidation>,
}

fn discover(opts: &TrainOptions) -> CliResult<Vec<LangCode>> {
    let entries = std::fs::read_dir(&opts.corpus_dir).map_err(|e| Failure::io(&opts.corpus_dir, e))?;
    let mut codes = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Failure::io(&opts.corpus_dir, e))?.path();
        if path.extension().and_then(|e| e.to_str()) != Some("txt") {
            continue;
        }
        if let Some(code) = path.file_stem().and_then(|s| s.to_str()).and_then(|s| LangCode::new(s).ok()) {
            codes.push(code);
        }
    }
    codes.sort();
    if codes.is_empty() {
        return Err(Failure::Config(format!(
            "{}: no <code>.txt training files",
            opts.corpus_dir.display()
        )));
    }
    Ok(codes)
}

pub fn run(opts: &TrainOptions) -> CliResult<TrainSummary> {
    let codes = match &opts.languages {
        Some(list) => list
            .iter()
            .map(|c| LangCode::new(c).map_err(Failure::from))
            .collect::<CliResult<Vec<_>>>()?,
        None => discover(opts)?,
    };
    let mut corpus = Vec::with_capacity(codes.len());
    for code in codes {
        let path = opts.corpus_dir.join(format!("{code}.txt"));
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Failure::Io(format!("training text for `{code}` ({}): {e}", path.display())))?;
        corpus.push((code, text));
    }
    let model = train_profiles(&corpus, opts.smoothing)?.with_sharpness(opts.sharpness)?;
    let bytes = model.to_bytes();
    io::write_atomic(&opts.output, &bytes)?;

    let cross_validation = if opts.folds >= 2 {
        Some(cross_validate(&corpus, opts.smoothing, opts.sharpness, opts.folds)?)
    } else {
        None
    };
    Ok(TrainSummary {
        languages: corpus.iter().map(|(c, _)| c.to_string()).collect(),
        characters: corpus.iter().map(|(c, t)| (c.to_string(), t.chars().count())).collect(),
        model_bytes: bytes.len(),
        cross_validation,
    })
}
