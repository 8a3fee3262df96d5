//! `bench`: composite-scoring throughput on synthetic completions.

use std::time::Instant;

use lingoreward_core::langid::{LangCode, TrigramModel};
use lingoreward_core::rewards::{exact_sum, Completion, ConfigFile, Preset};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::CliResult;
use crate::score::{thread_pool, Scorer};

const SENTENCES: [(&str, &str); 5] = [
    ("de", include_str!("../../../data/langid/heldout/de.txt")),
    ("en", include_str!("../../../data/langid/heldout/en.txt")),
    ("es", include_str!("../../../data/langid/heldout/es.txt")),
    ("fr", include_str!("../../../data/langid/heldout/fr.txt")),
    ("it", include_str!("../../../data/langid/heldout/it.txt")),
];

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub records: usize,
    pub workers: usize,
    /// Approximate completion size in bytes.
    pub bytes: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchResult {
    pub records: usize,
    pub workers: usize,
    pub mean_bytes: f64,
    pub seconds: f64,
    pub per_second: f64,
    /// Sum of all totals, so the work cannot be skipped.
    pub checksum: f64,
}

/// Reasoning block, prose answer and a boxed number, about `bytes` long.
pub fn synthetic_completions(n: usize, bytes: usize, seed: u64) -> Vec<Completion> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pools: Vec<(&str, Vec<&str>)> = SENTENCES
        .iter()
        .map(|(l, text)| (*l, text.lines().filter(|s| !s.trim().is_empty()).collect()))
        .collect();
    (0..n)
        .map(|i| {
            let (lang, pool) = &pools[i % pools.len()];
            let answer = rng.gen_range(1..1000);
            let mut think = String::new();
            while think.len() < bytes * 3 / 4 {
                think.push_str(pool.choose(&mut rng).expect("non-empty pool"));
                think.push(' ');
            }
            let mut output = String::new();
            while think.len() + output.len() < bytes.saturating_sub(40) {
                output.push_str(pool.choose(&mut rng).expect("non-empty pool"));
                output.push(' ');
            }
            let gold = if rng.gen_bool(0.5) { answer } else { answer + 1 };
            Completion {
                id: format!("bench-{i}"),
                target_language: LangCode::new(lang).expect("valid code"),
                text: format!("<think>{}</think> {}\\boxed{{{answer}}}", think.trim_end(), output),
                gold_answer: Some(gold.to_string()),
                benchmark: None,
            }
        })
        .collect()
}

pub fn run(model: TrigramModel, opts: &BenchOptions) -> CliResult<BenchResult> {
    let scorer = Scorer::new(model, &ConfigFile::default(), Preset::default())?;
    let pool = thread_pool(opts.workers)?;
    let completions = synthetic_completions(opts.records, opts.bytes, opts.seed);
    let mean_bytes = completions.iter().map(|c| c.text.len()).sum::<usize>() as f64 / opts.records.max(1) as f64;

    let start = Instant::now();
    let totals: Vec<f64> = pool.install(|| {
        completions
            .par_iter()
            .map(|c| scorer.score(c).map_or(f64::NAN, |b| b.total))
            .collect()
    });
    let seconds = start.elapsed().as_secs_f64();
    Ok(BenchResult {
        records: opts.records,
        workers: opts.workers,
        mean_bytes,
        seconds,
        per_second: opts.records as f64 / seconds,
        checksum: exact_sum(totals),
    })
}
