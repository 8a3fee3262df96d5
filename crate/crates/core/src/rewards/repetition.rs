//! Degenerate-repetition penalty: consecutive n-gram loops, token flooding and
//! long runs of one character, normalized by the square root of the token count.

use rustc_hash::FxHashMap;

use super::config::RepetitionParams;

/// Itemized raw penalty terms for one text.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RepetitionTerms {
    pub tokens: usize,
    /// Redundant tokens inside consecutive n-gram loops.
    pub loop_tokens: usize,
    pub flood: f64,
    pub char_runs: usize,
    /// `min(raw / sqrt(T), 1)`.
    pub penalty: f64,
}

/// Returns a reward in `[-1, 0]`.
pub fn repetition_penalty(text: &str, params: &RepetitionParams) -> f64 {
    let p = repetition_terms(text, params).penalty;
    if p == 0.0 {
        0.0
    } else {
        -p
    }
}

pub fn repetition_terms(text: &str, params: &RepetitionParams) -> RepetitionTerms {
    let ids = token_ids(text);
    let t = ids.len();
    if t == 0 {
        return RepetitionTerms::default();
    }
    let loop_tokens = loop_redundancy(&ids, params.ngram_max);
    let flood = flood_term(&ids, params.flood_threshold);
    let char_runs = char_run_excess(text, params.char_run_min);
    let raw = loop_tokens as f64 + flood + char_runs as f64;
    RepetitionTerms {
        tokens: t,
        loop_tokens,
        flood,
        char_runs,
        penalty: (raw / (t as f64).sqrt()).min(1.0),
    }
}

/// Whitespace tokens interned to small integers.
pub fn token_ids(text: &str) -> Vec<u32> {
    let mut vocab: FxHashMap<&str, u32> = FxHashMap::default();
    text.split_whitespace()
        .map(|tok| {
            let next = vocab.len() as u32;
            *vocab.entry(tok).or_insert(next)
        })
        .collect()
}

/// True when `unit` is not a repetition of a shorter unit.
fn is_primitive(unit: &[u32]) -> bool {
    let n = unit.len();
    !(1..n).any(|p| n.is_multiple_of(p) && (p..n).all(|j| unit[j] == unit[j - p]))
}

/// Counts redundant tokens of consecutive repeats of a primitive n-gram,
/// scanning n from `ngram_max` down to 1 and left to right. A loop of an n-gram
/// repeated k times has `n * (k - 1)` redundant tokens (every copy after the
/// first); a token already attributed to a longer loop is not counted again.
pub fn loop_redundancy(ids: &[u32], ngram_max: usize) -> usize {
    let t = ids.len();
    let mut attributed = vec![false; t];
    let mut redundant = 0;
    for n in (1..=ngram_max.min(t / 2)).rev() {
        let mut i = 0;
        while i + 2 * n <= t {
            let unit = &ids[i..i + n];
            if !is_primitive(unit) {
                i += 1;
                continue;
            }
            let mut k = 1;
            while i + (k + 1) * n <= t && ids[i + k * n..i + (k + 1) * n] == *unit {
                k += 1;
            }
            if k >= 2 {
                for a in &mut attributed[i + n..i + k * n] {
                    redundant += !*a as usize;
                    *a = true;
                }
                i += k * n;
            } else {
                i += 1;
            }
        }
    }
    redundant
}

/// `sum T * (f - threshold)^2` over token types that occur at least twice with
/// relative frequency `f` above the threshold.
pub fn flood_term(ids: &[u32], threshold: f64) -> f64 {
    let t = ids.len();
    if t == 0 {
        return 0.0;
    }
    let mut counts: Vec<u32> = Vec::new();
    for &id in ids {
        let id = id as usize;
        if id >= counts.len() {
            counts.resize(id + 1, 0);
        }
        counts[id] += 1;
    }
    let tf = t as f64;
    counts
        .into_iter()
        .filter(|&c| c >= 2)
        .map(|c| c as f64 / tf)
        .filter(|&f| f > threshold)
        .map(|f| tf * (f - threshold) * (f - threshold))
        .sum()
}

/// `sum (run - (min - 1))` over runs of at least `min` identical non-whitespace chars.
pub fn char_run_excess(text: &str, min: usize) -> usize {
    let mut total = 0;
    let mut prev: Option<char> = None;
    let mut run = 0usize;
    let mut close = |run: usize| {
        if run >= min {
            total += run - (min - 1);
        }
    };
    for c in text.chars() {
        if Some(c) == prev && !c.is_whitespace() {
            run += 1;
        } else {
            close(run);
            run = 1;
            prev = Some(c);
        }
    }
    close(run);
    total
}
