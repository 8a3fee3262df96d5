//! Reward components and their weighted combination.
//!
//! | component   | range      | source                                      |
//! |-------------|------------|---------------------------------------------|
//! | accuracy    | {0, 1}     | last boxed answer vs gold                   |
//! | language    | [0, 1]     | 0.6 * think score + 0.4 * output score      |
//! | format      | [0, 1]     | 0.1 open + 0.3 closed + 0.1 boxed + 0.5 order |
//! | repetition  | [-1, 0]    | loops, flooding, character runs             |
//! | naturalness | [-1, 0]    | Spanish inverted-question-mark misuse       |

mod config;
mod naturalness;
mod repetition;

pub use config::{
    ConfigFile, HesitationMode, LanguageSplit, NaturalnessParams, Preset, RepetitionParams, RewardConfig,
    Weights,
};
pub use naturalness::{fake_questions, naturalness_signals, spanish_naturalness, stacked_marks, NaturalnessSignals};
pub use repetition::{
    char_run_excess, flood_term, loop_redundancy, repetition_penalty, repetition_terms, token_ids, RepetitionTerms,
};

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extraction::{
    extract_boxed_all, extract_bool, extract_last_boxed, extract_mc_letter, split_think, strip_boxed,
    Benchmark, ExtractedAnswer, ExtractionStage, ThinkSplit,
};
use crate::langid::{LangCode, LanguageIdentifier};
use crate::numeric::{answers_equivalent, parse_math_answer};

pub const FORMAT_OPEN_TAG: f64 = 0.1;
pub const FORMAT_CLOSED_BLOCK: f64 = 0.3;
pub const FORMAT_BOXED: f64 = 0.1;
pub const FORMAT_ORDER_BONUS: f64 = 0.5;

/// One model generation to be scored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Completion {
    pub id: String,
    pub target_language: LangCode,
    pub text: String,
    #[serde(default, alias = "gold", skip_serializing_if = "Option::is_none")]
    pub gold_answer: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub benchmark: Option<Benchmark>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComponentScore {
    pub raw: f64,
    pub weight: f64,
    pub contribution: f64,
}

impl ComponentScore {
    fn new(raw: f64, weight: f64) -> Self {
        Self {
            raw,
            weight,
            contribution: weight * raw,
        }
    }
}

/// Per-component scores and their exact weighted sum. Components with zero
/// weight are not computed and stay `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewardBreakdown {
    pub accuracy: Option<ComponentScore>,
    pub language: Option<ComponentScore>,
    pub format: Option<ComponentScore>,
    pub repetition: Option<ComponentScore>,
    pub naturalness: Option<ComponentScore>,
    pub total: f64,
    /// Whether the identified language of the whole completion is the target.
    pub target_language_hit: bool,
    pub extraction_stage: ExtractionStage,
}

impl RewardBreakdown {
    pub fn components(&self) -> [(&'static str, Option<&ComponentScore>); 5] {
        [
            ("accuracy", self.accuracy.as_ref()),
            ("language", self.language.as_ref()),
            ("format", self.format.as_ref()),
            ("repetition", self.repetition.as_ref()),
            ("naturalness", self.naturalness.as_ref()),
        ]
    }
}

/// Correctly rounded sum of floats (Shewchuk's exact partials), so the total
/// does not depend on summation order.
pub fn exact_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut partials: Vec<f64> = Vec::new();
    for mut x in values {
        let mut i = 0;
        for j in 0..partials.len() {
            let mut y = partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                partials[i] = lo;
                i += 1;
            }
            x = hi;
        }
        partials.truncate(i);
        partials.push(x);
    }
    // round the partials back to a single float, half-even on exact ties
    let mut n = partials.len();
    if n == 0 {
        return 0.0;
    }
    n -= 1;
    let mut hi = partials[n];
    let mut lo = 0.0;
    while n > 0 {
        n -= 1;
        let x = hi;
        let y = partials[n];
        hi = x + y;
        let yr = hi - x;
        lo = y - yr;
        if lo != 0.0 {
            break;
        }
    }
    if n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0)) {
        let y = lo * 2.0;
        let x = hi + y;
        let yr = x - hi;
        if y == yr {
            hi = x;
        }
    }
    hi
}

/// Arithmetic mean rounded once from the exact rational mean. `None` for an
/// empty slice or a non-finite value.
pub fn exact_mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sum = BigRational::zero();
    for &v in values {
        sum += BigRational::from_float(v)?;
    }
    (sum / BigRational::from_integer(values.len().into())).to_f64()
}

/// 1.0 when the last boxed answer is equivalent to `gold`, else 0.0.
pub fn accuracy_reward(text: &str, gold: &str) -> (f64, ExtractionStage) {
    let pred = extract_last_boxed(text);
    let score = if pred.is_found() && answers_equivalent(&parse_math_answer(&pred.value), &parse_math_answer(gold)) {
        1.0
    } else {
        0.0
    };
    (score, pred.stage)
}

/// Accuracy using a benchmark's own extraction chain and comparison.
pub fn benchmark_accuracy(text: &str, gold: &str, benchmark: Benchmark) -> (f64, ExtractionStage) {
    let pred = benchmark.extract(text);
    if !pred.is_found() {
        return (0.0, pred.stage);
    }
    let correct = match benchmark {
        Benchmark::Mgsm | Benchmark::Math100 => {
            answers_equivalent(&parse_math_answer(&pred.value), &parse_math_answer(gold))
        }
        Benchmark::Mc4 | Benchmark::Mc2 => {
            let count = if benchmark == Benchmark::Mc4 { 4 } else { 2 };
            gold_letter(gold, count).is_some_and(|g| g == pred.value)
        }
        Benchmark::Bool => extract_bool(gold).value == pred.value,
    };
    (if correct { 1.0 } else { 0.0 }, pred.stage)
}

/// Gold labels go through the same extraction, accepting a bare lowercase letter.
fn gold_letter(gold: &str, option_count: usize) -> Option<String> {
    let trimmed = gold.trim();
    if trimmed.len() == 1 {
        let upper = trimmed.to_ascii_uppercase();
        let extracted = extract_mc_letter(&upper, option_count).ok()?;
        return extracted.is_found().then_some(extracted.value);
    }
    let extracted: ExtractedAnswer = extract_mc_letter(trimmed, option_count).ok()?;
    extracted.is_found().then_some(extracted.value)
}

/// Weighted think/output language scores. An empty or too-short segment scores 0.
pub fn language_reward(
    split: &ThinkSplit,
    target: &str,
    model: &(impl LanguageIdentifier + ?Sized),
    weights: &LanguageSplit,
) -> Result<f64> {
    model.language_index(target)?;
    let think = model.score_language(&split.think_text, target)?;
    let output = model.score_language(&strip_boxed(&split.output_text), target)?;
    Ok(exact_sum([weights.think_weight * think, weights.output_weight * output]))
}

/// Structural format score from the split flags and boxed presence.
pub fn format_reward(split: &ThinkSplit, text: &str) -> f64 {
    let has_boxed = !extract_boxed_all(text).is_empty();
    exact_sum([
        if split.has_open_tag { FORMAT_OPEN_TAG } else { 0.0 },
        if split.has_closed_block { FORMAT_CLOSED_BLOCK } else { 0.0 },
        if has_boxed { FORMAT_BOXED } else { 0.0 },
        if split.think_ends_before_answer { FORMAT_ORDER_BONUS } else { 0.0 },
    ])
}

/// Text used to decide whether a completion as a whole is in the target language.
fn language_evidence(split: &ThinkSplit) -> String {
    let output = strip_boxed(&split.output_text);
    if split.think_text.is_empty() {
        output
    } else {
        format!("{}\n{}", split.think_text, output)
    }
}

/// Scores a completion under `cfg`. Components with zero weight are skipped.
pub fn composite_reward(
    completion: &Completion,
    cfg: &RewardConfig,
    model: &(impl LanguageIdentifier + ?Sized),
) -> Result<RewardBreakdown> {
    if completion.target_language != cfg.language {
        return Err(Error::LanguageMismatch {
            completion: completion.target_language.to_string(),
            config: cfg.language.to_string(),
        });
    }
    let target = completion.target_language.as_str();
    model.language_index(target)?;

    let w = &cfg.weights;
    let text = completion.text.as_str();
    let split = split_think(text);

    let mut stage = ExtractionStage::NotFound;
    let accuracy = if w.accuracy > 0.0 {
        let gold = completion
            .gold_answer
            .as_deref()
            .filter(|g| !g.trim().is_empty())
            .ok_or_else(|| Error::MissingGold(completion.id.clone()))?;
        let (raw, st) = match completion.benchmark {
            Some(b) => benchmark_accuracy(text, gold, b),
            None => accuracy_reward(text, gold),
        };
        stage = st;
        Some(ComponentScore::new(raw, w.accuracy))
    } else {
        None
    };

    let language = if w.language > 0.0 {
        let raw = language_reward(&split, target, model, &cfg.language_split)?;
        Some(ComponentScore::new(raw, w.language))
    } else {
        None
    };
    let format = (w.format > 0.0).then(|| ComponentScore::new(format_reward(&split, text), w.format));
    let repetition =
        (w.repetition > 0.0).then(|| ComponentScore::new(repetition_penalty(text, &cfg.repetition), w.repetition));
    let naturalness = (w.naturalness > 0.0)
        .then(|| ComponentScore::new(spanish_naturalness(&split.think_text, &cfg.naturalness), w.naturalness));

    let total = exact_sum(
        [accuracy, language, format, repetition, naturalness]
            .iter()
            .flatten()
            .map(|c| c.contribution),
    );
    let target_language_hit = model.identify(&language_evidence(&split)).language == target;

    Ok(RewardBreakdown {
        accuracy,
        language,
        format,
        repetition,
        naturalness,
        total,
        target_language_hit,
        extraction_stage: stage,
    })
}
