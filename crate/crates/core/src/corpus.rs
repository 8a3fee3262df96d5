//! Annotation-driven corpus filtering and class-balanced downsampling.
//!
//! Records pass three stages in order: mandatory safety/integrity rules,
//! domain-dependent quality rules, then per-class sampling by technical content
//! class. A record dropped at one stage is never looked at by the next.

use std::collections::BTreeMap;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const PASS: &str = "pass";
pub const MISSING_LABEL: &str = "missing_label";

const EXCLUDED_DOCUMENT_TYPES: [&str; 5] =
    ["press_release", "boilerplate", "news_report", "transactional", "legal_document"];
const EXCLUDED_SECTORS: [&str; 3] = ["other", "mining_resources", "wholesale_distribution"];
const ALLOWED_LENGTHS: [&str; 3] = ["brief", "moderate", "substantial"];
const STRICT_DOMAINS: [&str; 2] = ["math_heavy", "code_heavy"];

/// Property labels attached to one corpus document.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationRecord {
    pub id: String,
    pub content_safety: Option<String>,
    pub pii: Option<String>,
    pub content_integrity: Option<String>,
    pub content_ratio: Option<String>,
    pub reasoning_indicators: Option<String>,
    pub commercial_bias: Option<String>,
    pub document_type: Option<String>,
    pub business_sector: Option<String>,
    pub content_length: Option<String>,
    pub technical_content: Option<String>,
    pub time_sensitivity: Option<String>,
    pub information_density: Option<String>,
    pub educational_value: Option<String>,
    pub content_quality: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterDecision {
    pub keep: bool,
    /// First failing rule, or `pass`.
    pub rule: String,
}

impl FilterDecision {
    pub fn pass() -> Self {
        Self {
            keep: true,
            rule: PASS.to_string(),
        }
    }

    pub fn drop(rule: &str) -> Self {
        Self {
            keep: false,
            rule: rule.to_string(),
        }
    }
}

enum Check {
    Equals(&'static str),
    NotEquals(&'static str),
    NoneOf(&'static [&'static str]),
    OneOf(&'static [&'static str]),
}

impl Check {
    fn holds(&self, label: &str) -> bool {
        match self {
            Check::Equals(v) => label == *v,
            Check::NotEquals(v) => label != *v,
            Check::NoneOf(vs) => !vs.contains(&label),
            Check::OneOf(vs) => vs.contains(&label),
        }
    }
}

fn run_checks(checks: &[(&'static str, Option<&String>, Check)]) -> FilterDecision {
    for (rule, label, check) in checks {
        match label {
            None => return FilterDecision::drop(MISSING_LABEL),
            Some(l) if !check.holds(l) => return FilterDecision::drop(rule),
            Some(_) => {}
        }
    }
    FilterDecision::pass()
}

/// Safety, integrity, document-type, sector and length rules, in that order.
pub fn apply_mandatory_filters(rec: &AnnotationRecord) -> FilterDecision {
    if rec.id.is_empty() {
        return FilterDecision::drop(MISSING_LABEL);
    }
    run_checks(&[
        ("content_safety", rec.content_safety.as_ref(), Check::Equals("safe")),
        ("pii", rec.pii.as_ref(), Check::Equals("no_pii")),
        ("content_integrity", rec.content_integrity.as_ref(), Check::Equals("complete")),
        ("content_ratio", rec.content_ratio.as_ref(), Check::Equals("complete_content")),
        ("reasoning_indicators", rec.reasoning_indicators.as_ref(), Check::NotEquals("none")),
        ("commercial_bias", rec.commercial_bias.as_ref(), Check::Equals("none")),
        ("document_type", rec.document_type.as_ref(), Check::NoneOf(&EXCLUDED_DOCUMENT_TYPES)),
        ("business_sector", rec.business_sector.as_ref(), Check::NoneOf(&EXCLUDED_SECTORS)),
        ("content_length", rec.content_length.as_ref(), Check::OneOf(&ALLOWED_LENGTHS)),
    ])
}

/// Strict rules for math/code-heavy documents, a relaxed quality floor otherwise.
pub fn apply_quality_filters(rec: &AnnotationRecord) -> FilterDecision {
    let Some(class) = rec.technical_content.as_deref() else {
        return FilterDecision::drop(MISSING_LABEL);
    };
    if STRICT_DOMAINS.contains(&class) {
        run_checks(&[
            ("time_sensitivity", rec.time_sensitivity.as_ref(), Check::Equals("evergreen")),
            ("information_density", rec.information_density.as_ref(), Check::Equals("dense")),
            ("educational_value", rec.educational_value.as_ref(), Check::OneOf(&["high", "moderate"])),
            ("content_quality", rec.content_quality.as_ref(), Check::Equals("excellent")),
        ])
    } else {
        run_checks(&[(
            "content_quality",
            rec.content_quality.as_ref(),
            Check::OneOf(&["excellent", "good", "adequate"]),
        )])
    }
}

/// Mandatory stage, then quality stage if the record survived.
pub fn filter_record(rec: &AnnotationRecord) -> FilterDecision {
    let d = apply_mandatory_filters(rec);
    if !d.keep {
        return d;
    }
    apply_quality_filters(rec)
}

/// Per-class keep ratios plus the shuffle seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingPlan {
    #[serde(default)]
    pub seed: u64,
    pub ratios: BTreeMap<String, f64>,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        let ratios = [
            ("code_heavy_math_heavy", 0.60),
            ("math_heavy", 0.30),
            ("non_technical", 0.50),
            ("basic_technical", 0.80),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        Self { seed: 0, ratios }
    }
}

impl SamplingPlan {
    pub fn validate(&self) -> Result<()> {
        for (class, &ratio) in &self.ratios {
            if !(ratio > 0.0 && ratio <= 1.0) {
                return Err(Error::InvalidRatio {
                    class: class.clone(),
                    ratio,
                });
            }
        }
        Ok(())
    }

    /// Parses and validates a TOML plan (`seed = ...` and a `[ratios]` table).
    pub fn parse(text: &str) -> Result<Self> {
        let plan: Self = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        plan.validate()?;
        Ok(plan)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::parse(&std::fs::read_to_string(path)?)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Number of records of a class with `n` members that survive sampling.
    pub fn quota(&self, class: &str, n: usize) -> usize {
        match self.ratios.get(class) {
            Some(r) => ((r * n as f64).round() as usize).min(n),
            None => n,
        }
    }
}

/// 64-bit FNV-1a, used to derive a stable per-class stream from the plan seed.
fn fnv1a(s: &str) -> u64 {
    s.bytes()
        .fold(0xcbf29ce484222325, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3))
}

/// Picks `round(ratio * N_c)` records per listed class with a seeded shuffle and
/// keeps unlisted classes whole. Returns ids in input order.
pub fn sample_balanced(records: &[AnnotationRecord], plan: &SamplingPlan) -> Result<Vec<String>> {
    let classes: Vec<&str> = records.iter().map(|r| r.technical_content.as_deref().unwrap_or("")).collect();
    Ok(sample_indices(&classes, plan)?
        .into_iter()
        .map(|i| records[i].id.clone())
        .collect())
}

/// Index form of [`sample_balanced`]: `classes[i]` is the class of record `i`.
pub fn sample_indices(classes: &[&str], plan: &SamplingPlan) -> Result<Vec<usize>> {
    plan.validate()?;
    let mut by_class: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, class) in classes.iter().enumerate() {
        by_class.entry(class).or_default().push(i);
    }
    let mut keep = vec![false; classes.len()];
    for (class, mut members) in by_class {
        let quota = plan.quota(class, members.len());
        if quota < members.len() {
            let mut rng = ChaCha8Rng::seed_from_u64(plan.seed ^ fnv1a(class));
            members.shuffle(&mut rng);
            members.truncate(quota);
        }
        for i in members {
            keep[i] = true;
        }
    }
    Ok((0..classes.len()).filter(|&i| keep[i]).collect())
}

/// Stage at which a record left the pipeline, or `Kept`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "stage", rename_all = "snake_case")]
pub enum Outcome {
    Mandatory { rule: String },
    Quality { rule: String },
    Downsampled,
    Kept,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordOutcome {
    pub id: String,
    pub class: Option<String>,
    pub outcome: Outcome,
}

/// Result of running all three stages.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineResult {
    pub outcomes: Vec<RecordOutcome>,
    /// Indices into the input of the kept records, ascending.
    pub kept: Vec<usize>,
}

/// Runs mandatory -> quality -> sampling over `records`.
pub fn run_pipeline(records: &[AnnotationRecord], plan: &SamplingPlan) -> Result<PipelineResult> {
    plan.validate()?;
    let mut outcomes: Vec<RecordOutcome> = records
        .iter()
        .map(|rec| {
            let mandatory = apply_mandatory_filters(rec);
            let outcome = if !mandatory.keep {
                Outcome::Mandatory { rule: mandatory.rule }
            } else {
                let quality = apply_quality_filters(rec);
                if quality.keep {
                    Outcome::Kept
                } else {
                    Outcome::Quality { rule: quality.rule }
                }
            };
            RecordOutcome {
                id: rec.id.clone(),
                class: rec.technical_content.clone(),
                outcome,
            }
        })
        .collect();

    let survivors: Vec<usize> = (0..records.len())
        .filter(|&i| outcomes[i].outcome == Outcome::Kept)
        .collect();
    let classes: Vec<&str> = survivors
        .iter()
        .map(|&i| records[i].technical_content.as_deref().unwrap_or(""))
        .collect();
    let chosen = sample_indices(&classes, plan)?;

    let mut kept = Vec::with_capacity(chosen.len());
    let mut next = chosen.iter().peekable();
    for (j, &i) in survivors.iter().enumerate() {
        if next.peek() == Some(&&j) {
            next.next();
            kept.push(i);
        } else {
            outcomes[i].outcome = Outcome::Downsampled;
        }
    }
    Ok(PipelineResult { outcomes, kept })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub seen: usize,
    pub kept: usize,
    pub dropped: usize,
}

/// Aggregate view of one pipeline run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FilterStats {
    pub total: usize,
    pub kept: usize,
    pub malformed: usize,
    /// Drops per rule, mandatory and quality stages combined.
    pub dropped_by_rule: BTreeMap<String, usize>,
    pub dropped_mandatory: usize,
    pub dropped_quality: usize,
    pub downsampled: usize,
    pub per_class: BTreeMap<String, ClassCounts>,
    /// Share of each class among kept records, in percent.
    pub final_distribution: BTreeMap<String, f64>,
}

pub const UNLABELED_CLASS: &str = "(unlabeled)";

/// Tallies outcomes per rule and per class.
pub fn filter_stats(outcomes: &[RecordOutcome]) -> FilterStats {
    let mut stats = FilterStats {
        total: outcomes.len(),
        ..Default::default()
    };
    for o in outcomes {
        let class = o.class.clone().unwrap_or_else(|| UNLABELED_CLASS.to_string());
        let counts = stats.per_class.entry(class).or_default();
        counts.seen += 1;
        match &o.outcome {
            Outcome::Kept => {
                counts.kept += 1;
                stats.kept += 1;
            }
            Outcome::Mandatory { rule } => {
                counts.dropped += 1;
                stats.dropped_mandatory += 1;
                *stats.dropped_by_rule.entry(rule.clone()).or_default() += 1;
            }
            Outcome::Quality { rule } => {
                counts.dropped += 1;
                stats.dropped_quality += 1;
                *stats.dropped_by_rule.entry(rule.clone()).or_default() += 1;
            }
            Outcome::Downsampled => {
                counts.dropped += 1;
                stats.downsampled += 1;
            }
        }
    }
    if stats.kept > 0 {
        for (class, counts) in &stats.per_class {
            if counts.kept > 0 {
                let pct = 100.0 * counts.kept as f64 / stats.kept as f64;
                stats.final_distribution.insert(class.clone(), pct);
            }
        }
    }
    stats
}
