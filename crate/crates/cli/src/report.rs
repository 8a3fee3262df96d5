//! Aggregate statistics over scored records.

use std::collections::BTreeMap;
use std::path::Path;

use lingoreward_core::rewards::{exact_mean, RewardBreakdown};
use serde::{Deserialize, Serialize};

use crate::error::{CliResult, Failure};
use crate::io;

const COMPONENTS: [&str; 5] = ["accuracy", "language", "format", "repetition", "naturalness"];
const QUANTILES: [(&str, f64); 7] = [
    ("p0", 0.0),
    ("p10", 0.10),
    ("p25", 0.25),
    ("p50", 0.50),
    ("p75", 0.75),
    ("p90", 0.90),
    ("p100", 1.0),
];

/// One record's output line: a breakdown or an error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OutputLine {
    Error(ErrorLine),
    Scored(ScoredLine),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredLine {
    /// 1-based input line number.
    pub line: usize,
    pub id: String,
    pub target_language: String,
    #[serde(flatten)]
    pub breakdown: RewardBreakdown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorLine {
    pub line: usize,
    pub id: Option<String>,
    pub error: String,
}

/// Statistics of one component over the records where it was computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentStats {
    pub count: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub mean_contribution: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TotalStats {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    /// Nearest-rank quantiles of the total.
    pub quantiles: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub records: usize,
    pub scored: usize,
    pub errors: usize,
    pub components: BTreeMap<String, ComponentStats>,
    pub total: Option<TotalStats>,
    /// Percentage of scored records whose identified language is the target.
    pub target_language_pct: f64,
    /// Share of records with accuracy 1 among those with an accuracy component.
    pub accuracy_rate: Option<f64>,
    /// Share of records with a perfect format score among those with a format component.
    pub format_compliance_rate: Option<f64>,
}

/// Accumulates records in output order.
#[derive(Debug, Default)]
pub struct ReportBuilder {
    records: usize,
    errors: usize,
    raws: [Vec<f64>; 5],
    contributions: [Vec<f64>; 5],
    totals: Vec<f64>,
    hits: usize,
}

impl ReportBuilder {
    pub fn add(&mut self, line: &OutputLine) {
        match line {
            OutputLine::Error(_) => {
                self.records += 1;
                self.errors += 1;
            }
            OutputLine::Scored(s) => self.add_breakdown(&s.breakdown),
        }
    }

    pub fn add_breakdown(&mut self, b: &RewardBreakdown) {
        self.records += 1;
        for (i, (_, c)) in b.components().into_iter().enumerate() {
            if let Some(c) = c {
                self.raws[i].push(c.raw);
                self.contributions[i].push(c.contribution);
            }
        }
        self.totals.push(b.total);
        self.hits += b.target_language_hit as usize;
    }

    pub fn finish(self) -> ScoreReport {
        let scored = self.totals.len();
        let mut components = BTreeMap::new();
        for (i, name) in COMPONENTS.iter().enumerate() {
            let raws = &self.raws[i];
            if raws.is_empty() {
                continue;
            }
            components.insert(
                name.to_string(),
                ComponentStats {
                    count: raws.len(),
                    mean: exact_mean(raws).unwrap_or(0.0),
                    min: raws.iter().copied().fold(f64::INFINITY, f64::min),
                    max: raws.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                    mean_contribution: exact_mean(&self.contributions[i]).unwrap_or(0.0),
                },
            );
        }
        let total = (scored > 0).then(|| {
            let mut sorted = self.totals.clone();
            sorted.sort_by(f64::total_cmp);
            let quantiles = QUANTILES
                .iter()
                .map(|&(name, q)| {
                    let rank = ((q * scored as f64).ceil() as usize).clamp(1, scored);
                    (name.to_string(), sorted[rank - 1])
                })
                .collect();
            TotalStats {
                mean: exact_mean(&self.totals).unwrap_or(0.0),
                min: sorted[0],
                max: sorted[scored - 1],
                quantiles,
            }
        });
        let rate = |values: &[f64], hit: f64| {
            (!values.is_empty()).then(|| values.iter().filter(|&&v| v == hit).count() as f64 / values.len() as f64)
        };
        ScoreReport {
            records: self.records,
            scored,
            errors: self.errors,
            components,
            total,
            target_language_pct: if scored == 0 {
                0.0
            } else {
                100.0 * self.hits as f64 / scored as f64
            },
            accuracy_rate: rate(&self.raws[0], 1.0),
            format_compliance_rate: rate(&self.raws[2], 1.0),
        }
    }
}

/// Rebuilds the report from a `score` output file.
pub fn from_output(path: &Path) -> CliResult<ScoreReport> {
    let text = io::read_to_string(path)?;
    let mut builder = ReportBuilder::default();
    for (i, line) in text.lines().enumerate() {
        let parsed: OutputLine = serde_json::from_str(line).map_err(|e| {
            Failure::Config(format!("{}:{}: not a score output line: {e}", path.display(), i + 1))
        })?;
        builder.add(&parsed);
    }
    Ok(builder.finish())
}
