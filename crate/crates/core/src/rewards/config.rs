use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::langid::LangCode;

/// Named default weight tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// Default weights: language 0.2, format 0.1.
    #[default]
    Table8,
    /// Main-text weights: language 0.1, format 0.2.
    MainText,
}

impl Preset {
    pub fn weights(self, language: &LangCode) -> Weights {
        let naturalness = if language.as_str() == "es" { 0.5 } else { 0.0 };
        let (lang_w, format_w) = match self {
            Preset::Table8 => (0.2, 0.1),
            Preset::MainText => (0.1, 0.2),
        };
        Weights {
            accuracy: 1.0,
            language: lang_w,
            format: format_w,
            repetition: 0.3,
            naturalness,
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table8" => Ok(Preset::Table8),
            "maintext" => Ok(Preset::MainText),
            other => Err(Error::Config(format!(
                "unknown preset `{other}` (expected table8 or maintext)"
            ))),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Preset::Table8 => "table8",
            Preset::MainText => "maintext",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weights {
    pub accuracy: f64,
    pub language: f64,
    pub format: f64,
    pub repetition: f64,
    pub naturalness: f64,
}

impl Weights {
    fn iter(&self) -> [(&'static str, f64); 5] {
        [
            ("accuracy", self.accuracy),
            ("language", self.language),
            ("format", self.format),
            ("repetition", self.repetition),
            ("naturalness", self.naturalness),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepetitionParams {
    /// Token types above this frequency count as flooding.
    pub flood_threshold: f64,
    /// Longest n-gram considered for loop detection.
    pub ngram_max: usize,
    /// Shortest character run that is penalized.
    pub char_run_min: usize,
}

impl Default for RepetitionParams {
    fn default() -> Self {
        Self {
            flood_threshold: 0.15,
            ngram_max: 5,
            char_run_min: 4,
        }
    }
}

/// Whether hesitation loops are charged for every detection or only those past the minimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HesitationMode {
    #[default]
    All,
    Excess,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NaturalnessParams {
    pub word_floor: usize,
    pub qmark_density_threshold: f64,
    pub qmark_scale: f64,
    pub qmark_cap: f64,
    pub stacked_unit: f64,
    pub stacked_cap: f64,
    pub fakeq_threshold: f64,
    pub fakeq_scale: f64,
    pub fakeq_cap: f64,
    pub hesitation_min: usize,
    pub hesitation_unit: f64,
    pub hesitation_cap: f64,
    pub hesitation_mode: HesitationMode,
    pub total_cap: f64,
    /// Words that, right after `¿`, open a declarative clause.
    pub connectives: Vec<String>,
}

impl Default for NaturalnessParams {
    fn default() -> Self {
        Self {
            word_floor: 30,
            qmark_density_threshold: 0.05,
            qmark_scale: 10.0,
            qmark_cap: 0.4,
            stacked_unit: 0.02,
            stacked_cap: 0.2,
            fakeq_threshold: 0.03,
            fakeq_scale: 12.0,
            fakeq_cap: 0.3,
            hesitation_min: 3,
            hesitation_unit: 0.03,
            hesitation_cap: 0.3,
            hesitation_mode: HesitationMode::All,
            total_cap: 1.0,
            connectives: ["Espera", "Pero", "Entonces", "Y", "Bueno"]
                .map(String::from)
                .to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LanguageSplit {
    pub think_weight: f64,
    pub output_weight: f64,
}

impl Default for LanguageSplit {
    fn default() -> Self {
        Self {
            think_weight: 0.6,
            output_weight: 0.4,
        }
    }
}

/// Fully resolved scoring configuration for one target language.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RewardConfig {
    pub language: LangCode,
    pub weights: Weights,
    pub repetition: RepetitionParams,
    pub naturalness: NaturalnessParams,
    pub language_split: LanguageSplit,
}

impl RewardConfig {
    pub fn for_language(language: LangCode, preset: Preset) -> Self {
        Self {
            weights: preset.weights(&language),
            language,
            repetition: RepetitionParams::default(),
            naturalness: NaturalnessParams::default(),
            language_split: LanguageSplit::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, w) in self.weights.iter() {
            if !(w >= 0.0 && w.is_finite()) {
                return Err(Error::Config(format!("weight `{name}` must be finite and >= 0, got {w}")));
            }
        }
        let split = self.language_split;
        let unit = |x: f64| (0.0..=1.0).contains(&x);
        if !unit(split.think_weight) || !unit(split.output_weight) {
            return Err(Error::Config("language_split weights must lie in [0, 1]".into()));
        }
        if (split.think_weight + split.output_weight - 1.0).abs() > 1e-12 {
            return Err(Error::Config(format!(
                "language_split weights must sum to 1, got {} + {}",
                split.think_weight, split.output_weight
            )));
        }
        let rep = self.repetition;
        if !unit(rep.flood_threshold) || rep.ngram_max == 0 || rep.char_run_min < 2 {
            return Err(Error::Config(
                "repetition needs flood_threshold in [0, 1], ngram_max >= 1, char_run_min >= 2".into(),
            ));
        }
        let n = &self.naturalness;
        let reals = [
            ("qmark_density_threshold", n.qmark_density_threshold),
            ("qmark_scale", n.qmark_scale),
            ("qmark_cap", n.qmark_cap),
            ("stacked_unit", n.stacked_unit),
            ("stacked_cap", n.stacked_cap),
            ("fakeq_threshold", n.fakeq_threshold),
            ("fakeq_scale", n.fakeq_scale),
            ("fakeq_cap", n.fakeq_cap),
            ("hesitation_unit", n.hesitation_unit),
            ("hesitation_cap", n.hesitation_cap),
            ("total_cap", n.total_cap),
        ];
        for (name, v) in reals {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("naturalness `{name}` must be finite and >= 0")));
            }
        }
        if n.total_cap > 1.0 {
            return Err(Error::Config("naturalness total_cap must not exceed 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightOverrides {
    accuracy: Option<f64>,
    language: Option<f64>,
    format: Option<f64>,
    repetition: Option<f64>,
    naturalness: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct RepetitionOverrides {
    flood_threshold: Option<f64>,
    ngram_max: Option<usize>,
    char_run_min: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct NaturalnessOverrides {
    word_floor: Option<usize>,
    qmark_density_threshold: Option<f64>,
    qmark_scale: Option<f64>,
    qmark_cap: Option<f64>,
    stacked_unit: Option<f64>,
    stacked_cap: Option<f64>,
    fakeq_threshold: Option<f64>,
    fakeq_scale: Option<f64>,
    fakeq_cap: Option<f64>,
    hesitation_min: Option<usize>,
    hesitation_unit: Option<f64>,
    hesitation_cap: Option<f64>,
    hesitation_mode: Option<HesitationMode>,
    total_cap: Option<f64>,
    connectives: Option<Vec<String>>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct SplitOverrides {
    think_weight: Option<f64>,
    output_weight: Option<f64>,
}

/// Contents of a reward config file (TOML). Every key is optional; anything not
/// given falls back to the preset. Unknown keys are rejected.
///
/// ```toml
/// language = "es"
/// preset = "maintext"
///
/// [weights]
/// repetition = 0.25
///
/// [naturalness]
/// hesitation_mode = "excess"
/// ```
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub language: Option<LangCode>,
    pub preset: Option<Preset>,
    #[serde(default)]
    weights: WeightOverrides,
    #[serde(default)]
    repetition: RepetitionOverrides,
    #[serde(default)]
    naturalness: NaturalnessOverrides,
    #[serde(default)]
    language_split: SplitOverrides,
}

macro_rules! apply {
    ($target:expr, $src:expr, $($field:ident),+ $(,)?) => {
        $( if let Some(v) = $src.$field.clone() { $target.$field = v; } )+
    };
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Resolves the configuration for one language. `preset` is used when the
    /// file does not name one. Fails when the file is pinned to another language.
    pub fn resolve(&self, language: &LangCode, preset: Preset) -> Result<RewardConfig> {
        if let Some(pinned) = &self.language {
            if pinned != language {
                return Err(Error::LanguageMismatch {
                    completion: language.to_string(),
                    config: pinned.to_string(),
                });
            }
        }
        let mut cfg = RewardConfig::for_language(language.clone(), self.preset.unwrap_or(preset));
        apply!(cfg.weights, self.weights, accuracy, language, format, repetition, naturalness);
        apply!(cfg.repetition, self.repetition, flood_threshold, ngram_max, char_run_min);
        apply!(
            cfg.naturalness,
            self.naturalness,
            word_floor,
            qmark_density_threshold,
            qmark_scale,
            qmark_cap,
            stacked_unit,
            stacked_cap,
            fakeq_threshold,
            fakeq_scale,
            fakeq_cap,
            hesitation_min,
            hesitation_unit,
            hesitation_cap,
            hesitation_mode,
            total_cap,
            connectives,
        );
        apply!(cfg.language_split, self.language_split, think_weight, output_weight);
        cfg.validate()?;
        Ok(cfg)
    }
}
