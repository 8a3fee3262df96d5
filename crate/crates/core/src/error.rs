use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("option count must be 2 or 4, got {0}")]
    InvalidOptionCount(usize),

    #[error("unknown benchmark `{0}` (expected mgsm, math100, mc4, mc2 or bool)")]
    UnknownBenchmark(String),

    #[error("not a number: `{0}`")]
    InvalidNumber(String),

    #[error("invalid language code `{0}`")]
    InvalidLanguageCode(String),

    #[error("language `{0}` is not known to the model")]
    UnknownLanguage(String),

    #[error("training text for `{language}` has {chars} characters, need at least {floor}")]
    CorpusTooSmall {
        language: String,
        chars: usize,
        floor: usize,
    },

    #[error("smoothing must be positive and finite, got {0}")]
    InvalidSmoothing(f64),

    #[error("malformed model file: {0}")]
    ModelFormat(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("accuracy weight is positive but completion `{0}` has no gold answer")]
    MissingGold(String),

    #[error("completion targets `{completion}` but config is for `{config}`")]
    LanguageMismatch { completion: String, config: String },

    #[error("invalid sampling ratio {ratio} for class `{class}` (must be in (0, 1])")]
    InvalidRatio { class: String, ratio: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
