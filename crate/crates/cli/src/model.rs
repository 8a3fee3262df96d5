//! Language model selection.

use std::path::Path;

use lingoreward_core::langid::TrigramModel;

use crate::error::{CliResult, Failure};

/// Trigram model trained on `data/langid/seed` with default settings.
pub const BUNDLED_MODEL: &[u8] = include_bytes!("../../../data/langid/model.lrtg");

/// Loads the model at `path`, or the bundled model when no path is given.
pub fn load_model(path: Option<&Path>) -> CliResult<TrigramModel> {
    match path {
        Some(p) => {
            let bytes = std::fs::read(p).map_err(|e| Failure::io(p, e))?;
            TrigramModel::from_bytes(&bytes).map_err(|e| Failure::at(p, e))
        }
        None => TrigramModel::from_bytes(BUNDLED_MODEL).map_err(|e| Failure::Config(format!("bundled model: {e}"))),
    }
}

