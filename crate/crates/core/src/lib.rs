//! Verifiable reward scoring for target-language reasoning.
//!
//! - [`extraction`]: reasoning/output splitting and per-benchmark answer extraction
//! - [`numeric`]: number normalization and answer equivalence
//! - [`langid`]: pluggable language identification (character-trigram model)
//! - [`rewards`]: reward components and their weighted combination
//! - [`corpus`]: annotation filters and class-balanced sampling

pub mod corpus;
pub mod error;
pub mod extraction;
pub mod langid;
pub mod numeric;
pub mod rewards;

pub use error::{Error, Result};
