//! Dictionary-based sentiment measurement for text corpora.
//!
//! Texts are tokenized, counted into [`FreqVector`]s and matched against a
//! [`Dictionary`] through a [`MatchIndex`]; on top of that sit average
//! happiness scores, word shifts, dictionary comparison, classification
//! benchmarks and time series.

pub mod bench;
pub mod compare;
pub mod dictionary;
pub mod error;
pub mod import;
pub mod rng;
pub mod scoring;
pub mod shift;
pub mod textproc;
pub mod timeseries;

pub use dictionary::{Dictionary, Entry, MatchKind, ScaleKind, ScoreScale};
pub use error::{Error, Outcome, Result};
pub use scoring::{score_text, ScoreResult};
pub use textproc::{build_index, tokenize, FreqVector, MatchIndex};
