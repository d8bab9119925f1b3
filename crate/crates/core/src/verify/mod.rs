//! Combination sets, monochromaticity certificates, configuration search
//! and the digit-law suite.

pub mod certificate;
pub mod combos;
pub mod laws;
pub mod search;
pub mod universe;

pub use certificate::{check, is_valid, validate, Certificate, CombinationEntry, Verdict};
pub use combos::{combinations, Combination, CombinationMode};
pub use laws::{property_suite, DigitOps, LawReport, PropertyReport, StandardDigits};
pub use search::{search, SearchConfig, SearchOutcome, SearchSummary};
pub use universe::UniverseSpec;
