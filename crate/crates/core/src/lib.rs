//! Behavioural testing of machine translation on numerical text.
//!
//! The pipeline has four stages, each with a line-oriented file format:
//! generate a suite of test cases from templates and number formats
//! ([`suite`], [`format`]), translate it with a pluggable backend
//! ([`backends`]), judge each output with an exact number-equivalence oracle
//! ([`evaluator`]) and aggregate Pass Rates into a report. [`miner`] turns
//! parallel or machine-translated corpora into new templates.

pub mod backends;
pub mod evaluator;
pub mod format;
pub mod jsonl;
pub mod lang;
pub mod locale;
pub mod miner;
pub mod numerals;
pub mod numeric;
pub mod pipeline;
pub mod suite;

pub use lang::{Direction, Language, LanguageRegistry};
pub use numeric::CanonicalNumber;
