//! Template mining: keep corpus sentences whose numbers survive translation
//! and turn them into placeholder templates.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::backends::{translate_batch, Backend, BackendError, BatchOptions, SourceNumber, TranslationRequest};
use crate::evaluator::{extract_candidates, judge, Candidate, JudgeError, Representation};
use crate::jsonl::{self, JsonlError};
use crate::lang::{Direction, LanguageError, LanguageRegistry};
use crate::numeric::CanonicalNumber;
use crate::suite::{Capability, Provenance, TestCase, TestTemplate, PLACEHOLDER};

#[derive(Debug, Error)]
pub enum MinerError {
    #[error(transparent)]
    Io(#[from] JsonlError),
    #[error(transparent)]
    Language(#[from] LanguageError),
    #[error(transparent)]
    Judge(#[from] JudgeError),
    #[error(transparent)]
    Backend(#[from] BackendError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusRecord {
    pub source: String,
    /// Reference translation; `None` when a backend supplies the target.
    pub target: Option<String>,
}

/// Reads a corpus: `source<TAB>target` lines when `with_targets`, else one
/// source sentence per line. Blank lines are skipped.
pub fn read_corpus(path: &Path, with_targets: bool) -> Result<Vec<CorpusRecord>, JsonlError> {
    let text = jsonl::read_text(path)?;
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let record = if with_targets {
            match line.split_once('\t') {
                Some((s, t)) if !s.trim().is_empty() && !t.trim().is_empty() => CorpusRecord {
                    source: s.trim().to_string(),
                    target: Some(t.trim().to_string()),
                },
                _ => return Err(jsonl::schema(path, i + 1, "expected source<TAB>target with both sides non-empty")),
            }
        } else {
            CorpusRecord {
                source: line.trim().to_string(),
                target: None,
            }
        };
        records.push(record);
    }
    Ok(records)
}

pub enum MineMode<'a> {
    Reference,
    Backend {
        backend: &'a dyn Backend,
        options: BatchOptions,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinedTemplate {
    #[serde(flatten)]
    pub template: TestTemplate,
    /// The numbers that were cut out, in placeholder order.
    pub surfaces: Vec<String>,
    pub values: Vec<CanonicalNumber>,
    pub source: String,
    pub target: String,
}

impl MinedTemplate {
    /// The template filled back with its original numbers.
    pub fn refill(&self) -> String {
        let mut out = String::new();
        let mut pieces = self.template.text.split(PLACEHOLDER);
        out.push_str(pieces.next().unwrap_or(""));
        for (piece, surface) in pieces.zip(&self.surfaces) {
            out.push_str(surface);
            out.push_str(piece);
        }
        out
    }

    /// A test case pairing the refilled source with the mined target side.
    pub fn as_case(&self, direction: &Direction) -> TestCase {
        TestCase {
            id: format!("mined/{}", self.template.id),
            template_id: self.template.id.clone(),
            capability: self.template.capability,
            direction: direction.clone(),
            source_sentence: self.refill(),
            surfaces: self.surfaces.clone(),
            ground_truths: self.values.clone(),
            format: "mined".to_string(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct MineStats {
    pub records: usize,
    pub no_numbers: usize,
    pub failed: usize,
    pub backend_errors: usize,
    pub duplicates: usize,
    pub emitted: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MineOutcome {
    pub templates: Vec<MinedTemplate>,
    pub stats: MineStats,
}

/// Shape-based capability: scale words beat grouping beats a fraction.
fn capability_of(candidates: &[&Candidate], registry: &LanguageRegistry, language: &str) -> Capability {
    let group_sep = registry.get(language).map(|l| l.locale.group_sep).unwrap_or(',');
    let decimal_sep = registry.get(language).map(|l| l.locale.decimal_sep).unwrap_or('.');
    let rank = |c: &&Candidate| match c.representation {
        Representation::Hybrid | Representation::Words => Capability::Numerals,
        _ if c.text.contains(group_sep) => Capability::Separators,
        _ if c.text.contains(decimal_sep) => Capability::Decimals,
        _ => Capability::Integers,
    };
    let priority = |cap: Capability| match cap {
        Capability::Numerals => 3,
        Capability::Separators => 2,
        Capability::Decimals => 1,
        Capability::Integers => 0,
    };
    candidates
        .iter()
        .map(rank)
        .max_by_key(|&cap| priority(cap))
        .unwrap_or(Capability::Integers)
}

/// Digit-bearing numbers of a sentence. Number words are left in the text:
/// articles such as "ein" read as numbers far more often than they are.
fn digit_numbers(candidates: &[Candidate]) -> Vec<&Candidate> {
    candidates
        .iter()
        .filter(|c| c.is_digit_token() && c.value.is_some())
        .collect()
}

pub fn mine_templates(
    records: &[CorpusRecord],
    direction: &Direction,
    registry: &LanguageRegistry,
    mode: MineMode<'_>,
    limit: Option<usize>,
) -> Result<MineOutcome, MinerError> {
    registry.check_direction(direction)?;
    let source = registry.get(&direction.source)?;
    let mut stats = MineStats {
        records: records.len(),
        ..MineStats::default()
    };

    // step 1: sentences with at least one number
    let mut kept: Vec<(&CorpusRecord, Vec<Candidate>)> = Vec::new();
    for record in records {
        let candidates = extract_candidates(&record.source, source);
        if digit_numbers(&candidates).is_empty() {
            stats.no_numbers += 1;
        } else {
            kept.push((record, candidates));
        }
    }

    // step 2: the target side
    let targets: Vec<Option<String>> = match &mode {
        MineMode::Reference => kept.iter().map(|(r, _)| r.target.clone()).collect(),
        MineMode::Backend { backend, options } => {
            let requests: Vec<TranslationRequest> = kept
                .iter()
                .enumerate()
                .map(|(i, (r, candidates))| TranslationRequest {
                    case_id: format!("record-{i}"),
                    direction: direction.clone(),
                    source_sentence: r.source.clone(),
                    numbers: digit_numbers(candidates)
                        .into_iter()
                        .map(|c| SourceNumber {
                            surface: r.source[c.start..c.end].to_string(),
                            value: c.value.clone().expect("filtered on value"),
                        })
                        .collect(),
                    capability: None,
                    seed: i as u64,
                })
                .collect();
            translate_batch(*backend, &requests, options)?
                .into_iter()
                .map(|r| r.output)
                .collect()
        }
    };

    let mut seen: HashSet<String> = HashSet::new();
    let mut templates = Vec::new();
    for ((record, candidates), target) in kept.iter().zip(targets) {
        if limit.is_some_and(|n| templates.len() >= n) {
            break;
        }
        let Some(target) = target else {
            stats.backend_errors += 1;
            continue;
        };
        let numbers = digit_numbers(candidates);
        let surfaces: Vec<String> = numbers.iter().map(|c| record.source[c.start..c.end].to_string()).collect();
        let values: Vec<CanonicalNumber> = numbers.iter().filter_map(|c| c.value.clone()).collect();

        let mut text = record.source.clone();
        for c in numbers.iter().rev() {
            text.replace_range(c.start..c.end, PLACEHOLDER);
        }
        let capability = capability_of(&numbers, registry, &direction.source);
        let mined = MinedTemplate {
            template: TestTemplate {
                id: String::new(),
                capability,
                language: direction.source.clone(),
                text,
                provenance: Provenance::Mined,
            },
            surfaces,
            values,
            source: record.source.clone(),
            target: target.clone(),
        };

        // step 3: the oracle decides
        let verdict = judge(&mined.as_case(direction), &target, "miner", registry)?;
        if !verdict.passed {
            stats.failed += 1;
            continue;
        }
        if !seen.insert(mined.template.text.clone()) {
            stats.duplicates += 1;
            continue;
        }
        templates.push(mined);
    }

    for (i, t) in templates.iter_mut().enumerate() {
        t.template.id = format!("mined-{}-{}", direction.source, i + 1);
    }
    stats.emitted = templates.len();
    Ok(MineOutcome { templates, stats })
}

pub fn save_mined(templates: &[MinedTemplate], path: &Path) -> Result<(), JsonlError> {
    jsonl::write(path, templates)
}
