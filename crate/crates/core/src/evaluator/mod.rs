//! The number-equivalence oracle: candidate extraction, Pass/Fail judging,
//! failure classification and Pass Rate reports.

mod extract;
mod report;

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use extract::{extract_candidates, source_numbers, Candidate, Representation, ScaleRun};
pub use report::{build_report, pass_rate, Cell, ColumnAverage, GridOptions, Percent, Report, ReportError, RowAverage};

use crate::backends::TranslationResult;
use crate::jsonl::{self, JsonlError};
use crate::lang::{Direction, Language, LanguageError, LanguageRegistry};
use crate::locale::parse_localized;
use crate::numeric::CanonicalNumber;
use crate::suite::{Capability, TestCase};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ErrorClass {
    SeparatorError,
    NumeralUnitError,
    DigitOmission,
    DigitAddition,
    DigitSubstitution,
    UnitScaleError,
    NumberMissing,
    Unclassified,
}

impl ErrorClass {
    pub const ALL: [ErrorClass; 8] = [
        ErrorClass::SeparatorError,
        ErrorClass::NumeralUnitError,
        ErrorClass::DigitOmission,
        ErrorClass::DigitAddition,
        ErrorClass::DigitSubstitution,
        ErrorClass::UnitScaleError,
        ErrorClass::NumberMissing,
        ErrorClass::Unclassified,
    ];
}

impl fmt::Display for ErrorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub case_id: String,
    pub capability: Capability,
    pub direction: Direction,
    pub backend: String,
    pub passed: bool,
    /// One flag per placeholder.
    pub matched: Vec<bool>,
    pub error_class: Option<ErrorClass>,
    pub candidates: Vec<Candidate>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Error)]
pub enum JudgeError {
    #[error(transparent)]
    Language(#[from] LanguageError),
    #[error("no result for case {0}")]
    MissingResult(String),
    #[error("result for unknown case {0}")]
    UnknownCase(String),
    #[error("classify called on a passing verdict")]
    NotFailed,
}

/// The single-digit edits recognised between a ground truth and a candidate.
fn digit_edit(truth: &CanonicalNumber, candidate: &CanonicalNumber) -> Option<ErrorClass> {
    // a truth written as "5.70" is stored as 5.7; compare "5.71" at its scale
    if candidate.scale() > truth.scale() && truth.scale() > 0 {
        let pad = (candidate.scale() - truth.scale()) as usize;
        let t = format!("{}{}", truth.written_digits(), "0".repeat(pad));
        let c = candidate.written_digits();
        let (t, c) = (t.trim_start_matches('0').as_bytes(), c.trim_start_matches('0').as_bytes());
        if t.len() == c.len() && (0..t.len()).filter(|&i| t[i] != c[i]).count() == 1 {
            return Some(ErrorClass::DigitSubstitution);
        }
    }
    let t = truth.written_digits();
    let c = candidate.written_digits();
    let t = t.trim_start_matches('0').as_bytes();
    let c = c.trim_start_matches('0').as_bytes();
    let deletes_to = |long: &[u8], short: &[u8]| {
        long.len() == short.len() + 1 && (0..long.len()).any(|i| long[..i] == short[..i] && long[i + 1..] == short[i..])
    };
    if deletes_to(t, c) {
        return Some(ErrorClass::DigitOmission);
    }
    if deletes_to(c, t) {
        return Some(ErrorClass::DigitAddition);
    }
    if t.len() == c.len() && t != c {
        let diffs: Vec<usize> = (0..t.len()).filter(|&i| t[i] != c[i]).collect();
        let substituted = diffs.len() == 1;
        // adjacent transposition counts as one substitution
        let swapped = diffs.len() == 2 && diffs[1] == diffs[0] + 1 && t[diffs[0]] == c[diffs[1]] && t[diffs[1]] == c[diffs[0]];
        if substituted || swapped {
            return Some(ErrorClass::DigitSubstitution);
        }
    }
    None
}

/// Classifies the mismatch the mock would fabricate for (truth, candidate),
/// if it is a single digit edit.
pub fn digit_edit_class(truth: &CanonicalNumber, candidate: &CanonicalNumber) -> Option<ErrorClass> {
    if truth == candidate {
        return None;
    }
    digit_edit(truth, candidate)
}

/// Everything the failure classifier looks at.
pub struct FailureContext<'a> {
    pub truths: &'a [CanonicalNumber],
    pub matched: &'a [bool],
    pub candidates: &'a [Candidate],
    /// Numbers carried by the template itself.
    pub template_values: &'a [CanonicalNumber],
    pub output: &'a str,
    pub source: &'a Language,
    pub target: &'a Language,
}

/// Decision ladder, first match wins.
pub fn classify(ctx: &FailureContext<'_>) -> Result<ErrorClass, JudgeError> {
    if ctx.matched.iter().all(|&m| m) {
        return Err(JudgeError::NotFailed);
    }
    let unmatched: Vec<&CanonicalNumber> = ctx
        .truths
        .iter()
        .zip(ctx.matched)
        .filter(|(_, &m)| !m)
        .map(|(t, _)| t)
        .collect();
    let matched_truths: Vec<&CanonicalNumber> = ctx
        .truths
        .iter()
        .zip(ctx.matched)
        .filter(|(_, &m)| m)
        .map(|(t, _)| t)
        .collect();
    let relevant: Vec<&Candidate> = ctx
        .candidates
        .iter()
        .filter(|c| {
            c.value
                .as_ref()
                .is_none_or(|v| !ctx.template_values.contains(v) && !matched_truths.contains(&v))
        })
        .collect();

    // scale words after a token in either language
    let scale_after = |c: &Candidate| -> Option<u32> {
        c.scale.as_ref().map(|s| s.power).or_else(|| {
            let rest = ctx.output.get(c.end..)?;
            ctx.source.scales.match_scale_run(rest).map(|(p, _)| p)
        })
    };

    // (1) the token is right when read with the source conventions
    for c in relevant.iter().filter(|c| c.is_digit_token()) {
        let Ok(as_source) = parse_localized(&c.text, &ctx.source.locale) else {
            continue;
        };
        let as_target = parse_localized(&c.text, &ctx.target.locale).ok();
        if as_target.as_ref() == Some(&as_source) {
            continue;
        }
        let read = as_source.scale_by_power_of_ten(scale_after(c).unwrap_or(0) as i32);
        if unmatched.iter().any(|t| **t == read || **t == as_source) {
            return Ok(ErrorClass::SeparatorError);
        }
    }

    // (2) a scale word is off by a power of ten
    for c in relevant.iter().filter(|c| c.is_digit_token() && scale_after(c).is_some()) {
        let Some(value) = &c.value else { continue };
        if unmatched.iter().any(|t| value.power_of_ten_ratio(t).is_some_and(|k| k != 0)) {
            return Ok(ErrorClass::UnitScaleError);
        }
    }

    // (3) one digit omitted, added or substituted
    for t in &unmatched {
        for c in &relevant {
            if let Some(class) = c.value.as_ref().and_then(|v| digit_edit_class(t, v)) {
                return Ok(class);
            }
        }
    }

    // (4) number words that do not match
    if relevant.iter().any(|c| c.representation == Representation::Words) {
        return Ok(ErrorClass::NumeralUnitError);
    }
    // (5)
    if relevant.is_empty() {
        return Ok(ErrorClass::NumberMissing);
    }
    Ok(ErrorClass::Unclassified)
}

/// Source-sentence numbers that are not ground truths (multiset difference).
fn template_values(case: &TestCase, source: &Language) -> Vec<CanonicalNumber> {
    let mut values = source_numbers(&case.source_sentence, source);
    for truth in &case.ground_truths {
        if let Some(i) = values.iter().position(|v| v == truth) {
            values.remove(i);
        }
    }
    values
}

/// Judges one output sentence against a case.
pub fn judge(case: &TestCase, output: &str, backend: &str, registry: &LanguageRegistry) -> Result<Verdict, JudgeError> {
    let source = registry.get(&case.direction.source)?;
    let target = registry.get(&case.direction.target)?;
    let candidates = extract_candidates(output, target);
    let matched: Vec<bool> = case
        .ground_truths
        .iter()
        .map(|t| candidates.iter().any(|c| c.value.as_ref().is_some_and(|v| v.equals_value(t))))
        .collect();
    let passed = matched.iter().all(|&m| m);
    let error_class = if passed {
        None
    } else {
        let ctx = FailureContext {
            truths: &case.ground_truths,
            matched: &matched,
            candidates: &candidates,
            template_values: &template_values(case, source),
            output,
            source,
            target,
        };
        Some(classify(&ctx)?)
    };
    Ok(Verdict {
        case_id: case.id.clone(),
        capability: case.capability,
        direction: case.direction.clone(),
        backend: backend.to_string(),
        passed,
        matched,
        error_class,
        candidates,
        notes: Vec::new(),
    })
}

/// Judges a backend result; error results fail as Unclassified.
pub fn judge_result(
    case: &TestCase,
    result: &TranslationResult,
    registry: &LanguageRegistry,
) -> Result<Verdict, JudgeError> {
    match (&result.output, &result.error) {
        (Some(output), None) => judge(case, output, &result.backend, registry),
        (_, error) => Ok(Verdict {
            case_id: case.id.clone(),
            capability: case.capability,
            direction: case.direction.clone(),
            backend: result.backend.clone(),
            passed: false,
            matched: vec![false; case.ground_truths.len()],
            error_class: Some(ErrorClass::Unclassified),
            candidates: Vec::new(),
            notes: vec![format!("backend error: {}", error.as_deref().unwrap_or("no output"))],
        }),
    }
}

/// Judges every result, pairing results to cases by id. Output follows the
/// result order; each case must have exactly one result per backend.
pub fn judge_all(
    cases: &[TestCase],
    results: &[TranslationResult],
    registry: &LanguageRegistry,
) -> Result<Vec<Verdict>, JudgeError> {
    let by_id: std::collections::HashMap<&str, &TestCase> = cases.iter().map(|c| (c.id.as_str(), c)).collect();
    let verdicts = results
        .iter()
        .map(|r| {
            let case = by_id
                .get(r.case_id.as_str())
                .ok_or_else(|| JudgeError::UnknownCase(r.case_id.clone()))?;
            judge_result(case, r, registry)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut seen: std::collections::HashSet<&str> = results.iter().map(|r| r.case_id.as_str()).collect();
    if let Some(missing) = cases.iter().find(|c| !seen.remove(c.id.as_str())) {
        return Err(JudgeError::MissingResult(missing.id.clone()));
    }
    Ok(verdicts)
}

pub fn save_verdicts(verdicts: &[Verdict], path: &Path) -> Result<(), JsonlError> {
    jsonl::write(path, verdicts)
}

pub fn load_verdicts(path: &Path) -> Result<Vec<Verdict>, JsonlError> {
    let records = jsonl::read_numbered::<Verdict>(path)?;
    for (line, v) in &records {
        if v.passed != v.error_class.is_none() {
            return Err(jsonl::schema(path, *line, format!("verdict {}: error_class must be set exactly when failed", v.case_id)));
        }
    }
    Ok(records.into_iter().map(|(_, v)| v).collect())
}

/// One failing case with enough context for a manual audit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FailureRecord {
    pub case_id: String,
    pub direction: Direction,
    pub capability: Capability,
    pub backend: String,
    pub error_class: Option<ErrorClass>,
    pub source_sentence: String,
    pub surfaces: Vec<String>,
    pub ground_truths: Vec<CanonicalNumber>,
    pub output: Option<String>,
    pub candidates: Vec<Candidate>,
    pub notes: Vec<String>,
}

pub fn failure_records(cases: &[TestCase], results: &[TranslationResult], verdicts: &[Verdict]) -> Vec<FailureRecord> {
    verdicts
        .iter()
        .filter(|v| !v.passed)
        .filter_map(|v| {
            let case = cases.iter().find(|c| c.id == v.case_id)?;
            let result = results.iter().find(|r| r.case_id == v.case_id && r.backend == v.backend);
            Some(FailureRecord {
                case_id: v.case_id.clone(),
                direction: v.direction.clone(),
                capability: v.capability,
                backend: v.backend.clone(),
                error_class: v.error_class,
                source_sentence: case.source_sentence.clone(),
                surfaces: case.surfaces.clone(),
                ground_truths: case.ground_truths.clone(),
                output: result.and_then(|r| r.output.clone()),
                candidates: v.candidates.clone(),
                notes: v.notes.clone(),
            })
        })
        .collect()
}

/// Writes `failures.jsonl` and a readable `failures.txt` into `dir`.
pub fn dump_failures(dir: &Path, failures: &[FailureRecord]) -> Result<(), JsonlError> {
    std::fs::create_dir_all(dir).map_err(|e| JsonlError::io(dir, e))?;
    jsonl::write(&dir.join("failures.jsonl"), failures)?;
    let mut text = String::new();
    for f in failures {
        let class = f.error_class.map_or_else(|| "-".to_string(), |c| c.to_string());
        let truths: Vec<String> = f.ground_truths.iter().map(ToString::to_string).collect();
        text.push_str(&format!(
            "[{}] {} {} {}\n  source: {}\n  output: {}\n  expected: {}\n\n",
            class,
            f.direction,
            f.backend,
            f.case_id,
            f.source_sentence,
            f.output.as_deref().unwrap_or("<none>"),
            truths.join(", ")
        ));
    }
    let path = dir.join("failures.txt");
    std::fs::write(&path, text).map_err(|e| JsonlError::io(&path, e))
}
