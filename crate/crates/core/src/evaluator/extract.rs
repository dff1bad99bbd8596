//! Candidate numbers in a sentence, in every representation a language
//! knows: digits in any script, digits with scale words, and number words.

use serde::{Deserialize, Serialize};

use crate::lang::Language;
use crate::locale::{parse_localized, scan_number_tokens};
use crate::numeric::CanonicalNumber;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Representation {
    Digits,
    LocalDigits,
    Words,
    Hybrid,
}

/// Scale words following a digit token.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaleRun {
    pub power: u32,
    pub text: String,
}

/// One number-like span. `start..end` is a byte range covering the digit
/// token and any scale words; `text` is the digit token (or the words).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub start: usize,
    pub end: usize,
    pub text: String,
    pub representation: Representation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<CanonicalNumber>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parse_error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<ScaleRun>,
}

impl Candidate {
    pub fn is_digit_token(&self) -> bool {
        self.representation != Representation::Words
    }
}

fn error_tag<E: Serialize>(kind: &E) -> String {
    serde_json::to_value(kind)
        .ok()
        .and_then(|v| v.as_str().map(String::from))
        .unwrap_or_else(|| "unparseable".to_string())
}

pub fn extract_candidates(sentence: &str, language: &Language) -> Vec<Candidate> {
    let locale = &language.locale;
    let mut candidates: Vec<Candidate> = scan_number_tokens(sentence, locale)
        .into_iter()
        .map(|token| {
            let parsed = parse_localized(&token.text, locale);
            let run = language.scales.match_scale_run(&sentence[token.end..]);
            let scale = run.map(|(power, len)| ScaleRun {
                power,
                text: sentence[token.end..token.end + len].trim_start().to_string(),
            });
            let local = token.text.chars().any(|c| c.is_numeric() && !c.is_ascii_digit());
            let representation = match (&scale, &parsed) {
                (Some(_), Ok(_)) => Representation::Hybrid,
                _ if local => Representation::LocalDigits,
                _ => Representation::Digits,
            };
            let end = match (run, &parsed) {
                (Some((_, len)), Ok(_)) => token.end + len,
                _ => token.end,
            };
            let (value, parse_error) = match parsed {
                Ok(v) => (Some(v.scale_by_power_of_ten(scale.as_ref().map_or(0, |s| s.power) as i32)), None),
                Err(e) => (None, Some(error_tag(&e.kind))),
            };
            Candidate {
                start: token.start,
                end,
                text: token.text,
                representation,
                value,
                parse_error,
                scale,
            }
        })
        .collect();

    if let Some(words) = &language.words {
        let spans = words.find_word_spans(sentence);
        for span in spans {
            if candidates.iter().any(|c| span.start < c.end && c.start < span.end) {
                continue;
            }
            let parsed = words.parse_words(&span.text);
            candidates.push(Candidate {
                start: span.start,
                end: span.end,
                text: span.text,
                representation: Representation::Words,
                parse_error: parsed.as_ref().err().map(|_| "ill_formed_words".to_string()),
                value: parsed.ok(),
                scale: None,
            });
        }
        candidates.sort_by_key(|c| c.start);
    }
    candidates
}

/// Values of every parseable number in `text`.
pub fn source_numbers(text: &str, language: &Language) -> Vec<CanonicalNumber> {
    extract_candidates(text, language)
        .into_iter()
        .filter_map(|c| c.value)
        .collect()
}
