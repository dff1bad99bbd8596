//! A pseudo-translator that keeps the source text and rewrites only the
//! numbers, either correctly or with one injected error family.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Backend, BackendError, SourceNumber, TranslationRequest};
use crate::evaluator::{digit_edit_class, extract_candidates, source_numbers, Candidate, ErrorClass, Representation};
use crate::lang::{Language, LanguageRegistry};
use crate::locale::{render_grouped, render_with_min_scale};
use crate::numeric::CanonicalNumber;
use crate::suite::{derive_seed, Capability};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InjectedErrorKind {
    Perfect,
    KeepSourceSeparators,
    SwapDigits,
    DropDigit,
    DuplicateDigit,
    WrongUnitScale,
    OmitNumber,
    CopySource,
}

impl InjectedErrorKind {
    pub const ALL: [InjectedErrorKind; 8] = [
        InjectedErrorKind::Perfect,
        InjectedErrorKind::KeepSourceSeparators,
        InjectedErrorKind::SwapDigits,
        InjectedErrorKind::DropDigit,
        InjectedErrorKind::DuplicateDigit,
        InjectedErrorKind::WrongUnitScale,
        InjectedErrorKind::OmitNumber,
        InjectedErrorKind::CopySource,
    ];

    /// The class the evaluator should assign to this kind's failures.
    pub fn expected_class(self) -> Option<ErrorClass> {
        match self {
            InjectedErrorKind::KeepSourceSeparators => Some(ErrorClass::SeparatorError),
            InjectedErrorKind::SwapDigits => Some(ErrorClass::DigitSubstitution),
            InjectedErrorKind::DropDigit => Some(ErrorClass::DigitOmission),
            InjectedErrorKind::DuplicateDigit => Some(ErrorClass::DigitAddition),
            InjectedErrorKind::WrongUnitScale => Some(ErrorClass::UnitScaleError),
            InjectedErrorKind::OmitNumber => Some(ErrorClass::NumberMissing),
            InjectedErrorKind::Perfect | InjectedErrorKind::CopySource => None,
        }
    }
}

impl fmt::Display for InjectedErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for InjectedErrorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        InjectedErrorKind::ALL
            .into_iter()
            .find(|k| k.to_string().to_ascii_lowercase() == key)
            .ok_or_else(|| {
                let names: Vec<String> = InjectedErrorKind::ALL.iter().map(|k| k.to_string()).collect();
                format!("unknown mock kind {s:?} (expected one of {})", names.join(", "))
            })
    }
}

/// How a source number was written, which the mock mirrors in the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Form {
    Words,
    Hybrid { power: u32 },
    Digits { grouped: bool, fraction_len: usize },
}

/// A located source number.
#[derive(Debug, Clone)]
struct Slot {
    start: usize,
    end: usize,
    value: CanonicalNumber,
    form: Form,
}

pub struct MockBackend {
    kind: InjectedErrorKind,
    registry: LanguageRegistry,
}

impl MockBackend {
    pub fn new(kind: InjectedErrorKind, registry: LanguageRegistry) -> Self {
        MockBackend { kind, registry }
    }

    pub fn kind(&self) -> InjectedErrorKind {
        self.kind
    }

    fn inapplicable(&self, reason: impl Into<String>) -> BackendError {
        BackendError::Inapplicable {
            kind: self.kind.to_string(),
            reason: reason.into(),
        }
    }

    pub fn mock_translate(&self, request: &TranslationRequest) -> Result<String, BackendError> {
        let lang = |tag: &str| self.registry.get(tag).map_err(|e| BackendError::Misconfigured(e.to_string()));
        let source = lang(&request.direction.source)?;
        let target = lang(&request.direction.target)?;
        let sentence = &request.source_sentence;
        if self.kind == InjectedErrorKind::CopySource {
            return Ok(sentence.clone());
        }
        if self.kind == InjectedErrorKind::WrongUnitScale && request.capability.is_some_and(|c| c != Capability::Numerals) {
            return Err(self.inapplicable("not a Numerals case"));
        }

        let slots = locate(sentence, &request.numbers, source);
        if slots.is_empty() {
            return Err(self.inapplicable("no numbers in the source sentence"));
        }
        // values the template carries, which corrupted numbers must avoid
        let avoid: Vec<CanonicalNumber> = source_numbers(sentence, source);

        let mut rendered = Vec::with_capacity(slots.len());
        let mut corrupted = 0;
        for (i, slot) in slots.iter().enumerate() {
            let perfect = render_perfect(slot, target);
            let text = match self.kind {
                InjectedErrorKind::Perfect => Some(perfect.clone()),
                InjectedErrorKind::OmitNumber => Some(String::new()),
                InjectedErrorKind::KeepSourceSeparators => {
                    let mut kept = target.clone();
                    kept.locale.decimal_sep = source.locale.decimal_sep;
                    kept.locale.group_sep = source.locale.group_sep;
                    kept.locale.grouping = source.locale.grouping.clone();
                    Some(render_perfect(slot, &kept)).filter(|t| *t != perfect)
                }
                InjectedErrorKind::DropDigit | InjectedErrorKind::DuplicateDigit | InjectedErrorKind::SwapDigits => {
                    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(request.seed, &format!("{}/{i}", self.kind)));
                    edit_digits(self.kind, slot, &avoid, &mut rng).map(|v| {
                        let grouped = matches!(slot.form, Form::Digits { grouped: true, .. });
                        render_grouped(&v, &target.locale, grouped, target.prefers_local_digits())
                    })
                }
                InjectedErrorKind::WrongUnitScale => wrong_unit(slot, target),
                InjectedErrorKind::CopySource => unreachable!(),
            };
            if text.as_ref().is_some_and(|t| *t != perfect) {
                corrupted += 1;
            }
            rendered.push(text.unwrap_or(perfect));
        }
        if self.kind != InjectedErrorKind::Perfect && corrupted == 0 {
            return Err(self.inapplicable("no number of this case can carry the error"));
        }

        let mut out = sentence.clone();
        for (slot, text) in slots.iter().zip(&rendered).rev() {
            out.replace_range(slot.start..slot.end, text);
        }
        if self.kind == InjectedErrorKind::OmitNumber {
            out = tidy_spaces(&out);
        }
        Ok(out)
    }
}

impl Backend for MockBackend {
    fn id(&self) -> String {
        format!("mock:{}", self.kind)
    }

    fn translate(&self, request: &TranslationRequest) -> Result<String, BackendError> {
        self.mock_translate(request)
    }
}

fn form_of(candidate: &Candidate, language: &Language) -> Form {
    match candidate.representation {
        Representation::Words => Form::Words,
        Representation::Hybrid => Form::Hybrid {
            power: candidate.scale.as_ref().map_or(0, |s| s.power),
        },
        Representation::Digits | Representation::LocalDigits => Form::Digits {
            grouped: candidate.text.contains(language.locale.group_sep),
            fraction_len: candidate
                .text
                .split_once(language.locale.decimal_sep)
                .map_or(0, |(_, f)| f.chars().count()),
        },
    }
}

/// Finds the known numbers in order; with no known numbers every parseable
/// candidate of the sentence is used.
fn locate(sentence: &str, numbers: &[SourceNumber], source: &Language) -> Vec<Slot> {
    let candidates = extract_candidates(sentence, source);
    if numbers.is_empty() {
        return candidates
            .iter()
            .filter_map(|c| {
                Some(Slot {
                    start: c.start,
                    end: c.end,
                    value: c.value.clone()?,
                    form: form_of(c, source),
                })
            })
            .collect();
    }
    let mut slots: Vec<Slot> = Vec::with_capacity(numbers.len());
    let mut from = 0;
    for number in numbers {
        let hit = candidates.iter().find(|c| {
            c.start >= from && c.value.as_ref() == Some(&number.value) && sentence[c.start..c.end] == *number.surface
        });
        let slot = match hit {
            Some(c) => Slot {
                start: c.start,
                end: c.end,
                value: number.value.clone(),
                form: form_of(c, source),
            },
            None => {
                let Some(offset) = sentence[from..].find(&number.surface) else { continue };
                let start = from + offset;
                Slot {
                    start,
                    end: start + number.surface.len(),
                    value: number.value.clone(),
                    form: Form::Digits {
                        grouped: false,
                        fraction_len: 0,
                    },
                }
            }
        };
        from = slot.end;
        slots.push(slot);
    }
    slots
}

/// The target scale word for a hybrid number: the source's power when the
/// target has it, else the largest power leaving a digit part of at least one.
fn target_power(value: &CanonicalNumber, source_power: u32, target: &Language) -> Option<u32> {
    let powers = target.scales.render_powers();
    if powers.contains(&source_power) {
        return Some(source_power);
    }
    let one = CanonicalNumber::from_u64(1);
    powers
        .into_iter()
        .filter(|&p| value.scale_by_power_of_ten(-(p as i32)) >= one)
        .max()
}

fn render_with_power(digit_part: &CanonicalNumber, power: u32, target: &Language) -> Option<String> {
    let word = target.scales.word_for(power, *digit_part == CanonicalNumber::from_u64(1))?;
    let digits = render_grouped(digit_part, &target.locale, false, target.prefers_local_digits());
    Some(target.scales.join(&digits, word))
}

fn render_perfect(slot: &Slot, target: &Language) -> String {
    let value = &slot.value;
    let local = target.prefers_local_digits();
    let plain = || render_grouped(value, &target.locale, false, local);
    match slot.form {
        Form::Words => target
            .words
            .as_ref()
            .and_then(|w| w.render_words(value).ok())
            .unwrap_or_else(plain),
        Form::Hybrid { power } => target_power(value, power, target)
            .and_then(|p| render_with_power(&value.scale_by_power_of_ten(-(p as i32)), p, target))
            .unwrap_or_else(plain),
        Form::Digits { grouped, fraction_len } => {
            render_with_min_scale(value, &target.locale, grouped, local, fraction_len)
        }
    }
}

/// Same digit part, neighbouring scale word: a factor of 10^k off.
fn wrong_unit(slot: &Slot, target: &Language) -> Option<String> {
    let source_power = match slot.form {
        Form::Hybrid { power } => power,
        Form::Words => target_power(&slot.value, u32::MAX, target)?,
        Form::Digits { .. } => return None,
    };
    let power = target_power(&slot.value, source_power, target)?;
    let digit_part = slot.value.scale_by_power_of_ten(-(power as i32));
    let powers = target.scales.render_powers();
    let wrong = powers
        .iter()
        .copied()
        .find(|&p| p > power)
        .or_else(|| powers.iter().copied().rev().find(|&p| p < power))?;
    render_with_power(&digit_part, wrong, target)
}

/// One seed-chosen single-digit edit of the value that the evaluator will
/// recognise as `kind`'s error class.
fn edit_digits<R: Rng>(
    kind: InjectedErrorKind,
    slot: &Slot,
    avoid: &[CanonicalNumber],
    rng: &mut R,
) -> Option<CanonicalNumber> {
    let plain: Vec<char> = slot.value.to_plain_string().chars().collect();
    let mut options: Vec<CanonicalNumber> = Vec::new();
    for i in 0..plain.len() {
        if !plain[i].is_ascii_digit() {
            continue;
        }
        let mut edited = plain.clone();
        match kind {
            InjectedErrorKind::DropDigit => {
                edited.remove(i);
            }
            InjectedErrorKind::DuplicateDigit => edited.insert(i, plain[i]),
            InjectedErrorKind::SwapDigits => {
                if i + 1 >= plain.len() || !plain[i + 1].is_ascii_digit() || plain[i] == plain[i + 1] {
                    continue;
                }
                edited.swap(i, i + 1);
            }
            _ => return None,
        }
        let mut text: String = edited.into_iter().collect();
        if text.starts_with('.') {
            text.insert(0, '0');
        }
        if text.ends_with('.') {
            text.pop();
        }
        let Ok(value) = CanonicalNumber::from_plain_string(&text) else { continue };
        if digit_edit_class(&slot.value, &value) == kind.expected_class()
            && !avoid.contains(&value)
            && !options.contains(&value)
        {
            options.push(value);
        }
    }
    if options.is_empty() {
        return None;
    }
    let pick = rng.random_range(0..options.len());
    Some(options.swap_remove(pick))
}

/// Collapses the gaps left by a removed number.
fn tidy_spaces(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        let prev_space = out.ends_with(' ');
        if c == ' ' && prev_space {
            continue;
        }
        if matches!(c, '.' | ',' | ';' | ':' | '!' | '?') && prev_space {
            out.pop();
        }
        out.push(c);
    }
    out
}
