//! Number-format patterns (`"ddd.ddn"`) and fuzz generation from them.
//!
//! Pattern alphabet: `d` digit, `.` decimal point, `,` group separator slot,
//! `n` numeral unit. A unit may restrict its vocabulary with a bracketed
//! list: `ddd.ddn[million|trillion]`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lang::Language;
use crate::locale::render_with_min_scale;
use crate::numerals::render_hybrid;
use crate::numeric::CanonicalNumber;
use crate::suite::Capability;

/// Scale words a numeral unit may stand for, with their powers of ten.
pub const UNIT_WORDS: [(&str, u32); 5] = [
    ("hundred", 2),
    ("thousand", 3),
    ("million", 6),
    ("billion", 9),
    ("trillion", 12),
];

const DEFAULT_UNITS: [&str; 4] = ["hundred", "thousand", "million", "trillion"];

pub fn unit_power(word: &str) -> Option<u32> {
    UNIT_WORDS.iter().find(|(w, _)| *w == word).map(|&(_, p)| p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FormatToken {
    Digit,
    DecimalPoint,
    GroupSeparatorSlot,
    NumeralUnit,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("empty format pattern")]
    Empty,
    #[error("unknown character {found:?} at position {position}")]
    UnknownCharacter { position: usize, found: char },
    #[error("second decimal point at position {position}")]
    MultipleDecimalPoints { position: usize },
    #[error("numeral unit must be the last token (position {position})")]
    UnitNotFinal { position: usize },
    #[error("decimal point at position {position} needs digits on both sides")]
    BareDecimalPoint { position: usize },
    #[error("group separator at position {position} does not split the integer digits into threes")]
    BadGrouping { position: usize },
    #[error("group separators cannot be combined with a numeral unit")]
    SeparatorWithUnit,
    #[error("unknown unit word {0:?}")]
    UnknownUnit(String),
    #[error("unterminated unit list")]
    UnterminatedUnitList,
}

/// A parsed pattern. Display gives back the canonical pattern string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberFormat {
    pub tokens: Vec<FormatToken>,
    pub capability: Capability,
    /// Unit vocabulary; empty unless the pattern ends in a numeral unit.
    pub units: Vec<String>,
}

impl NumberFormat {
    pub fn integer_digits(&self) -> usize {
        self.tokens
            .iter()
            .take_while(|t| **t != FormatToken::DecimalPoint)
            .filter(|t| **t == FormatToken::Digit)
            .count()
    }

    pub fn fraction_digits(&self) -> usize {
        self.tokens
            .iter()
            .skip_while(|t| **t != FormatToken::DecimalPoint)
            .filter(|t| **t == FormatToken::Digit)
            .count()
    }

    pub fn has_unit(&self) -> bool {
        self.tokens.last() == Some(&FormatToken::NumeralUnit)
    }

    pub fn is_grouped(&self) -> bool {
        self.tokens.contains(&FormatToken::GroupSeparatorSlot)
    }

    pub fn pattern(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for NumberFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for token in &self.tokens {
            f.write_str(match token {
                FormatToken::Digit => "d",
                FormatToken::DecimalPoint => ".",
                FormatToken::GroupSeparatorSlot => ",",
                FormatToken::NumeralUnit => "n",
            })?;
        }
        let default: Vec<String> = DEFAULT_UNITS.iter().map(|u| u.to_string()).collect();
        if self.has_unit() && self.units != default {
            write!(f, "[{}]", self.units.join("|"))?;
        }
        Ok(())
    }
}

impl FromStr for NumberFormat {
    type Err = FormatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_format(s)
    }
}

pub fn parse_format(pattern: &str) -> Result<NumberFormat, FormatError> {
    if pattern.is_empty() {
        return Err(FormatError::Empty);
    }
    let (body, units) = match pattern.find('[') {
        Some(open) => {
            let list = pattern[open + 1..]
                .strip_suffix(']')
                .ok_or(FormatError::UnterminatedUnitList)?;
            let units: Vec<String> = list.split('|').map(|u| u.trim().to_lowercase()).collect();
            if let Some(bad) = units.iter().find(|u| unit_power(u).is_none()) {
                return Err(FormatError::UnknownUnit(bad.clone()));
            }
            (&pattern[..open], Some(units))
        }
        None => (pattern, None),
    };

    let chars: Vec<char> = body.chars().collect();
    let mut tokens = Vec::with_capacity(chars.len());
    let mut point = None;
    for (position, &c) in chars.iter().enumerate() {
        let token = match c {
            'd' => FormatToken::Digit,
            '.' => {
                if point.is_some() {
                    return Err(FormatError::MultipleDecimalPoints { position });
                }
                point = Some(position);
                FormatToken::DecimalPoint
            }
            ',' => FormatToken::GroupSeparatorSlot,
            'n' => {
                if position + 1 != chars.len() {
                    return Err(FormatError::UnitNotFinal { position });
                }
                FormatToken::NumeralUnit
            }
            found => return Err(FormatError::UnknownCharacter { position, found }),
        };
        tokens.push(token);
    }
    if units.is_some() && tokens.last() != Some(&FormatToken::NumeralUnit) {
        return Err(FormatError::UnitNotFinal { position: chars.len() });
    }

    if let Some(p) = point {
        let before = tokens[..p].last() == Some(&FormatToken::Digit);
        let after = tokens.get(p + 1) == Some(&FormatToken::Digit);
        if !before || !after {
            return Err(FormatError::BareDecimalPoint { position: p });
        }
    }

    let has_unit = tokens.last() == Some(&FormatToken::NumeralUnit);
    let grouped = tokens.contains(&FormatToken::GroupSeparatorSlot);
    if grouped {
        if has_unit {
            return Err(FormatError::SeparatorWithUnit);
        }
        check_grouping(&tokens, point)?;
    }
    if !tokens.contains(&FormatToken::Digit) || tokens.first() != Some(&FormatToken::Digit) {
        return Err(FormatError::BareDecimalPoint { position: 0 });
    }

    let capability = if has_unit {
        Capability::Numerals
    } else if grouped {
        Capability::Separators
    } else if point.is_some() {
        Capability::Decimals
    } else {
        Capability::Integers
    };
    let units = match (has_unit, units) {
        (true, Some(u)) => u,
        (true, None) => DEFAULT_UNITS.iter().map(|u| u.to_string()).collect(),
        (false, _) => Vec::new(),
    };
    Ok(NumberFormat {
        tokens,
        capability,
        units,
    })
}

/// Separators split the integer digits into groups of three from the right;
/// the leftmost group holds one to three digits.
fn check_grouping(tokens: &[FormatToken], point: Option<usize>) -> Result<(), FormatError> {
    let end = point.unwrap_or(tokens.len());
    if let Some(p) = point {
        if let Some(offset) = tokens[p..].iter().position(|t| *t == FormatToken::GroupSeparatorSlot) {
            return Err(FormatError::BadGrouping { position: p + offset });
        }
    }
    let mut run = 0;
    let mut first = true;
    for (position, token) in tokens[..end].iter().enumerate() {
        match token {
            FormatToken::Digit => run += 1,
            _ => {
                let ok = if first { (1..=3).contains(&run) } else { run == 3 };
                if !ok || position + 1 == end {
                    return Err(FormatError::BadGrouping { position });
                }
                first = false;
                run = 0;
            }
        }
    }
    if run != 3 {
        return Err(FormatError::BadGrouping { position: end });
    }
    Ok(())
}

/// The 25 built-in formats: 10 Integers, 4 Decimals, 4 Numerals and
/// 7 Separators.
pub fn builtin_formats() -> Vec<NumberFormat> {
    let mut patterns: Vec<String> = (1..=10).map(|n| "d".repeat(n)).collect();
    patterns.extend(["d.d", "d.dd", "dd.ddd", "dd.dddd"].map(String::from));
    patterns.extend(DEFAULT_UNITS.iter().map(|u| format!("ddd.ddn[{u}]")));
    patterns.extend(
        [
            "d,ddd",
            "dd,ddd",
            "ddd,ddd",
            "d,ddd,ddd",
            "ddd,ddd.dd",
            "d,ddd,ddd.dd",
            "d,ddd,ddd,ddd",
        ]
        .map(String::from),
    );
    patterns
        .iter()
        .map(|p| parse_format(p).expect("built-in formats parse"))
        .collect()
}

/// How numbers of Numerals formats are written on the source side.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NumeralMode {
    /// Digits plus a scale word: "100.01 million".
    #[default]
    Hybrid,
    /// Fully spelled words where the language supports them.
    Words,
}

impl FromStr for NumeralMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hybrid" => Ok(NumeralMode::Hybrid),
            "words" => Ok(NumeralMode::Words),
            other => Err(format!("unknown numeral mode {other:?} (expected hybrid or words)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedNumber {
    pub value: CanonicalNumber,
    pub surface: String,
    /// The originating pattern, narrowed to the unit actually drawn.
    pub format: String,
}

/// Draws digits for `format`; the leading digit is never zero.
fn draw_digits<R: Rng + ?Sized>(format: &NumberFormat, rng: &mut R) -> (String, String) {
    let mut draw = |n: usize, lead: bool| -> String {
        (0..n)
            .map(|i| {
                let low = if lead && i == 0 { 1 } else { 0 };
                char::from(b'0' + rng.random_range(low..=9u8))
            })
            .collect()
    };
    let integer = draw(format.integer_digits(), true);
    let fraction = draw(format.fraction_digits(), false);
    (integer, fraction)
}

/// Generates an English-source number for `format`.
pub fn generate<R: Rng + ?Sized>(format: &NumberFormat, rng: &mut R) -> GeneratedNumber {
    let en = Language::builtin("en").expect("English is built in");
    generate_for(format, &en, NumeralMode::Hybrid, rng)
}

/// Generates a number and renders it in `language`.
pub fn generate_for<R: Rng + ?Sized>(
    format: &NumberFormat,
    language: &Language,
    mode: NumeralMode,
    rng: &mut R,
) -> GeneratedNumber {
    let (integer, fraction) = draw_digits(format, rng);
    let unit = format
        .has_unit()
        .then(|| format.units[rng.random_range(0..format.units.len())].clone());
    render_generated(format, &integer, &fraction, unit.as_deref(), language, mode)
}

/// Builds the generated number from explicit digits; `unit` must be one of
/// the format's vocabulary when the format has a numeral unit.
pub fn render_generated(
    format: &NumberFormat,
    integer: &str,
    fraction: &str,
    unit: Option<&str>,
    language: &Language,
    mode: NumeralMode,
) -> GeneratedNumber {
    let plain = if fraction.is_empty() {
        integer.to_string()
    } else {
        format!("{integer}.{fraction}")
    };
    let digit_part = CanonicalNumber::from_plain_string(&plain).expect("drawn digits form a number");
    let local = language.prefers_local_digits();
    let locale = &language.locale;

    let Some(unit) = unit else {
        let surface = render_with_min_scale(&digit_part, locale, format.is_grouped(), local, fraction.len());
        return GeneratedNumber {
            value: digit_part,
            surface,
            format: format.pattern(),
        };
    };

    let power = unit_power(unit).expect("unit vocabulary is validated");
    let value = digit_part.scale_by_power_of_ten(power as i32);
    let words = (mode == NumeralMode::Words)
        .then(|| language.words.as_ref()?.render_words(&value).ok())
        .flatten();
    // the drawn digits with the exact unit, else the largest native scale
    // word below it, else plain digits
    let one = CanonicalNumber::from_u64(1);
    let surface = words
        .or_else(|| {
            let word = language.scales.word_for(power, digit_part == one)?;
            let digits = render_with_min_scale(&digit_part, locale, false, local, fraction.len());
            Some(language.scales.join(&digits, word))
        })
        .or_else(|| render_hybrid(&value, power, locale, &language.scales, local))
        .unwrap_or_else(|| render_with_min_scale(&value, locale, false, local, 0));
    GeneratedNumber {
        value,
        surface,
        format: format!("{}[{unit}]", strip_units(&format.pattern())),
    }
}

fn strip_units(pattern: &str) -> &str {
    pattern.split('[').next().unwrap_or(pattern)
}
