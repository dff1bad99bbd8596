//! German cardinals. Values below a million are closed compounds
//! ("zweihundertdreiundzwanzigtausend"); Million and above are separate
//! capitalized nouns.

use super::{NumeralError, WordSpan};

const UNITS: [&str; 13] = [
    "null", "eins", "zwei", "drei", "vier", "fünf", "sechs", "sieben", "acht", "neun", "zehn", "elf",
    "zwölf",
];
const TEENS: [&str; 7] = [
    "dreizehn", "vierzehn", "fünfzehn", "sechzehn", "siebzehn", "achtzehn", "neunzehn",
];
const TENS: [&str; 10] = [
    "", "", "zwanzig", "dreißig", "vierzig", "fünfzig", "sechzig", "siebzig", "achtzig", "neunzig",
];
/// (power, singular, plural)
const SCALES: [(u32, &str, &str); 4] = [
    (15, "Billiarde", "Billiarden"),
    (12, "Billion", "Billionen"),
    (9, "Milliarde", "Milliarden"),
    (6, "Million", "Millionen"),
];

pub(super) const MAX: u128 = 1_000_000_000_000_000;

/// `standalone` selects "eins" for a final 1; inside compounds it is "ein".
fn below_hundred(n: u128, standalone: bool) -> String {
    match n {
        1 if !standalone => "ein".to_string(),
        0..=12 => UNITS[n as usize].to_string(),
        13..=19 => TEENS[(n - 13) as usize].to_string(),
        _ if n.is_multiple_of(10) => TENS[(n / 10) as usize].to_string(),
        _ => {
            let unit = if n % 10 == 1 { "ein" } else { UNITS[(n % 10) as usize] };
            format!("{unit}und{}", TENS[(n / 10) as usize])
        }
    }
}

fn below_thousand(n: u128, standalone: bool) -> String {
    let hundreds = n / 100;
    let rest = n % 100;
    let mut out = String::new();
    if hundreds > 0 {
        out.push_str(&below_hundred(hundreds, false));
        out.push_str("hundert");
    }
    if rest > 0 {
        out.push_str(&below_hundred(rest, standalone));
    }
    out
}

fn compound(n: u128, standalone: bool) -> String {
    let thousands = n / 1000;
    let rest = n % 1000;
    let mut out = String::new();
    if thousands > 0 {
        out.push_str(&below_thousand(thousands, false));
        out.push_str("tausend");
    }
    if rest > 0 {
        out.push_str(&below_thousand(rest, standalone));
    }
    out
}

pub(super) fn render(n: u128) -> String {
    if n == 0 {
        return UNITS[0].to_string();
    }
    let mut parts = Vec::new();
    let mut rest = n;
    for (power, singular, plural) in SCALES {
        let unit = 10u128.pow(power);
        let multiplier = rest / unit;
        if multiplier == 1 {
            parts.push(format!("eine {singular}"));
        } else if multiplier > 1 {
            parts.push(format!("{} {plural}", compound(multiplier, true)));
        }
        rest %= unit;
    }
    if rest > 0 {
        parts.push(compound(rest, true));
    }
    parts.join(" ")
}

fn normalize(word: &str) -> String {
    word.to_lowercase().replace("ss", "ß").replace("ue", "ü").replace("oe", "ö")
}

fn unit_prefix(s: &str) -> Option<u128> {
    match s {
        "" | "ein" => Some(1),
        _ => UNITS[2..10].iter().position(|&w| w == s).map(|p| p as u128 + 2),
    }
}

fn parse_below_hundred(s: &str) -> Option<u128> {
    if s == "ein" || s == "eine" {
        return Some(1);
    }
    if let Some(p) = UNITS.iter().position(|&w| w == s) {
        return Some(p as u128);
    }
    if let Some(p) = TEENS.iter().position(|&w| w == s) {
        return Some(p as u128 + 13);
    }
    if let Some(p) = TENS.iter().skip(2).position(|&w| w == s) {
        return Some((p as u128 + 2) * 10);
    }
    let (unit, tens) = s.split_once("und")?;
    let unit = match unit {
        "ein" => 1,
        _ => UNITS[2..10].iter().position(|&w| w == unit)? as u128 + 2,
    };
    let tens = TENS.iter().skip(2).position(|&w| w == tens)? as u128 + 2;
    Some(tens * 10 + unit)
}

fn parse_below_thousand(s: &str) -> Option<u128> {
    match s.split_once("hundert") {
        Some((left, right)) => {
            let hundreds = unit_prefix(left)?;
            let rest = if right.is_empty() {
                0
            } else {
                parse_below_hundred(right).filter(|&v| v > 0)?
            };
            Some(hundreds * 100 + rest)
        }
        None => parse_below_hundred(s),
    }
}

/// A closed compound below one million, already normalized.
fn parse_compound(s: &str) -> Option<u128> {
    match s.split_once("tausend") {
        Some((left, right)) => {
            let thousands = if left.is_empty() {
                1
            } else {
                parse_below_thousand(left).filter(|&v| v > 0)?
            };
            let rest = if right.is_empty() {
                0
            } else {
                parse_below_thousand(right).filter(|&v| v > 0)?
            };
            Some(thousands * 1000 + rest)
        }
        None => parse_below_thousand(s),
    }
}

fn scale_power(word: &str) -> Option<u32> {
    let w = word.to_lowercase();
    SCALES
        .iter()
        .find(|(_, s, p)| s.to_lowercase() == w || p.to_lowercase() == w)
        .map(|&(power, _, _)| power)
}

pub(super) fn is_number_word(word: &str) -> bool {
    scale_power(word).is_some() || parse_compound(&normalize(word)).is_some()
}

pub(super) fn parse(text: &str) -> Result<u128, NumeralError> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.is_empty() {
        return Err(NumeralError::Empty);
    }
    let mut total = 0u128;
    let mut last_power = u32::MAX;
    let mut i = 0;
    while i < tokens.len() {
        let word = normalize(tokens[i]);
        if scale_power(&word).is_some() {
            return Err(NumeralError::IllFormed(format!("{} without a multiplier", tokens[i])));
        }
        let value = parse_compound(&word).ok_or_else(|| NumeralError::UnknownWord(tokens[i].to_string()))?;
        match tokens.get(i + 1).and_then(|w| scale_power(w)) {
            Some(power) => {
                if power >= last_power || value == 0 || value >= 1000 {
                    return Err(NumeralError::IllFormed(format!("misplaced {}", tokens[i + 1])));
                }
                total += value * 10u128.pow(power);
                last_power = power;
                i += 2;
            }
            None => {
                if i + 1 != tokens.len() {
                    return Err(NumeralError::IllFormed(format!("unexpected {}", tokens[i + 1])));
                }
                if value == 0 && total > 0 {
                    return Err(NumeralError::IllFormed("trailing null".into()));
                }
                total += value;
                i += 1;
            }
        }
    }
    Ok(total)
}

pub(super) fn find_spans(sentence: &str) -> Vec<WordSpan> {
    let mut words: Vec<(usize, usize)> = Vec::new();
    let mut start = None;
    for (b, c) in sentence.char_indices().chain(std::iter::once((sentence.len(), ' '))) {
        match (c.is_alphabetic(), start) {
            (true, None) => start = Some(b),
            (false, Some(s)) => {
                words.push((s, b));
                start = None;
            }
            _ => {}
        }
    }

    let text = |w: (usize, usize)| &sentence[w.0..w.1];
    // "ein"/"eine" are articles unless they multiply a scale noun
    let is_part = |k: usize| {
        let w = normalize(text(words[k]));
        if w == "ein" || w == "eine" {
            return words.get(k + 1).is_some_and(|&n| scale_power(text(n)).is_some());
        }
        is_number_word(text(words[k]))
    };

    let mut spans = Vec::new();
    let mut k = 0;
    while k < words.len() {
        if !is_part(k) || scale_power(text(words[k])).is_some() {
            k += 1;
            continue;
        }
        let mut end = k;
        while end + 1 < words.len()
            && sentence[words[end].1..words[end + 1].0].chars().all(char::is_whitespace)
            && is_part(end + 1)
        {
            end += 1;
        }
        spans.push(WordSpan {
            start: words[k].0,
            end: words[end].1,
            text: sentence[words[k].0..words[end].1].to_string(),
        });
        k = end + 1;
    }
    spans
}
