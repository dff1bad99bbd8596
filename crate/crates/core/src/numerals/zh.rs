//! Chinese positional numerals with 万/亿 sections, standard and financial.

use super::{NumeralError, Variant, WordSpan};

const STANDARD_DIGITS: [char; 10] = ['零', '一', '二', '三', '四', '五', '六', '七', '八', '九'];
const FINANCIAL_DIGITS: [char; 10] = ['零', '壹', '贰', '叁', '肆', '伍', '陆', '柒', '捌', '玖'];
/// 十 百 千
const STANDARD_UNITS: [char; 3] = ['十', '百', '千'];
const FINANCIAL_UNITS: [char; 3] = ['拾', '佰', '仟'];

pub(super) const MAX: u128 = 1_000_000_000_000;

struct Glyphs {
    digits: [char; 10],
    units: [char; 3],
}

fn glyphs(variant: Variant) -> Glyphs {
    match variant {
        Variant::Standard => Glyphs {
            digits: STANDARD_DIGITS,
            units: STANDARD_UNITS,
        },
        Variant::Financial => Glyphs {
            digits: FINANCIAL_DIGITS,
            units: FINANCIAL_UNITS,
        },
    }
}

/// Emits one four-digit section. `zero_pending` carries skipped zeros
/// across section boundaries so that a single 零 marks each gap.
fn render_section(section: u128, g: &Glyphs, out: &mut String, zero_pending: &mut bool, abbreviate_ten: bool) {
    let digits = [section / 1000, section / 100 % 10, section / 10 % 10, section % 10];
    let last_nonzero = digits.iter().rposition(|&d| d != 0).unwrap_or(0);
    for (i, &d) in digits.iter().enumerate() {
        let position = 3 - i;
        if d == 0 {
            // zeros closing a section are silent
            if !out.is_empty() && i < last_nonzero {
                *zero_pending = true;
            }
            continue;
        }
        if *zero_pending {
            out.push(g.digits[0]);
            *zero_pending = false;
        }
        // 十五 rather than 一十五 at the very start of a standard numeral
        let skip_one = abbreviate_ten && out.is_empty() && position == 1 && d == 1;
        if !skip_one {
            out.push(g.digits[d as usize]);
        }
        if position > 0 {
            out.push(g.units[position - 1]);
        }
    }
}

pub(super) fn render(n: u128, variant: Variant) -> String {
    let g = glyphs(variant);
    if n == 0 {
        return g.digits[0].to_string();
    }
    let abbreviate_ten = variant == Variant::Standard;
    if n == MAX {
        return format!("{}万亿", g.digits[1]);
    }
    let sections = [(n / 100_000_000, Some('亿')), (n / 10_000 % 10_000, Some('万')), (n % 10_000, None)];
    let mut out = String::new();
    let mut zero_pending = false;
    for (value, marker) in sections {
        if value == 0 {
            if !out.is_empty() {
                zero_pending = true;
            }
            continue;
        }
        render_section(value, &g, &mut out, &mut zero_pending, abbreviate_ten);
        if let Some(m) = marker {
            out.push(m);
        }
    }
    out
}

/// Maps financial, traditional and colloquial forms onto standard glyphs.
fn standardize(c: char) -> Option<char> {
    let c = match c {
        '〇' | '０' => '零',
        '两' | '兩' => '二',
        '萬' => '万',
        '億' => '亿',
        '拾' => '十',
        '佰' => '百',
        '仟' => '千',
        '贰' | '貳' => '二',
        '叁' | '參' => '三',
        '陆' | '陸' => '六',
        other => match FINANCIAL_DIGITS.iter().position(|&f| f == other) {
            Some(p) => STANDARD_DIGITS[p],
            None => other,
        },
    };
    (STANDARD_DIGITS.contains(&c) || STANDARD_UNITS.contains(&c) || c == '万' || c == '亿').then_some(c)
}

pub(super) fn is_numeral_char(c: char) -> bool {
    standardize(c).is_some()
}

fn digit_of(c: char) -> Option<u128> {
    STANDARD_DIGITS.iter().position(|&d| d == c).map(|p| p as u128)
}

fn unit_power(c: char) -> Option<u32> {
    STANDARD_UNITS.iter().position(|&u| u == c).map(|p| p as u32 + 1)
}

fn ill(msg: &str) -> NumeralError {
    NumeralError::IllFormed(msg.to_string())
}

/// A section below 10⁴. A bare digit right after a unit is read
/// colloquially as the next lower place (三千二 = 3200).
fn parse_section(chars: &[char]) -> Result<u128, NumeralError> {
    let mut value = 0u128;
    let mut pending: Option<u128> = None;
    let mut last_power = 4u32;
    let mut zero_since_unit = false;
    for (i, &c) in chars.iter().enumerate() {
        if c == '零' {
            if pending.is_some() {
                return Err(ill("零 after a digit"));
            }
            zero_since_unit = true;
        } else if let Some(d) = digit_of(c) {
            if pending.is_some() {
                return Err(ill("two digits without a unit"));
            }
            pending = Some(d);
        } else if let Some(power) = unit_power(c) {
            if power >= last_power {
                return Err(ill("units out of order"));
            }
            let multiplier = match pending.take() {
                Some(d) => d,
                None if i == 0 && power == 1 => 1,
                None => return Err(ill("unit without a digit")),
            };
            value += multiplier * 10u128.pow(power);
            last_power = power;
            zero_since_unit = false;
        } else {
            return Err(NumeralError::UnknownWord(c.to_string()));
        }
    }
    if let Some(d) = pending {
        if zero_since_unit || last_power == 4 || last_power == 1 {
            value += d;
        } else {
            value += d * 10u128.pow(last_power - 1);
        }
    }
    Ok(value)
}

/// Below 10⁸: `[section 万] [section]`.
fn parse_below_yi(chars: &[char]) -> Result<u128, NumeralError> {
    match chars.iter().position(|&c| c == '万') {
        Some(p) => {
            let high = &chars[..p];
            let low = &chars[p + 1..];
            if high.is_empty() || high == ['零'] {
                return Err(ill("万 without a multiplier"));
            }
            if low.contains(&'万') {
                return Err(ill("repeated 万"));
            }
            let high = parse_section(high)?;
            let low = bare_digit_tail(low, 3).map_or_else(|| parse_section(low), Ok)?;
            Ok(high * 10_000 + low)
        }
        None => parse_section(chars),
    }
}

/// 一万五 = 15000: a single digit directly after a section marker.
fn bare_digit_tail(chars: &[char], power: u32) -> Option<u128> {
    match chars {
        [c] => digit_of(*c).filter(|&d| d > 0).map(|d| d * 10u128.pow(power)),
        _ => None,
    }
}

pub(super) fn parse(text: &str) -> Result<u128, NumeralError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(NumeralError::Empty);
    }
    let chars = trimmed
        .chars()
        .map(|c| standardize(c).ok_or_else(|| NumeralError::UnknownWord(c.to_string())))
        .collect::<Result<Vec<char>, _>>()?;
    if chars == ['零'] {
        return Ok(0);
    }
    match chars.iter().position(|&c| c == '亿') {
        Some(p) => {
            let high = &chars[..p];
            let low = &chars[p + 1..];
            if high.is_empty() {
                return Err(ill("亿 without a multiplier"));
            }
            if low.contains(&'亿') {
                return Err(ill("repeated 亿"));
            }
            let high = parse_below_yi(high)?;
            let low = bare_digit_tail(low, 7).map_or_else(|| parse_below_yi(low), Ok)?;
            Ok(high * 100_000_000 + low)
        }
        None => parse_below_yi(&chars),
    }
}

pub(super) fn find_spans(sentence: &str) -> Vec<WordSpan> {
    let mut spans = Vec::new();
    let mut start: Option<usize> = None;
    for (b, c) in sentence.char_indices().chain(std::iter::once((sentence.len(), ' '))) {
        match (is_numeral_char(c), start) {
            (true, None) => start = Some(b),
            (false, Some(s)) => {
                spans.push(WordSpan {
                    start: s,
                    end: b,
                    text: sentence[s..b].to_string(),
                });
                start = None;
            }
            _ => {}
        }
    }
    spans
}
