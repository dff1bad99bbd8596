//! English cardinals, American short scale.

use super::{NumeralError, WordSpan};

const UNITS: [&str; 20] = [
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven",
    "twelve", "thirteen", "fourteen", "fifteen", "sixteen", "seventeen", "eighteen", "nineteen",
];
const TENS: [&str; 10] = [
    "", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety",
];
const SCALES: [(&str, u32); 5] = [
    ("quadrillion", 15),
    ("trillion", 12),
    ("billion", 9),
    ("million", 6),
    ("thousand", 3),
];

pub(super) const MAX: u128 = 1_000_000_000_000_000;

fn below_thousand(n: u128, out: &mut Vec<String>) {
    let hundreds = n / 100;
    let rest = n % 100;
    if hundreds > 0 {
        out.push(UNITS[hundreds as usize].to_string());
        out.push("hundred".to_string());
    }
    if rest == 0 {
        return;
    }
    if rest < 20 {
        out.push(UNITS[rest as usize].to_string());
    } else if rest.is_multiple_of(10) {
        out.push(TENS[(rest / 10) as usize].to_string());
    } else {
        out.push(format!("{}-{}", TENS[(rest / 10) as usize], UNITS[(rest % 10) as usize]));
    }
}

pub(super) fn render(n: u128) -> String {
    if n == 0 {
        return UNITS[0].to_string();
    }
    let mut words = Vec::new();
    let mut rest = n;
    for (word, power) in SCALES {
        let unit = 10u128.pow(power);
        let group = rest / unit;
        if group > 0 {
            below_thousand(group, &mut words);
            words.push(word.to_string());
            rest %= unit;
        }
    }
    below_thousand(rest, &mut words);
    words.join(" ")
}

fn unit_value(word: &str) -> Option<u128> {
    UNITS.iter().position(|&w| w == word).map(|p| p as u128)
}

fn tens_value(word: &str) -> Option<u128> {
    TENS.iter().skip(2).position(|&w| w == word).map(|p| (p as u128 + 2) * 10)
}

fn scale_power(word: &str) -> Option<u32> {
    SCALES.iter().find(|(w, _)| *w == word).map(|&(_, p)| p)
}

pub(super) fn is_number_word(word: &str) -> bool {
    unit_value(word).is_some() || tens_value(word).is_some() || word == "hundred" || scale_power(word).is_some()
}

fn split_tokens(text: &str) -> Vec<String> {
    text.split(|c: char| c.is_whitespace() || c == '-' || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.to_lowercase())
        .collect()
}

struct Cursor<'a> {
    tokens: &'a [String],
    pos: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<&str> {
        self.tokens.get(self.pos).map(String::as_str)
    }

    fn peek_at(&self, offset: usize) -> Option<&str> {
        self.tokens.get(self.pos + offset).map(String::as_str)
    }

    fn skip_and(&mut self) {
        if self.peek() == Some("and") && self.peek_at(1).is_some() {
            self.pos += 1;
        }
    }
}

/// One group below a thousand: `[u hundred] [tens [unit] | teen | unit]`.
fn parse_group(cur: &mut Cursor<'_>) -> Result<Option<u128>, NumeralError> {
    let mut value = 0u128;
    let mut any = false;

    let leading_unit = match cur.peek() {
        Some("a") => Some(1),
        Some(w) => unit_value(w).filter(|&v| (1..10).contains(&v)),
        None => None,
    };
    if let Some(u) = leading_unit {
        if cur.peek_at(1) == Some("hundred") {
            value = u * 100;
            cur.pos += 2;
            any = true;
            cur.skip_and();
        } else if cur.peek() == Some("a") {
            // "a million"
            if cur.peek_at(1).and_then(scale_power).is_some() {
                cur.pos += 1;
                return Ok(Some(1));
            }
            return Err(NumeralError::IllFormed("dangling 'a'".into()));
        }
    }
    if cur.peek() == Some("hundred") {
        return Err(NumeralError::IllFormed("'hundred' without a multiplier".into()));
    }

    if let Some(t) = cur.peek().and_then(tens_value) {
        value += t;
        cur.pos += 1;
        any = true;
        if let Some(u) = cur.peek().and_then(unit_value).filter(|&u| (1..10).contains(&u)) {
            value += u;
            cur.pos += 1;
        }
    } else if let Some(u) = cur.peek().and_then(unit_value).filter(|&u| u > 0) {
        value += u;
        cur.pos += 1;
        any = true;
    }
    Ok(any.then_some(value))
}

pub(super) fn parse(text: &str) -> Result<u128, NumeralError> {
    let tokens = split_tokens(text);
    if tokens.is_empty() {
        return Err(NumeralError::Empty);
    }
    for t in &tokens {
        if !is_number_word(t) && t != "and" && t != "a" {
            return Err(NumeralError::UnknownWord(t.clone()));
        }
    }
    if tokens.len() == 1 && tokens[0] == "zero" {
        return Ok(0);
    }

    let mut cur = Cursor { tokens: &tokens, pos: 0 };
    let mut total = 0u128;
    let mut last_power = u32::MAX;
    loop {
        let group = parse_group(&mut cur)?
            .ok_or_else(|| NumeralError::IllFormed(format!("unexpected {:?}", cur.peek().unwrap_or(""))))?;
        match cur.peek().and_then(scale_power) {
            Some(power) => {
                if power >= last_power {
                    return Err(NumeralError::IllFormed("scale words out of order".into()));
                }
                total += group * 10u128.pow(power);
                last_power = power;
                cur.pos += 1;
                if cur.peek().is_none() {
                    return Ok(total);
                }
                cur.skip_and();
            }
            None => {
                if let Some(extra) = cur.peek() {
                    return Err(NumeralError::IllFormed(format!("unexpected {extra:?}")));
                }
                return Ok(total + group);
            }
        }
    }
}

/// Maximal runs of number words in running text.
pub(super) fn find_spans(sentence: &str) -> Vec<WordSpan> {
    // words: letters with inner hyphens
    let mut words: Vec<(usize, usize, String)> = Vec::new();
    let chars: Vec<(usize, char)> = sentence.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        if !chars[i].1.is_alphabetic() {
            i += 1;
            continue;
        }
        let start = chars[i].0;
        let mut j = i;
        while j < chars.len()
            && (chars[j].1.is_alphabetic()
                || (chars[j].1 == '-' && chars.get(j + 1).is_some_and(|c| c.1.is_alphabetic())))
        {
            j += 1;
        }
        let end = chars.get(j).map_or(sentence.len(), |c| c.0);
        words.push((start, end, sentence[start..end].to_lowercase()));
        i = j;
    }

    let is_numeric = |w: &str| w.split('-').all(is_number_word);
    let mut spans = Vec::new();
    let mut k = 0;
    while k < words.len() {
        let starts_run = is_numeric(&words[k].2)
            || (words[k].2 == "a"
                && words
                    .get(k + 1)
                    .is_some_and(|w| w.2 == "hundred" || scale_power(&w.2).is_some()));
        if !starts_run {
            k += 1;
            continue;
        }
        let mut end = k;
        let mut m = k + 1;
        while m < words.len() {
            // only whitespace may separate words inside a run
            let gap = &sentence[words[m - 1].1..words[m].0];
            if !gap.chars().all(char::is_whitespace) {
                break;
            }
            if is_numeric(&words[m].2) {
                end = m;
                m += 1;
            } else if words[m].2 == "and" && words.get(m + 1).is_some_and(|w| is_numeric(&w.2)) {
                m += 1;
            } else {
                break;
            }
        }
        let (start, stop) = (words[k].0, words[end].1);
        spans.push(WordSpan {
            start,
            end: stop,
            text: sentence[start..stop].to_string(),
        });
        k = end + 1;
    }
    spans
}
