//! Locale conventions for digit-form numbers: decimal and grouping
//! separators, group sizes and digit scripts.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric::CanonicalNumber;

const ASCII_DIGITS: [char; 10] = ['0', '1', '2', '3', '4', '5', '6', '7', '8', '9'];
pub const DEVANAGARI_DIGITS: [char; 10] = ['०', '१', '२', '३', '४', '५', '६', '७', '८', '९'];
pub const TAMIL_DIGITS: [char; 10] = ['௦', '௧', '௨', '௩', '௪', '௫', '௬', '௭', '௮', '௯'];

/// Digit scripts recognised anywhere in text, whatever the locale.
const KNOWN_SCRIPTS: [&[char; 10]; 3] = [&ASCII_DIGITS, &DEVANAGARI_DIGITS, &TAMIL_DIGITS];

/// Classification tag attached to localized parse failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParseErrorKind {
    Empty,
    InvalidCharacter,
    ForeignScript,
    MixedScripts,
    InvalidGrouping,
    MultipleDecimalSeparators,
    MisplacedSeparator,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {text:?} under locale {locale}: {kind:?}")]
pub struct LocalizedParseError {
    pub kind: ParseErrorKind,
    pub text: String,
    pub locale: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocaleError {
    #[error("locale {0}: decimal and group separators must differ")]
    SameSeparators(String),
    #[error("locale {0}: digit script must list ten distinct characters")]
    BadDigitScript(String),
    #[error("locale {0}: grouping must be a non-empty list of positive sizes")]
    BadGrouping(String),
}

/// Separator and digit conventions of one language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocaleSpec {
    pub language_tag: String,
    pub decimal_sep: char,
    pub group_sep: char,
    /// Group sizes from the right; the last entry repeats.
    pub grouping: Vec<usize>,
    pub digit_script: [char; 10],
}

/// Serializable form of a locale, as written in config files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocaleConfig {
    pub tag: String,
    pub decimal_sep: char,
    pub group_sep: char,
    #[serde(default = "western_grouping")]
    pub grouping: Vec<usize>,
    /// Ten codepoints for 0 through 9; ASCII digits when absent.
    #[serde(default)]
    pub digits: Option<String>,
}

fn western_grouping() -> Vec<usize> {
    vec![3]
}

impl LocaleSpec {
    fn western(tag: &str, decimal_sep: char, group_sep: char, digit_script: [char; 10]) -> Self {
        LocaleSpec {
            language_tag: tag.to_string(),
            decimal_sep,
            group_sep,
            grouping: western_grouping(),
            digit_script,
        }
    }

    pub fn en() -> Self {
        Self::western("en", '.', ',', ASCII_DIGITS)
    }

    pub fn de() -> Self {
        Self::western("de", ',', '.', ASCII_DIGITS)
    }

    pub fn zh() -> Self {
        Self::western("zh", '.', ',', ASCII_DIGITS)
    }

    pub fn ne() -> Self {
        Self::western("ne", '.', ',', DEVANAGARI_DIGITS)
    }

    pub fn ta() -> Self {
        Self::western("ta", '.', ',', TAMIL_DIGITS)
    }

    /// Built-in locale for a tag.
    pub fn builtin(tag: &str) -> Option<Self> {
        match tag {
            "en" => Some(Self::en()),
            "de" => Some(Self::de()),
            "zh" => Some(Self::zh()),
            "ne" => Some(Self::ne()),
            "ta" => Some(Self::ta()),
            _ => None,
        }
    }

    /// The same locale with South Asian lakh/crore grouping (3, then 2s).
    pub fn with_lakh_grouping(mut self) -> Self {
        self.grouping = vec![3, 2];
        self
    }

    pub fn from_config(config: &LocaleConfig) -> Result<Self, LocaleError> {
        let tag = config.tag.clone();
        if config.decimal_sep == config.group_sep {
            return Err(LocaleError::SameSeparators(tag));
        }
        if config.grouping.is_empty() || config.grouping.contains(&0) {
            return Err(LocaleError::BadGrouping(tag));
        }
        let digit_script = match &config.digits {
            None => ASCII_DIGITS,
            Some(s) => {
                let chars: Vec<char> = s.chars().collect();
                let mut distinct = chars.clone();
                distinct.sort_unstable();
                distinct.dedup();
                if chars.len() != 10 || distinct.len() != 10 {
                    return Err(LocaleError::BadDigitScript(tag));
                }
                let mut script = ['0'; 10];
                script.copy_from_slice(&chars);
                script
            }
        };
        if digit_script.contains(&config.decimal_sep) || digit_script.contains(&config.group_sep) {
            return Err(LocaleError::BadDigitScript(tag));
        }
        Ok(LocaleSpec {
            language_tag: tag,
            decimal_sep: config.decimal_sep,
            group_sep: config.group_sep,
            grouping: config.grouping.clone(),
            digit_script,
        })
    }

    pub fn has_local_digits(&self) -> bool {
        self.digit_script != ASCII_DIGITS
    }

    fn local_digit_value(&self, c: char) -> Option<u8> {
        self.digit_script.iter().position(|&d| d == c).map(|p| p as u8)
    }

    fn is_separator(&self, c: char) -> bool {
        c == self.decimal_sep || c == self.group_sep
    }

    fn error(&self, kind: ParseErrorKind, text: &str) -> LocalizedParseError {
        LocalizedParseError {
            kind,
            text: text.to_string(),
            locale: self.language_tag.clone(),
        }
    }

    fn group_size(&self, index_from_right: usize) -> usize {
        *self
            .grouping
            .get(index_from_right)
            .unwrap_or_else(|| self.grouping.last().expect("grouping is non-empty"))
    }
}

/// Value of `c` as a digit in any script we recognise.
pub fn known_digit_value(c: char) -> Option<u8> {
    KNOWN_SCRIPTS
        .iter()
        .find_map(|script| script.iter().position(|&d| d == c))
        .map(|p| p as u8)
}

fn is_digit_in(c: char, locale: &LocaleSpec) -> bool {
    known_digit_value(c).is_some() || locale.local_digit_value(c).is_some()
}

/// Renders a value with the locale's separators.
pub fn render_grouped(
    value: &CanonicalNumber,
    locale: &LocaleSpec,
    use_grouping: bool,
    use_local_digits: bool,
) -> String {
    render_with_min_scale(value, locale, use_grouping, use_local_digits, 0)
}

/// Like [`render_grouped`] but pads the fraction with zeros to at least
/// `min_scale` digits, so `5.7` can be written as `5.70`.
pub fn render_with_min_scale(
    value: &CanonicalNumber,
    locale: &LocaleSpec,
    use_grouping: bool,
    use_local_digits: bool,
    min_scale: usize,
) -> String {
    let integer = value.integer_part();
    let mut fraction = value.fraction_part();
    while fraction.len() < min_scale {
        fraction.push('0');
    }

    let mut groups: Vec<&str> = Vec::new();
    if use_grouping {
        let mut end = integer.len();
        let mut index = 0;
        while end > 0 {
            let size = locale.group_size(index);
            let start = end.saturating_sub(size);
            groups.push(&integer[start..end]);
            end = start;
            index += 1;
        }
        groups.reverse();
    } else {
        groups.push(&integer);
    }

    let mut out = groups.join(&locale.group_sep.to_string());
    if !fraction.is_empty() {
        out.push(locale.decimal_sep);
        out.push_str(&fraction);
    }
    if use_local_digits {
        out = out
            .chars()
            .map(|c| match c.to_digit(10) {
                Some(d) if c.is_ascii_digit() => locale.digit_script[d as usize],
                _ => c,
            })
            .collect();
    }
    out
}

/// Parses a single number token written under `locale`.
///
/// Grouping is validated strictly: when group separators are present every
/// group must have the width the locale prescribes.
pub fn parse_localized(text: &str, locale: &LocaleSpec) -> Result<CanonicalNumber, LocalizedParseError> {
    if text.is_empty() {
        return Err(locale.error(ParseErrorKind::Empty, text));
    }

    let mut saw_ascii = false;
    let mut saw_local = false;
    let mut integer_groups: Vec<String> = vec![String::new()];
    let mut fraction: Option<String> = None;

    let chars: Vec<char> = text.chars().collect();
    for (i, &c) in chars.iter().enumerate() {
        let digit = if c.is_ascii_digit() {
            saw_ascii = true;
            Some(c as u8 - b'0')
        } else if let Some(d) = locale.local_digit_value(c) {
            saw_local = true;
            Some(d)
        } else if known_digit_value(c).is_some() {
            return Err(locale.error(ParseErrorKind::ForeignScript, text));
        } else {
            None
        };

        if let Some(d) = digit {
            let ch = (b'0' + d) as char;
            match fraction.as_mut() {
                Some(f) => f.push(ch),
                None => integer_groups.last_mut().expect("non-empty").push(ch),
            }
            continue;
        }

        if !locale.is_separator(c) {
            return Err(locale.error(ParseErrorKind::InvalidCharacter, text));
        }
        let next_is_digit = chars.get(i + 1).is_some_and(|&n| is_digit_in(n, locale));
        let prev_is_digit = i > 0 && is_digit_in(chars[i - 1], locale);
        if !next_is_digit || !prev_is_digit {
            return Err(locale.error(ParseErrorKind::MisplacedSeparator, text));
        }
        if c == locale.decimal_sep {
            if fraction.is_some() {
                return Err(locale.error(ParseErrorKind::MultipleDecimalSeparators, text));
            }
            fraction = Some(String::new());
        } else if fraction.is_some() {
            // group separator inside the fraction
            return Err(locale.error(ParseErrorKind::InvalidGrouping, text));
        } else {
            integer_groups.push(String::new());
        }
    }

    if saw_ascii && saw_local {
        return Err(locale.error(ParseErrorKind::MixedScripts, text));
    }

    if integer_groups.len() > 1 {
        let last = integer_groups.len() - 1;
        for (from_right, group) in integer_groups.iter().rev().enumerate() {
            let size = locale.group_size(from_right);
            let ok = if from_right == last {
                (1..=size).contains(&group.len())
            } else {
                group.len() == size
            };
            if !ok {
                return Err(locale.error(ParseErrorKind::InvalidGrouping, text));
            }
        }
    }

    let mut plain: String = integer_groups.concat();
    if let Some(f) = fraction {
        plain.push('.');
        plain.push_str(&f);
    }
    CanonicalNumber::from_plain_string(&plain).map_err(|_| locale.error(ParseErrorKind::InvalidCharacter, text))
}

/// A digit-bearing token found in running text. `start..end` is a byte range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumberToken {
    pub start: usize,
    pub end: usize,
    pub text: String,
}

/// Extracts maximal runs of digits (any known script) joined by separators.
///
/// A separator is only absorbed when a digit follows it, so sentence
/// punctuation such as `"28, 2020"` or a final period stays outside tokens.
pub fn scan_number_tokens(sentence: &str, locale: &LocaleSpec) -> Vec<NumberToken> {
    let chars: Vec<(usize, char)> = sentence.char_indices().collect();
    let is_sep = |c: char| c == ',' || c == '.' || locale.is_separator(c);
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if !is_digit_in(chars[i].1, locale) {
            i += 1;
            continue;
        }
        let start = chars[i].0;
        let mut j = i + 1;
        while j < chars.len() {
            let c = chars[j].1;
            if is_digit_in(c, locale) {
                j += 1;
            } else if is_sep(c) && chars.get(j + 1).is_some_and(|&(_, n)| is_digit_in(n, locale)) {
                j += 2;
            } else {
                break;
            }
        }
        let end = chars.get(j).map_or(sentence.len(), |&(b, _)| b);
        tokens.push(NumberToken {
            start,
            end,
            text: sentence[start..end].to_string(),
        });
        i = j;
    }
    tokens
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn num(s: &str) -> CanonicalNumber {
        CanonicalNumber::from_plain_string(s).unwrap()
    }

    fn builtins() -> Vec<LocaleSpec> {
        ["en", "de", "zh", "ne", "ta"]
            .iter()
            .map(|t| LocaleSpec::builtin(t).unwrap())
            .collect()
    }

    #[test]
    fn renders_grouped_numbers() {
        let v = num("123456.12");
        assert_eq!(render_grouped(&v, &LocaleSpec::en(), true, false), "123,456.12");
        assert_eq!(render_grouped(&v, &LocaleSpec::de(), true, false), "123.456,12");
        assert_eq!(render_grouped(&v, &LocaleSpec::de(), false, false), "123456,12");
        assert_eq!(render_grouped(&num("1234567"), &LocaleSpec::en(), true, false), "1,234,567");
        assert_eq!(render_grouped(&num("123"), &LocaleSpec::en(), true, false), "123");
        assert_eq!(render_with_min_scale(&num("5.7"), &LocaleSpec::de(), false, false, 2), "5,70");
    }

    #[test]
    fn renders_local_digits() {
        // position-by-position Devanagari table: 9→९, 1→१, 4→४
        assert_eq!(render_grouped(&num("914"), &LocaleSpec::ne(), false, true), "\u{096F}\u{0967}\u{096A}");
        assert_eq!(render_grouped(&num("914"), &LocaleSpec::ne(), false, true), "९१४");
        assert_eq!(render_grouped(&num("1234.5"), &LocaleSpec::ta(), true, true), "௧,௨௩௪.௫");
        assert_eq!(render_grouped(&num("914"), &LocaleSpec::en(), false, true), "914");
    }

    #[test]
    fn lakh_grouping() {
        let ne = LocaleSpec::ne().with_lakh_grouping();
        assert_eq!(render_grouped(&num("1234567"), &ne, true, false), "12,34,567");
        assert_eq!(parse_localized("12,34,567", &ne).unwrap(), num("1234567"));
        assert_eq!(
            parse_localized("1,234,567", &ne).unwrap_err().kind,
            ParseErrorKind::InvalidGrouping
        );
    }

    #[test]
    fn parses_localized_numbers() {
        assert_eq!(parse_localized("123.456,12", &LocaleSpec::de()).unwrap(), num("123456.12"));
        for locale in builtins() {
            assert_eq!(parse_localized("7", &locale).unwrap(), num("7"));
        }
        assert_eq!(parse_localized("९१४", &LocaleSpec::ne()).unwrap(), num("914"));
        assert_eq!(parse_localized("914", &LocaleSpec::ne()).unwrap(), num("914"));
        assert_eq!(parse_localized("1,230", &LocaleSpec::en()).unwrap(), num("1230"));
        assert_eq!(parse_localized("5,70", &LocaleSpec::de()).unwrap(), num("5.7"));
    }

    #[test]
    fn rejects_malformed_tokens() {
        let kind = |t: &str, l: &LocaleSpec| parse_localized(t, l).unwrap_err().kind;
        // de reads ',' as the decimal mark, then finds a group separator in the fraction
        assert_eq!(kind("123,456.12", &LocaleSpec::de()), ParseErrorKind::InvalidGrouping);
        assert_eq!(kind("12,34", &LocaleSpec::en()), ParseErrorKind::InvalidGrouping);
        assert_eq!(kind("1,23,456", &LocaleSpec::en()), ParseErrorKind::InvalidGrouping);
        assert_eq!(kind("1.2.3", &LocaleSpec::zh()), ParseErrorKind::MultipleDecimalSeparators);
        assert_eq!(kind("1,5,3", &LocaleSpec::de()), ParseErrorKind::MultipleDecimalSeparators);
        assert_eq!(kind("९1४", &LocaleSpec::ne()), ParseErrorKind::MixedScripts);
        assert_eq!(kind("९१४", &LocaleSpec::en()), ParseErrorKind::ForeignScript);
        assert_eq!(kind("12a", &LocaleSpec::en()), ParseErrorKind::InvalidCharacter);
        assert_eq!(kind(",12", &LocaleSpec::en()), ParseErrorKind::MisplacedSeparator);
        assert_eq!(kind("", &LocaleSpec::en()), ParseErrorKind::Empty);
    }

    #[test]
    fn custom_locales_are_validated() {
        let mut config = LocaleConfig {
            tag: "fr".into(),
            decimal_sep: ',',
            group_sep: '\u{202F}',
            grouping: vec![3],
            digits: None,
        };
        let fr = LocaleSpec::from_config(&config).unwrap();
        assert_eq!(render_grouped(&num("1234.5"), &fr, true, false), "1\u{202F}234,5");
        config.group_sep = ',';
        assert_eq!(LocaleSpec::from_config(&config), Err(LocaleError::SameSeparators("fr".into())));
        config.group_sep = '.';
        config.digits = Some("0123456788".into());
        assert!(matches!(LocaleSpec::from_config(&config), Err(LocaleError::BadDigitScript(_))));
    }

    #[test]
    fn scans_tokens() {
        let sentence = "There were 914 confirmed cases of COVID-19";
        let texts: Vec<String> = scan_number_tokens(sentence, &LocaleSpec::en())
            .into_iter()
            .map(|t| t.text)
            .collect();
        assert_eq!(texts, vec!["914", "19"]);
        assert!(scan_number_tokens("", &LocaleSpec::en()).is_empty());
        let tokens = scan_number_tokens("123.456,12 und 7", &LocaleSpec::de());
        assert_eq!(
            tokens,
            vec![
                NumberToken { start: 0, end: 10, text: "123.456,12".into() },
                NumberToken { start: 15, end: 16, text: "7".into() },
            ]
        );
        let texts: Vec<String> = scan_number_tokens("As of March 28, 2020, total 5.", &LocaleSpec::en())
            .into_iter()
            .map(|t| t.text)
            .collect();
        assert_eq!(texts, vec!["28", "2020", "5"]);
        let tokens = scan_number_tokens("कुल १२,३४५ जना", &LocaleSpec::ne());
        assert_eq!(tokens[0].text, "१२,३४५");
    }

    fn value_strategy() -> impl Strategy<Value = CanonicalNumber> {
        ("[1-9][0-9]{0,11}|0", proptest::option::of("[0-9]{0,3}[1-9]")).prop_map(|(i, f)| match f {
            Some(f) => num(&format!("{i}.{f}")),
            None => num(&i),
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn render_parse_round_trip(v in value_strategy(), g: bool, s: bool, idx in 0usize..5) {
            let locale = &builtins()[idx];
            let text = render_grouped(&v, locale, g, s);
            prop_assert_eq!(parse_localized(&text, locale).unwrap(), v);
        }

        #[test]
        fn en_rendering_never_passes_as_de(i in "[1-9][0-9]{3,11}", f in "[0-9]{0,3}[1-9]") {
            let v = num(&format!("{i}.{f}"));
            let en = render_grouped(&v, &LocaleSpec::en(), true, false);
            if let Ok(parsed) = parse_localized(&en, &LocaleSpec::de()) {
                prop_assert_ne!(parsed, v);
            }
        }

        #[test]
        fn scanned_spans_cover_all_digits(words in proptest::collection::vec("[a-z]{1,5}|[0-9]{1,4}|[0-9]{1,3}[,.][0-9]{1,3}|[,.] ?|९[१२]", 0..12)) {
            let sentence = words.join(" ");
            let locale = LocaleSpec::ne();
            let tokens = scan_number_tokens(&sentence, &locale);
            let mut last_end = 0;
            for t in &tokens {
                prop_assert!(t.start >= last_end && t.start < t.end);
                last_end = t.end;
            }
            for (b, c) in sentence.char_indices() {
                if known_digit_value(c).is_some() {
                    prop_assert!(tokens.iter().any(|t| t.start <= b && b < t.end));
                }
            }
        }
    }
}
