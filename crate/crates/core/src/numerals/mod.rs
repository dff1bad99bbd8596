//! Word-form and hybrid numbers.
//!
//! [`NumeralSystem`] renders and parses fully spelled cardinals for English,
//! German and Chinese (standard and financial glyphs). [`ScaleLexicon`]
//! covers digit + scale word hybrids such as `"10.01 million"`, `"1001万"`
//! or `"१०.०१ लाख"` for every built-in language.

mod de;
mod en;
mod zh;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::locale::{parse_localized, render_grouped, LocaleSpec, LocalizedParseError};
use crate::numeric::CanonicalNumber;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumeralError {
    #[error("empty numeral")]
    Empty,
    #[error("word numerals need an integer, got {0}")]
    NotInteger(CanonicalNumber),
    #[error("{value} is beyond the range of {system} numerals")]
    OutOfRange { value: CanonicalNumber, system: String },
    #[error("unknown numeral word {0:?}")]
    UnknownWord(String),
    #[error("ill-formed numeral: {0}")]
    IllFormed(String),
    #[error("scale word without a digit part in {0:?}")]
    DanglingScale(String),
    #[error("unknown scale word in {0:?}")]
    UnknownScale(String),
    #[error(transparent)]
    DigitPart(#[from] LocalizedParseError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompositionRule {
    AdditiveMultiplicativeEn,
    CompoundDe,
    PositionalZh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Standard,
    Financial,
}

/// A run of numeral words found in a sentence (byte range).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordSpan {
    pub start: usize,
    pub end: usize,
    pub text: String,
}

/// Cardinal number words of one language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumeralSystem {
    pub language_tag: String,
    pub rule: CompositionRule,
    pub variant: Variant,
    /// Extra whole-phrase aliases loaded from an override file.
    aliases: BTreeMap<String, u128>,
}

/// One entry of a lexicon override file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexiconEntry {
    pub word: String,
    pub value: String,
    pub kind: LexiconKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LexiconKind {
    /// A word standing for a whole number ("dozen" = 12).
    Atom,
    /// A hybrid scale word; `value` is its power of ten.
    Scale,
}

impl NumeralSystem {
    fn new(tag: &str, rule: CompositionRule, variant: Variant) -> Self {
        NumeralSystem {
            language_tag: tag.to_string(),
            rule,
            variant,
            aliases: BTreeMap::new(),
        }
    }

    pub fn en() -> Self {
        Self::new("en", CompositionRule::AdditiveMultiplicativeEn, Variant::Standard)
    }

    pub fn de() -> Self {
        Self::new("de", CompositionRule::CompoundDe, Variant::Standard)
    }

    pub fn zh() -> Self {
        Self::new("zh", CompositionRule::PositionalZh, Variant::Standard)
    }

    pub fn zh_financial() -> Self {
        Self::new("zh", CompositionRule::PositionalZh, Variant::Financial)
    }

    pub fn builtin(tag: &str) -> Option<Self> {
        match tag {
            "en" => Some(Self::en()),
            "de" => Some(Self::de()),
            "zh" => Some(Self::zh()),
            _ => None,
        }
    }

    /// Largest value `render_words` accepts.
    pub fn max_value(&self) -> u128 {
        match self.rule {
            CompositionRule::AdditiveMultiplicativeEn => en::MAX,
            CompositionRule::CompoundDe => de::MAX,
            CompositionRule::PositionalZh => zh::MAX,
        }
    }

    pub fn add_alias(&mut self, word: &str, value: u128) {
        self.aliases.insert(word.to_lowercase(), value);
    }

    pub fn render_words(&self, value: &CanonicalNumber) -> Result<String, NumeralError> {
        if !value.is_integer() {
            return Err(NumeralError::NotInteger(value.clone()));
        }
        let n = value
            .to_u128()
            .filter(|&n| n <= self.max_value())
            .ok_or_else(|| NumeralError::OutOfRange {
                value: value.clone(),
                system: self.language_tag.clone(),
            })?;
        Ok(match self.rule {
            CompositionRule::AdditiveMultiplicativeEn => en::render(n),
            CompositionRule::CompoundDe => de::render(n),
            CompositionRule::PositionalZh => zh::render(n, self.variant),
        })
    }

    /// Parses a numeral phrase. The Chinese parser accepts standard and
    /// financial glyphs regardless of `variant`.
    pub fn parse_words(&self, text: &str) -> Result<CanonicalNumber, NumeralError> {
        if let Some(&v) = self.aliases.get(&text.trim().to_lowercase()) {
            return Ok(CanonicalNumber::from_u128(v));
        }
        let n = match self.rule {
            CompositionRule::AdditiveMultiplicativeEn => en::parse(text)?,
            CompositionRule::CompoundDe => de::parse(text)?,
            CompositionRule::PositionalZh => zh::parse(text)?,
        };
        Ok(CanonicalNumber::from_u128(n))
    }

    /// Runs of numeral words in a sentence, for candidate extraction.
    pub fn find_word_spans(&self, sentence: &str) -> Vec<WordSpan> {
        let mut spans = match self.rule {
            CompositionRule::AdditiveMultiplicativeEn => en::find_spans(sentence),
            CompositionRule::CompoundDe => de::find_spans(sentence),
            CompositionRule::PositionalZh => zh::find_spans(sentence),
        };
        if !self.aliases.is_empty() {
            let lower = sentence.to_lowercase();
            if lower.len() == sentence.len() {
                for word in self.aliases.keys() {
                    for (start, _) in lower.match_indices(word.as_str()) {
                        let end = start + word.len();
                        if spans.iter().all(|s| end <= s.start || start >= s.end) {
                            spans.push(WordSpan {
                                start,
                                end,
                                text: sentence[start..end].to_string(),
                            });
                        }
                    }
                }
                spans.sort_by_key(|s| s.start);
            }
        }
        spans
    }
}

/// How a scale word may be used when rendering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScaleUsage {
    Render,
    /// Used when the digit part is exactly one ("eine Million").
    RenderSingular,
    /// Used when the digit part is not one ("2,5 Millionen").
    RenderPlural,
    ParseOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaleWord {
    pub word: String,
    pub power: u32,
    pub usage: ScaleUsage,
}

/// Scale words that may follow a digit part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaleLexicon {
    pub language_tag: String,
    /// Whether a space separates digits and scale word when rendering.
    pub spaced: bool,
    words: Vec<ScaleWord>,
}

impl ScaleLexicon {
    fn from_table(tag: &str, spaced: bool, table: &[(&str, u32, ScaleUsage)]) -> Self {
        let mut lexicon = ScaleLexicon {
            language_tag: tag.to_string(),
            spaced,
            words: Vec::new(),
        };
        for &(word, power, usage) in table {
            lexicon.add(word, power, usage);
        }
        lexicon
    }

    pub fn add(&mut self, word: &str, power: u32, usage: ScaleUsage) {
        self.words.push(ScaleWord {
            word: word.to_string(),
            power,
            usage,
        });
        // longest match first
        self.words.sort_by_key(|e| std::cmp::Reverse(e.word.chars().count()));
    }

    pub fn en() -> Self {
        use ScaleUsage::*;
        Self::from_table(
            "en",
            true,
            &[
                ("hundred", 2, Render),
                ("thousand", 3, Render),
                ("million", 6, Render),
                ("billion", 9, Render),
                ("trillion", 12, Render),
                ("quadrillion", 15, ParseOnly),
            ],
        )
    }

    pub fn de() -> Self {
        use ScaleUsage::*;
        Self::from_table(
            "de",
            true,
            &[
                ("Hundert", 2, Render),
                ("Tausend", 3, Render),
                ("Million", 6, RenderSingular),
                ("Millionen", 6, RenderPlural),
                ("Mio.", 6, ParseOnly),
                ("Mio", 6, ParseOnly),
                ("Milliarde", 9, RenderSingular),
                ("Milliarden", 9, RenderPlural),
                ("Mrd.", 9, ParseOnly),
                ("Mrd", 9, ParseOnly),
                ("Billion", 12, RenderSingular),
                ("Billionen", 12, RenderPlural),
            ],
        )
    }

    pub fn zh() -> Self {
        use ScaleUsage::*;
        Self::from_table(
            "zh",
            false,
            &[
                ("十", 1, ParseOnly),
                ("百", 2, ParseOnly),
                ("千", 3, ParseOnly),
                ("万", 4, Render),
                ("亿", 8, Render),
                ("拾", 1, ParseOnly),
                ("佰", 2, ParseOnly),
                ("仟", 3, ParseOnly),
                ("萬", 4, ParseOnly),
                ("億", 8, ParseOnly),
            ],
        )
    }

    pub fn ne() -> Self {
        use ScaleUsage::*;
        Self::from_table(
            "ne",
            true,
            &[
                ("सय", 2, ParseOnly),
                ("हजार", 3, Render),
                ("लाख", 5, Render),
                ("करोड", 7, Render),
                ("करोड़", 7, ParseOnly),
                ("अर्ब", 9, Render),
                ("खर्ब", 11, Render),
            ],
        )
    }

    pub fn ta() -> Self {
        use ScaleUsage::*;
        Self::from_table(
            "ta",
            true,
            &[
                ("நூறு", 2, ParseOnly),
                ("ஆயிரம்", 3, Render),
                ("லட்சம்", 5, Render),
                ("கோடி", 7, Render),
            ],
        )
    }

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

    pub fn empty(tag: &str) -> Self {
        ScaleLexicon {
            language_tag: tag.to_string(),
            spaced: true,
            words: Vec::new(),
        }
    }

    pub fn words(&self) -> &[ScaleWord] {
        &self.words
    }

    /// Matches one scale word at the start of `text`; returns (power, byte length).
    fn match_prefix(&self, text: &str) -> Option<(u32, usize)> {
        self.words.iter().find_map(|entry| {
            let len = entry.word.len();
            let head = text.get(..len)?;
            let same = if entry.word.is_ascii() {
                head.eq_ignore_ascii_case(&entry.word)
            } else {
                head == entry.word
            };
            // spaced scripts need a word boundary after the scale word; an
            // unspaced script such as Han may follow directly
            let runs_on = text[len..]
                .chars()
                .next()
                .is_some_and(|c| c.is_alphanumeric() && !is_han(c));
            (same && !(self.spaced && runs_on)).then_some((entry.power, len))
        })
    }

    /// Matches a run of scale words (optionally space separated) at the
    /// start of `text`, multiplying their powers: "hundred thousand",
    /// "百万". Returns (power, byte length consumed).
    pub fn match_scale_run(&self, text: &str) -> Option<(u32, usize)> {
        let mut total_power = 0;
        let mut consumed = 0;
        let mut matched = false;
        loop {
            let rest = &text[consumed..];
            let gap = rest.len() - rest.trim_start().len();
            match self.match_prefix(&rest[gap..]) {
                Some((power, len)) => {
                    total_power += power;
                    consumed += gap + len;
                    matched = true;
                }
                None => break,
            }
        }
        matched.then_some((total_power, consumed))
    }

    /// The renderable scale word with the largest power not above
    /// `max_power`, in the form suited to `digit_part`.
    fn pick(&self, max_power: u32, digit_part_is_one: bool) -> Option<&ScaleWord> {
        let wanted = |w: &&ScaleWord| match w.usage {
            ScaleUsage::Render => true,
            ScaleUsage::RenderSingular => digit_part_is_one,
            ScaleUsage::RenderPlural => !digit_part_is_one,
            ScaleUsage::ParseOnly => false,
        };
        self.words
            .iter()
            .filter(wanted)
            .filter(|w| w.power <= max_power)
            .max_by_key(|w| w.power)
    }

    /// The renderable word for exactly `power`.
    pub fn word_for(&self, power: u32, digit_part_is_one: bool) -> Option<&str> {
        self.pick(power, digit_part_is_one)
            .filter(|w| w.power == power)
            .map(|w| w.word.as_str())
    }

    /// Attaches a scale word to an already rendered digit part.
    pub fn join(&self, digits: &str, word: &str) -> String {
        if self.spaced {
            format!("{digits} {word}")
        } else {
            format!("{digits}{word}")
        }
    }

    /// Renderable powers in ascending order.
    pub fn render_powers(&self) -> Vec<u32> {
        let mut powers: Vec<u32> = self
            .words
            .iter()
            .filter(|w| w.usage != ScaleUsage::ParseOnly)
            .map(|w| w.power)
            .collect();
        powers.sort_unstable();
        powers.dedup();
        powers
    }
}

fn is_han(c: char) -> bool {
    matches!(c, '\u{3400}'..='\u{4DBF}' | '\u{4E00}'..='\u{9FFF}')
}

/// Parses digits optionally followed by scale words: `"10.01 million"`,
/// `"1001万"`, `"7"`.
pub fn parse_hybrid(text: &str, locale: &LocaleSpec, scales: &ScaleLexicon) -> Result<CanonicalNumber, NumeralError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(NumeralError::Empty);
    }
    let digit_end = text
        .char_indices()
        .find(|&(i, c)| {
            let is_num = crate::locale::known_digit_value(c).is_some()
                || locale.digit_script.contains(&c)
                || ((c == locale.decimal_sep || c == locale.group_sep || c == ',' || c == '.')
                    && text[i + c.len_utf8()..].chars().next().is_some_and(|n| {
                        crate::locale::known_digit_value(n).is_some() || locale.digit_script.contains(&n)
                    }));
            !is_num
        })
        .map_or(text.len(), |(i, _)| i);
    if digit_end == 0 {
        return Err(NumeralError::DanglingScale(text.to_string()));
    }
    let digits = parse_localized(&text[..digit_end], locale)?;
    let rest = &text[digit_end..];
    if rest.trim().is_empty() {
        return Ok(digits);
    }
    match scales.match_scale_run(rest) {
        Some((power, len)) if rest[len..].trim().is_empty() => Ok(digits.scale_by_power_of_ten(power as i32)),
        _ => Err(NumeralError::UnknownScale(text.to_string())),
    }
}

/// Renders `value` as digits plus the scale word with the largest power not
/// above `max_power`. `None` if the lexicon has no such word.
pub fn render_hybrid(
    value: &CanonicalNumber,
    max_power: u32,
    locale: &LocaleSpec,
    scales: &ScaleLexicon,
    use_local_digits: bool,
) -> Option<String> {
    let power = scales.render_powers().into_iter().filter(|&p| p <= max_power).max()?;
    let digit_part = value.scale_by_power_of_ten(-(power as i32));
    let word = scales.pick(power, digit_part == CanonicalNumber::from_u64(1))?;
    Some(scales.join(&render_grouped(&digit_part, locale, false, use_local_digits), &word.word))
}

/// Renders with an explicit scale word power (used to fabricate unit errors).
pub fn render_hybrid_with_power(
    digit_part: &CanonicalNumber,
    power: u32,
    locale: &LocaleSpec,
    scales: &ScaleLexicon,
    use_local_digits: bool,
) -> Option<String> {
    let word = scales.word_for(power, *digit_part == CanonicalNumber::from_u64(1))?;
    Some(scales.join(&render_grouped(digit_part, locale, false, use_local_digits), word))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn num(s: &str) -> CanonicalNumber {
        CanonicalNumber::from_plain_string(s).unwrap()
    }

    #[test]
    fn render_words_contract() {
        assert_eq!(NumeralSystem::en().render_words(&num("52")).unwrap(), "fifty-two");
        assert_eq!(NumeralSystem::zh().render_words(&num("0")).unwrap(), "零");
        assert_eq!(NumeralSystem::zh().render_words(&num("10010000")).unwrap(), "一千零一万");
        assert_eq!(NumeralSystem::de().render_words(&num("23")).unwrap(), "dreiundzwanzig");
        assert!(matches!(
            NumeralSystem::en().render_words(&num("1.5")),
            Err(NumeralError::NotInteger(_))
        ));
        assert!(matches!(
            NumeralSystem::zh().render_words(&num("1000000000001")),
            Err(NumeralError::OutOfRange { .. })
        ));
        assert!(NumeralSystem::en().render_words(&num("1000000000000000")).is_ok());
    }

    #[test]
    fn parse_words_contract() {
        assert_eq!(NumeralSystem::en().parse_words("five").unwrap(), num("5"));
        assert_eq!(NumeralSystem::zh().parse_words("零").unwrap(), num("0"));
        // 陆(6) × 拾(10); the standard renderer agrees
        let sixty = NumeralSystem::zh_financial().parse_words("陆拾").unwrap();
        assert_eq!(sixty, num("60"));
        assert_eq!(NumeralSystem::zh().parse_words(&NumeralSystem::zh().render_words(&sixty).unwrap()).unwrap(), sixty);
        assert_eq!(NumeralSystem::zh().parse_words("陆拾").unwrap(), num("60"));
    }

    #[test]
    fn aliases_extend_the_lexicon() {
        let mut en = NumeralSystem::en();
        en.add_alias("a dozen", 12);
        assert_eq!(en.parse_words("A dozen").unwrap(), num("12"));
        let spans = en.find_word_spans("about a dozen eggs and two");
        let texts: Vec<&str> = spans.iter().map(|s| s.text.as_str()).collect();
        assert_eq!(texts, vec!["a dozen", "two"]);
    }

    #[test]
    fn parses_hybrids() {
        let en = (LocaleSpec::en(), ScaleLexicon::en());
        let zh = (LocaleSpec::zh(), ScaleLexicon::zh());
        assert_eq!(parse_hybrid("10.01 million", &en.0, &en.1).unwrap(), num("10010000"));
        assert_eq!(parse_hybrid("7", &en.0, &en.1).unwrap(), num("7"));
        assert_eq!(parse_hybrid("1001万", &zh.0, &zh.1).unwrap(), num("10010000"));
        assert_eq!(parse_hybrid("100.01百万", &zh.0, &zh.1).unwrap(), num("100010000"));
        assert_eq!(parse_hybrid("5 hundred thousand", &en.0, &en.1).unwrap(), num("500000"));
        assert_eq!(
            parse_hybrid("2,5 Millionen", &LocaleSpec::de(), &ScaleLexicon::de()).unwrap(),
            num("2500000")
        );
        assert_eq!(
            parse_hybrid("१०.०१ लाख", &LocaleSpec::ne(), &ScaleLexicon::ne()).unwrap(),
            num("1001000")
        );
        assert!(matches!(parse_hybrid("million", &en.0, &en.1), Err(NumeralError::DanglingScale(_))));
        assert!(matches!(parse_hybrid("12,34 million", &en.0, &en.1), Err(NumeralError::DigitPart(_))));
        assert!(matches!(parse_hybrid("5 millions", &en.0, &en.1), Err(NumeralError::UnknownScale(_))));
    }

    #[test]
    fn renders_hybrids() {
        let v = num("10010000");
        assert_eq!(
            render_hybrid(&v, 6, &LocaleSpec::en(), &ScaleLexicon::en(), false).unwrap(),
            "10.01 million"
        );
        assert_eq!(render_hybrid(&v, 6, &LocaleSpec::zh(), &ScaleLexicon::zh(), false).unwrap(), "1001万");
        assert_eq!(
            render_hybrid(&num("1000000"), 6, &LocaleSpec::de(), &ScaleLexicon::de(), false).unwrap(),
            "1 Million"
        );
        assert_eq!(
            render_hybrid(&v, 6, &LocaleSpec::de(), &ScaleLexicon::de(), false).unwrap(),
            "10,01 Millionen"
        );
        assert_eq!(
            render_hybrid(&v, 6, &LocaleSpec::ne(), &ScaleLexicon::ne(), true).unwrap(),
            "१००.१ लाख"
        );
        assert_eq!(render_hybrid(&num("12345"), 2, &LocaleSpec::zh(), &ScaleLexicon::zh(), false), None);
    }
}
