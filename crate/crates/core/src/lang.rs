//! Per-language bundles: locale, optional word numerals, hybrid scale words.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::locale::{parse_localized, LocaleConfig, LocaleError, LocaleSpec};
use crate::numerals::{parse_hybrid, LexiconEntry, LexiconKind, NumeralSystem, ScaleLexicon, ScaleUsage};
use crate::numeric::CanonicalNumber;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LanguageError {
    #[error("unknown language {0:?}")]
    Unknown(String),
    #[error("malformed direction {0:?}, expected e.g. en-de")]
    MalformedDirection(String),
    #[error(transparent)]
    Locale(#[from] LocaleError),
    #[error("bad lexicon entry {word:?}: {reason}")]
    BadLexiconEntry { word: String, reason: String },
}

/// Everything the harness knows about writing numbers in one language.
#[derive(Debug, Clone)]
pub struct Language {
    pub locale: LocaleSpec,
    pub words: Option<NumeralSystem>,
    pub scales: ScaleLexicon,
}

impl Language {
    pub fn tag(&self) -> &str {
        &self.locale.language_tag
    }

    /// Whether numbers are written in the local digit script by default.
    pub fn prefers_local_digits(&self) -> bool {
        self.locale.has_local_digits()
    }

    /// Reads a standalone number written in this language: digits,
    /// digits with scale words, or number words.
    pub fn parse_surface(&self, text: &str) -> Option<CanonicalNumber> {
        parse_localized(text, &self.locale)
            .ok()
            .or_else(|| parse_hybrid(text, &self.locale, &self.scales).ok())
            .or_else(|| self.words.as_ref()?.parse_words(text).ok())
    }

    pub fn builtin(tag: &str) -> Option<Self> {
        Some(Language {
            locale: LocaleSpec::builtin(tag)?,
            words: NumeralSystem::builtin(tag),
            scales: ScaleLexicon::builtin(tag)?,
        })
    }

    /// Applies lexicon override entries (atoms to the word system, scales
    /// to the hybrid lexicon).
    pub fn extend_lexicon(&mut self, entries: &[LexiconEntry]) -> Result<(), LanguageError> {
        for entry in entries {
            let bad = |reason: &str| LanguageError::BadLexiconEntry {
                word: entry.word.clone(),
                reason: reason.to_string(),
            };
            match entry.kind {
                LexiconKind::Atom => {
                    let value: u128 = entry.value.parse().map_err(|_| bad("value must be an integer"))?;
                    self.words
                        .as_mut()
                        .ok_or_else(|| bad("language has no word numerals"))?
                        .add_alias(&entry.word, value);
                }
                LexiconKind::Scale => {
                    let power: u32 = entry.value.parse().map_err(|_| bad("value must be a power of ten"))?;
                    self.scales.add(&entry.word, power, ScaleUsage::ParseOnly);
                }
            }
        }
        Ok(())
    }
}

/// Registry of languages addressable by tag.
#[derive(Debug, Clone)]
pub struct LanguageRegistry {
    languages: BTreeMap<String, Language>,
}

impl Default for LanguageRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

impl LanguageRegistry {
    pub fn builtin() -> Self {
        let languages = ["en", "de", "zh", "ne", "ta"]
            .iter()
            .map(|&t| (t.to_string(), Language::builtin(t).expect("built-in language")))
            .collect();
        LanguageRegistry { languages }
    }

    pub fn get(&self, tag: &str) -> Result<&Language, LanguageError> {
        self.languages.get(tag).ok_or_else(|| LanguageError::Unknown(tag.to_string()))
    }

    pub fn get_mut(&mut self, tag: &str) -> Result<&mut Language, LanguageError> {
        self.languages.get_mut(tag).ok_or_else(|| LanguageError::Unknown(tag.to_string()))
    }

    pub fn tags(&self) -> impl Iterator<Item = &str> {
        self.languages.keys().map(String::as_str)
    }

    pub fn insert(&mut self, language: Language) {
        self.languages.insert(language.tag().to_string(), language);
    }

    /// Adds or replaces a locale from config. Word numerals and scale words
    /// of a built-in with the same tag are kept.
    pub fn insert_locale(&mut self, config: &LocaleConfig) -> Result<(), LanguageError> {
        let locale = LocaleSpec::from_config(config)?;
        let tag = locale.language_tag.clone();
        let language = match self.languages.remove(&tag) {
            Some(existing) => Language { locale, ..existing },
            None => Language {
                locale,
                words: None,
                scales: ScaleLexicon::empty(&tag),
            },
        };
        self.languages.insert(tag, language);
        Ok(())
    }

    pub fn check_direction(&self, direction: &Direction) -> Result<(), LanguageError> {
        self.get(&direction.source)?;
        self.get(&direction.target)?;
        Ok(())
    }
}

/// A translation direction such as `en-de`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction {
    pub source: String,
    pub target: String,
}

impl Direction {
    pub fn new(source: &str, target: &str) -> Self {
        Direction {
            source: source.to_string(),
            target: target.to_string(),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.source, self.target)
    }
}

impl FromStr for Direction {
    type Err = LanguageError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once('-') {
            Some((a, b)) if !a.is_empty() && !b.is_empty() && !b.contains('-') && a != b => Ok(Direction::new(a, b)),
            _ => Err(LanguageError::MalformedDirection(s.to_string())),
        }
    }
}

impl Serialize for Direction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Direction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
