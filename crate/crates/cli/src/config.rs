//! The TOML config file. Every command-line flag has a key here; flags win
//! when both are given.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use numtest::backends::HttpConfig;
use numtest::locale::LocaleConfig;
use numtest::numerals::LexiconEntry;
use numtest::LanguageRegistry;
use serde::Deserialize;

use crate::error::{CliError, Kind};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub directions: Option<Vec<String>>,
    pub numeral_mode: Option<String>,
    #[serde(default)]
    pub templates: Vec<PathBuf>,
    #[serde(default)]
    pub no_builtin_templates: bool,
    /// Capability name to case count.
    #[serde(default)]
    pub counts: BTreeMap<String, usize>,
    /// Capability name to format patterns.
    #[serde(default)]
    pub formats: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub backends: Vec<String>,
    pub replay: Option<PathBuf>,
    pub http: Option<HttpConfig>,
    pub rps: Option<f64>,
    pub max_inflight: Option<usize>,
    pub retries: Option<u32>,
    pub bold_below: Option<f64>,
    pub min_pass_rate: Option<f64>,
    /// Extra or replacement locales.
    #[serde(default)]
    pub locales: Vec<LocaleConfig>,
    /// Language tag to lexicon additions.
    #[serde(default)]
    pub lexicon: BTreeMap<String, Vec<LexiconEntry>>,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::new(Kind::Io, format!("{}: {e}", path.display())))
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        toml::from_str(&read(path)?).map_err(|e| CliError::new(Kind::Schema, format!("{}: {e}", path.display())))
    }

    /// The built-in languages plus this file's locales and lexicon entries.
    pub fn registry(&self) -> Result<LanguageRegistry, CliError> {
        let mut registry = LanguageRegistry::builtin();
        for locale in &self.locales {
            registry.insert_locale(locale)?;
        }
        for (tag, entries) in &self.lexicon {
            registry.get_mut(tag)?.extend_lexicon(entries)?;
        }
        Ok(registry)
    }
}

pub fn load_http_config(path: &Path) -> Result<HttpConfig, CliError> {
    toml::from_str(&read(path)?).map_err(|e| CliError::new(Kind::Schema, format!("{}: {e}", path.display())))
}
