//! Capabilities, templates and suite assembly.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::evaluator::source_numbers;
use crate::format::{builtin_formats, generate_for, FormatError, NumberFormat, NumeralMode};
use crate::jsonl::{self, JsonlError};
use crate::lang::{Direction, LanguageError, LanguageRegistry};
use crate::numeric::CanonicalNumber;

pub const PLACEHOLDER: &str = "[NUM]";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Capability {
    Integers,
    Decimals,
    Numerals,
    Separators,
}

impl Capability {
    pub const ALL: [Capability; 4] = [
        Capability::Integers,
        Capability::Decimals,
        Capability::Numerals,
        Capability::Separators,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Capability::Integers => "Integers",
            Capability::Decimals => "Decimals",
            Capability::Numerals => "Numerals",
            Capability::Separators => "Separators",
        }
    }

    fn id_prefix(self) -> &'static str {
        match self {
            Capability::Integers => "int",
            Capability::Decimals => "dec",
            Capability::Numerals => "num",
            Capability::Separators => "sep",
        }
    }
}

impl fmt::Display for Capability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Capability {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Capability::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown capability {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Builtin,
    Mined,
    #[default]
    User,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestTemplate {
    pub id: String,
    pub capability: Capability,
    pub language: String,
    pub text: String,
    #[serde(default)]
    pub provenance: Provenance,
}

impl TestTemplate {
    pub fn placeholder_count(&self) -> usize {
        self.text.matches(PLACEHOLDER).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestCase {
    pub id: String,
    pub template_id: String,
    pub capability: Capability,
    pub direction: Direction,
    pub source_sentence: String,
    pub surfaces: Vec<String>,
    pub ground_truths: Vec<CanonicalNumber>,
    pub format: String,
    pub seed: u64,
}

const BUILTIN_TEXTS: [(Capability, [&str; 5]); 4] = [
    (
        Capability::Integers,
        [
            "As of March 28, 2020, a total of [NUM] laboratory-confirmed COVID-19 cases (Figure) were reported to CDC.",
            "Case report forms were submitted to CDC for [NUM] cases.",
            "UNESCO estimates [NUM] learners are potentially at risk (pre-primary to upper-secondary education).",
            "There have been [NUM] confirmed cases of COVID19 to date.",
            "CNBC reported there were at least [NUM] cases worldwide.",
        ],
    ),
    (
        Capability::Decimals,
        [
            "An average of [NUM] people is infected every day due to this disease",
            "The distance between Sydney to Washington is [NUM] miles",
            "The genome size of the coronavirus is approximately [NUM]",
            "At this point, Rosberg was about [NUM] seconds behind his teammate.",
            "The reproduction number of this disease is between [NUM] and [NUM].",
        ],
    ),
    (
        Capability::Numerals,
        [
            "The total amount of remittance is [NUM].",
            "Case report forms were submitted to CDC for [NUM] cases.",
            "As of 8 April 2020, approximately [NUM] learners have been affected due to school closures in response to COVID-19.",
            "As of December 2019, [NUM] cases of MERS-CoV infection had been confirmed by laboratory tests",
            "They then planned an ambitious open-air concert in Tokyo, with a stage costing [NUM] dollars US.",
        ],
    ),
    (
        Capability::Separators,
        [
            "An average of [NUM] people is infected every day due to this disease",
            "The distance between Sydney to Washington is [NUM] miles",
            "The genome size of the coronavirus is approximately [NUM]",
            "They then planned an ambitious open-air concert in Tokyo, with a stage costing [NUM] dollars US.",
            "As of December 2019, [NUM] cases of MERS-CoV infection had been confirmed by laboratory tests",
        ],
    ),
];

/// The 20 English templates, five per capability, with ids `int-1` … `sep-5`.
pub fn builtin_templates() -> Vec<TestTemplate> {
    BUILTIN_TEXTS
        .iter()
        .flat_map(|(capability, texts)| {
            texts.iter().enumerate().map(move |(i, text)| TestTemplate {
                id: format!("{}-{}", capability.id_prefix(), i + 1),
                capability: *capability,
                language: "en".to_string(),
                text: text.to_string(),
                provenance: Provenance::Builtin,
            })
        })
        .collect()
}

const STARTER_DE: &str = include_str!("../data/templates/de.jsonl");
const STARTER_ZH: &str = include_str!("../data/templates/zh.jsonl");

/// Mined German and Chinese source templates shipped with the crate, so
/// that de-en and zh-en suites work without extra files.
pub fn starter_templates() -> Vec<TestTemplate> {
    [("de.jsonl", STARTER_DE), ("zh.jsonl", STARTER_ZH)]
        .iter()
        .flat_map(|(name, text)| jsonl::from_str::<TestTemplate>(text, Path::new(name)).expect("starter templates parse"))
        .collect()
}

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error(transparent)]
    Language(#[from] LanguageError),
    #[error("format {pattern} is a {found} format, not {expected}")]
    FormatMismatch {
        pattern: String,
        expected: Capability,
        found: Capability,
    },
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("no {capability} templates with source language {language} (needed for {direction})")]
    NoTemplates {
        direction: Direction,
        capability: Capability,
        language: String,
    },
    #[error("template {0} has no [NUM] placeholder")]
    NoPlaceholder(String),
    #[error("could not draw a number for {0} distinct from the template's own numbers")]
    Exhausted(String),
    #[error("surface {surface:?} does not read back as {value} in {language}")]
    SurfaceMismatch {
        surface: String,
        value: CanonicalNumber,
        language: String,
    },
    #[error(transparent)]
    Io(#[from] JsonlError),
}

/// How cases of one capability are generated. The default plan fills every
/// (template, format) pair `draws` times; `count` truncates or extends that
/// plan with further draws.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapabilityPlan {
    pub formats: Vec<NumberFormat>,
    pub draws: usize,
    pub count: Option<usize>,
    pub template_ids: Option<Vec<String>>,
}

impl CapabilityPlan {
    pub fn default_for(capability: Capability) -> Self {
        let draws = match capability {
            Capability::Decimals | Capability::Numerals => 2,
            Capability::Integers | Capability::Separators => 1,
        };
        CapabilityPlan {
            formats: builtin_formats().into_iter().filter(|f| f.capability == capability).collect(),
            draws,
            count: None,
            template_ids: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub directions: Vec<Direction>,
    pub plans: BTreeMap<Capability, CapabilityPlan>,
    pub numeral_mode: NumeralMode,
    pub templates: Vec<TestTemplate>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        let mut templates = builtin_templates();
        templates.extend(starter_templates());
        SuiteConfig {
            directions: vec![Direction::new("en", "de")],
            plans: Capability::ALL.iter().map(|&c| (c, CapabilityPlan::default_for(c))).collect(),
            numeral_mode: NumeralMode::Hybrid,
            templates,
        }
    }
}

fn fnv1a(text: &str) -> u64 {
    text.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Per-case seed: stable under reordering or filtering of the suite.
pub fn derive_seed(seed: u64, key: &str) -> u64 {
    splitmix64(seed ^ fnv1a(key))
}

const MAX_ATTEMPTS: usize = 64;

pub fn build_suite(config: &SuiteConfig, registry: &LanguageRegistry, seed: u64) -> Result<Vec<TestCase>, SuiteError> {
    let mut cases = Vec::new();
    for direction in &config.directions {
        registry.check_direction(direction)?;
        for (&capability, plan) in &config.plans {
            if let Some(f) = plan.formats.iter().find(|f| f.capability != capability) {
                return Err(SuiteError::FormatMismatch {
                    pattern: f.pattern(),
                    expected: capability,
                    found: f.capability,
                });
            }
            let templates: Vec<&TestTemplate> = config
                .templates
                .iter()
                .filter(|t| t.language == direction.source && t.capability == capability)
                .filter(|t| plan.template_ids.as_ref().is_none_or(|ids| ids.contains(&t.id)))
                .collect();
            let per_round = templates.len() * plan.formats.len() * plan.draws;
            let total = plan.count.unwrap_or(per_round);
            if plan.count == Some(0) || plan.formats.is_empty() || plan.draws == 0 {
                continue;
            }
            if per_round == 0 {
                return Err(SuiteError::NoTemplates {
                    direction: direction.clone(),
                    capability,
                    language: direction.source.clone(),
                });
            }

            for i in 0..total {
                let (round, j) = (i / per_round, i % per_round);
                let per_template = plan.formats.len() * plan.draws;
                let template = templates[j / per_template];
                let format = &plan.formats[j % per_template / plan.draws];
                let draw = round * plan.draws + j % plan.draws;

                let key = format!("{direction}/{}/{}/{draw}", template.id, format.pattern());
                let case_seed = derive_seed(seed, &key);
                cases.push(fill_template(
                    template,
                    format,
                    direction,
                    config.numeral_mode,
                    registry,
                    key,
                    case_seed,
                )?);
            }
        }
    }
    Ok(cases)
}

fn fill_template(
    template: &TestTemplate,
    format: &NumberFormat,
    direction: &Direction,
    mode: NumeralMode,
    registry: &LanguageRegistry,
    id: String,
    seed: u64,
) -> Result<TestCase, SuiteError> {
    let source = registry.get(&direction.source)?;
    let slots = template.placeholder_count();
    if slots == 0 {
        return Err(SuiteError::NoPlaceholder(template.id.clone()));
    }
    // numbers the template already carries ("COVID-19") must not double as
    // ground truths, or a dropped number could pass on the template's copy
    let taken = source_numbers(&template.text, source);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut drawn: Vec<crate::format::GeneratedNumber> = Vec::with_capacity(slots);
    for _ in 0..slots {
        let fresh = (0..MAX_ATTEMPTS)
            .map(|_| generate_for(format, source, mode, &mut rng))
            .find(|g| !taken.contains(&g.value) && drawn.iter().all(|d| d.value != g.value))
            .ok_or_else(|| SuiteError::Exhausted(id.clone()))?;
        if source.parse_surface(&fresh.surface).as_ref() != Some(&fresh.value) {
            return Err(SuiteError::SurfaceMismatch {
                surface: fresh.surface,
                value: fresh.value,
                language: source.tag().to_string(),
            });
        }
        drawn.push(fresh);
    }

    let mut sentence = String::with_capacity(template.text.len() + 16 * slots);
    let mut pieces = template.text.split(PLACEHOLDER);
    sentence.push_str(pieces.next().unwrap_or(""));
    for (piece, g) in pieces.zip(&drawn) {
        sentence.push_str(&g.surface);
        sentence.push_str(piece);
    }

    Ok(TestCase {
        id,
        template_id: template.id.clone(),
        capability: template.capability,
        direction: direction.clone(),
        source_sentence: sentence,
        surfaces: drawn.iter().map(|g| g.surface.clone()).collect(),
        ground_truths: drawn.iter().map(|g| g.value.clone()).collect(),
        format: drawn[0].format.clone(),
        seed,
    })
}

pub fn suite_to_string(cases: &[TestCase]) -> String {
    jsonl::to_string(cases)
}

pub fn save_suite(cases: &[TestCase], path: &Path) -> Result<(), JsonlError> {
    jsonl::write(path, cases)
}

pub fn load_suite(path: &Path) -> Result<Vec<TestCase>, JsonlError> {
    let records = jsonl::read_numbered::<TestCase>(path)?;
    for (line, case) in &records {
        if case.ground_truths.len() != case.surfaces.len() || case.surfaces.is_empty() {
            return Err(jsonl::schema(
                path,
                *line,
                format!("case {}: surfaces and ground_truths must be non-empty and of equal length", case.id),
            ));
        }
    }
    Ok(records.into_iter().map(|(_, c)| c).collect())
}

pub fn load_templates(path: &Path) -> Result<Vec<TestTemplate>, JsonlError> {
    let records = jsonl::read_numbered::<TestTemplate>(path)?;
    for (line, template) in &records {
        if template.placeholder_count() == 0 {
            return Err(jsonl::schema(path, *line, format!("template {} has no [NUM] placeholder", template.id)));
        }
    }
    Ok(records.into_iter().map(|(_, t)| t).collect())
}

pub fn save_templates(templates: &[TestTemplate], path: &Path) -> Result<(), JsonlError> {
    jsonl::write(path, templates)
}
