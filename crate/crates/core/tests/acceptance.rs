//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::collections::BTreeMap;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use numtest::backends::{BatchOptions, InjectedErrorKind, MockBackend, TranslationRequest};
use numtest::evaluator::{build_report, judge, ErrorClass, GridOptions, Percent, Verdict};
use numtest::format::builtin_formats;
use numtest::locale::{parse_localized, render_grouped, LocaleSpec};
use numtest::miner::{mine_templates, CorpusRecord, MineMode};
use numtest::numerals::NumeralSystem;
use numtest::pipeline;
use numtest::suite::{build_suite, builtin_templates, Capability, SuiteConfig, TestCase};
use numtest::{CanonicalNumber, Direction, LanguageRegistry};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = fn() -> Result<String, String>;

fn ensure(condition: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if condition {
        Ok(())
    } else {
        Err(message())
    }
}

fn within(started: Instant, limit: Duration) -> Result<String, String> {
    let elapsed = started.elapsed();
    ensure(elapsed < limit, || format!("took {elapsed:.2?}, limit {limit:?}"))?;
    Ok(format!("{elapsed:.2?}"))
}

fn num(s: &str) -> CanonicalNumber {
    s.parse().unwrap()
}

fn directions() -> Vec<Direction> {
    ["en-de", "en-zh", "en-ne", "en-ta", "de-en", "zh-en"]
        .iter()
        .map(|d| d.parse().unwrap())
        .collect()
}

fn suite_composition() -> Result<String, String> {
    let started = Instant::now();
    let cases = build_suite(&SuiteConfig::default(), &LanguageRegistry::builtin(), 1).map_err(|e| e.to_string())?;
    let mut counts: BTreeMap<Capability, usize> = BTreeMap::new();
    for case in &cases {
        *counts.entry(case.capability).or_default() += 1;
    }
    let got: Vec<usize> = Capability::ALL.iter().map(|c| counts.get(c).copied().unwrap_or(0)).collect();
    ensure(got == [50, 40, 40, 35], || format!("counts {got:?}"))?;
    let formats = builtin_formats().len();
    ensure(formats == 25, || format!("{formats} formats"))?;
    Ok(format!("50/40/40/35 cases, 25 formats, {}", within(started, Duration::from_secs(1))?))
}

fn template_fidelity() -> Result<String, String> {
    let expected = [
        "As of March 28, 2020, a total of [NUM] laboratory-confirmed COVID-19 cases (Figure) were reported to CDC.",
        "Case report forms were submitted to CDC for [NUM] cases.",
        "UNESCO estimates [NUM] learners are potentially at risk (pre-primary to upper-secondary education).",
        "There have been [NUM] confirmed cases of COVID19 to date.",
        "CNBC reported there were at least [NUM] cases worldwide.",
        "An average of [NUM] people is infected every day due to this disease",
        "The distance between Sydney to Washington is [NUM] miles",
        "The genome size of the coronavirus is approximately [NUM]",
        "At this point, Rosberg was about [NUM] seconds behind his teammate.",
        "The reproduction number of this disease is between [NUM] and [NUM].",
        "The total amount of remittance is [NUM].",
        "Case report forms were submitted to CDC for [NUM] cases.",
        "As of 8 April 2020, approximately [NUM] learners have been affected due to school closures in response to COVID-19.",
        "As of December 2019, [NUM] cases of MERS-CoV infection had been confirmed by laboratory tests",
        "They then planned an ambitious open-air concert in Tokyo, with a stage costing [NUM] dollars US.",
        "An average of [NUM] people is infected every day due to this disease",
        "The distance between Sydney to Washington is [NUM] miles",
        "The genome size of the coronavirus is approximately [NUM]",
        "They then planned an ambitious open-air concert in Tokyo, with a stage costing [NUM] dollars US.",
        "As of December 2019, [NUM] cases of MERS-CoV infection had been confirmed by laboratory tests",
    ];
    let templates = builtin_templates();
    ensure(templates.len() == 20, || format!("{} templates", templates.len()))?;
    for (i, (t, want)) in templates.iter().zip(expected).enumerate() {
        let capability = Capability::ALL[i / 5];
        ensure(t.text == want && t.capability == capability, || format!("template {} differs: {:?}", t.id, t.text))?;
    }
    let two = templates.iter().filter(|t| t.placeholder_count() == 2).count();
    ensure(two == 1 && templates[9].placeholder_count() == 2, || "two-placeholder template missing".into())?;
    Ok("20 templates verbatim".into())
}

fn numeral_round_trip() -> Result<String, String> {
    let started = Instant::now();
    let systems = [
        ("en", NumeralSystem::en()),
        ("de", NumeralSystem::de()),
        ("zh", NumeralSystem::zh()),
        ("zh-financial", NumeralSystem::zh_financial()),
    ];
    let mut checks = 0;
    for (name, system) in &systems {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let random = (0..10_000).map(|_| rng.random_range(0..=1_000_000_000_000u64));
        for n in (0..100_000u64).chain(random) {
            let value = CanonicalNumber::from_u64(n);
            let words = system.render_words(&value).map_err(|e| format!("{name} render {n}: {e}"))?;
            let back = system.parse_words(&words).map_err(|e| format!("{name} parse {words:?}: {e}"))?;
            ensure(back == value, || format!("{name}: {n} -> {words:?} -> {back}"))?;
            checks += 1;
        }
    }
    Ok(format!("{checks} checks, 0 failures, {}", within(started, Duration::from_secs(60))?))
}

fn localization_round_trip() -> Result<String, String> {
    let mut locales: Vec<LocaleSpec> = ["en", "de", "zh", "ne", "ta"]
        .iter()
        .map(|t| LocaleSpec::builtin(t).unwrap())
        .collect();
    locales.push(LocaleSpec::builtin("ne").unwrap().with_lakh_grouping());
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for locale in &locales {
        for _ in 0..10_000 {
            let int = rng.random_range(0..10_000_000_000_000u64);
            let frac_len = rng.random_range(0..=4usize);
            let frac: String = (0..frac_len).map(|_| char::from(b'0' + rng.random_range(0..10u8))).collect();
            let value = CanonicalNumber::from_plain_string(format!("{int}.{frac}").trim_end_matches('.')).unwrap();
            let grouped = rng.random_bool(0.5);
            let local = locale.has_local_digits() && rng.random_bool(0.5);
            let text = render_grouped(&value, locale, grouped, local);
            let back = parse_localized(&text, locale).map_err(|e| format!("{}: {text:?}: {e}", locale.language_tag))?;
            ensure(back == value, || format!("{}: {value} -> {text:?} -> {back}", locale.language_tag))?;
        }
    }

    let de = LocaleSpec::builtin("de").unwrap();
    let mut config = SuiteConfig::default();
    config.directions = directions().into_iter().filter(|d| d.source == "en").collect();
    let cases = build_suite(&config, &LanguageRegistry::builtin(), 4).map_err(|e| e.to_string())?;
    let mut checked = 0;
    for case in cases.iter().filter(|c| c.capability == Capability::Separators) {
        for (surface, truth) in case.surfaces.iter().zip(&case.ground_truths) {
            let read = parse_localized(surface, &de);
            ensure(read.as_ref().ok() != Some(truth), || format!("{surface:?} reads the same under de"))?;
            checked += 1;
        }
    }
    Ok(format!("{} locales x 10000 values; {checked} separator surfaces never silently equal under de", locales.len()))
}

fn equivalence_oracle() -> Result<String, String> {
    let registry = LanguageRegistry::builtin();
    let en = registry.get("en").unwrap();
    let zh = registry.get("zh").unwrap();
    let a = en.parse_surface("10.01 million");
    let b = en.parse_surface("10,010,000");
    let c = zh.parse_surface("1001万");
    ensure(a.is_some() && a == b && b == c && a == Some(num("10010000")), || format!("{a:?} {b:?} {c:?}"))?;
    let five = [en.parse_surface("5"), en.parse_surface("5.0"), en.parse_surface("five")];
    ensure(five.iter().all(|v| v.as_ref() == Some(&num("5"))), || format!("{five:?}"))?;
    Ok("10.01 million == 10,010,000 == 1001万; 5 == 5.0 == five".into())
}

fn mock_verdicts(kind: InjectedErrorKind, config: &SuiteConfig, registry: &LanguageRegistry) -> Result<(Vec<TestCase>, Vec<Verdict>), String> {
    let mock = MockBackend::new(kind, registry.clone());
    let run = pipeline::run(config, registry, 11, &[&mock], &BatchOptions::default()).map_err(|e| e.to_string())?;
    Ok((run.cases, run.verdicts))
}

fn oracle_controls() -> Result<String, String> {
    let started = Instant::now();
    let registry = LanguageRegistry::builtin();
    let mut config = SuiteConfig::default();
    config.directions = directions();

    let (_, perfect) = mock_verdicts(InjectedErrorKind::Perfect, &config, &registry)?;
    let report = build_report(&perfect).map_err(|e| e.to_string())?;
    let low: Vec<String> = report
        .cells
        .iter()
        .filter(|c| c.pass_rate != Percent(1000))
        .map(|c| format!("{} {} {}", c.direction, c.capability, c.pass_rate))
        .collect();
    ensure(low.is_empty(), || format!("Perfect below 100.0: {low:?}"))?;

    let (_, omit) = mock_verdicts(InjectedErrorKind::OmitNumber, &config, &registry)?;
    let report = build_report(&omit).map_err(|e| e.to_string())?;
    ensure(report.cells.iter().all(|c| c.pass_rate == Percent(0)), || "OmitNumber above 0.0".into())?;

    let mut en_de = config.clone();
    en_de.directions = vec!["en-de".parse().unwrap()];
    let (_, kept) = mock_verdicts(InjectedErrorKind::KeepSourceSeparators, &en_de, &registry)?;
    let separators: Vec<&Verdict> = kept.iter().filter(|v| v.capability == Capability::Separators).collect();
    ensure(
        separators.iter().all(|v| !v.passed && v.error_class == Some(ErrorClass::SeparatorError)),
        || "KeepSourceSeparators: a Separators case passed or was misclassified".into(),
    )?;

    let (cases, dropped) = mock_verdicts(InjectedErrorKind::DropDigit, &config, &registry)?;
    let mut eligible = 0;
    for (case, verdict) in cases.iter().zip(&dropped) {
        let multi_digit = case.ground_truths.iter().any(|t| t.written_digits().trim_start_matches('0').len() >= 2);
        if !multi_digit {
            continue;
        }
        eligible += 1;
        ensure(
            !verdict.passed && verdict.error_class == Some(ErrorClass::DigitOmission),
            || format!("DropDigit {}: {:?} {:?}", case.id, verdict.error_class, verdict.notes),
        )?;
    }
    Ok(format!(
        "{} cases x 4 controls over {} directions; {eligible} DropDigit cases all DigitOmission, {}",
        perfect.len(),
        config.directions.len(),
        within(started, Duration::from_secs(30))?
    ))
}

fn report_format() -> Result<String, String> {
    let direction: Direction = "en-de".parse().unwrap();
    let verdicts: Vec<Verdict> = (0..40)
        .map(|i| Verdict {
            case_id: format!("c{i}"),
            capability: Capability::Integers,
            direction: direction.clone(),
            backend: "A".into(),
            passed: i < 31,
            matched: vec![i < 31],
            error_class: (i >= 31).then_some(ErrorClass::Unclassified),
            candidates: Vec::new(),
            notes: Vec::new(),
        })
        .collect();
    let report = build_report(&verdicts).map_err(|e| e.to_string())?;
    let cell = report.cell(Capability::Integers, &direction, "A").ok_or("missing cell")?;
    ensure(cell.pass_rate.to_string() == "77.5", || format!("cell {}", cell.pass_rate))?;

    let mut more = verdicts.clone();
    for (i, (cap, dir, system)) in [
        (Capability::Decimals, "en-zh", "B"),
        (Capability::Numerals, "en-de", "B"),
        (Capability::Separators, "en-zh", "A"),
    ]
    .into_iter()
    .enumerate()
    {
        more.push(Verdict {
            case_id: format!("x{i}"),
            capability: cap,
            direction: dir.parse().unwrap(),
            backend: system.into(),
            ..verdicts[0].clone()
        });
    }
    let grid = build_report(&more).map_err(|e| e.to_string())?.render_grid(GridOptions::default());
    let lines: Vec<&str> = grid.lines().collect();
    for name in ["Integers", "Decimals", "Numerals", "Separators"] {
        ensure(lines[0].matches(name).count() == 1, || format!("no {name} group:\n{grid}"))?;
    }
    ensure(lines[1].matches(" A ").count() == 4 && lines[1].matches(" B ").count() == 4, || format!("system columns:\n{grid}"))?;
    ensure(grid.contains("En→De") && grid.contains("En→Zh"), || format!("direction rows:\n{grid}"))?;
    ensure(lines.iter().any(|l| l.trim_start().starts_with("Avg")), || format!("Avg row:\n{grid}"))?;
    ensure(lines[0].contains("Avg"), || format!("Avg column:\n{grid}"))?;
    ensure(grid.contains("77.5"), || format!("77.5 cell:\n{grid}"))?;
    Ok("4 groups x systems, direction rows, Avg row/column, 31/40 -> 77.5".into())
}

fn determinism() -> Result<String, String> {
    let registry = LanguageRegistry::builtin();
    let mut config = SuiteConfig::default();
    config.directions = directions();
    let files = ["suite.jsonl", "results.jsonl", "verdicts.jsonl", "report.json", "report.txt"];
    for kind in InjectedErrorKind::ALL {
        let mut outputs = Vec::new();
        for _ in 0..2 {
            let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
            let mock = MockBackend::new(kind, registry.clone());
            let options = BatchOptions {
                max_inflight: 8,
                ..BatchOptions::default()
            };
            let run = pipeline::run(&config, &registry, 5, &[&mock], &options).map_err(|e| e.to_string())?;
            run.write(dir.path(), GridOptions::default()).map_err(|e| e.to_string())?;
            let bytes: Vec<Vec<u8>> = files.iter().map(|f| std::fs::read(dir.path().join(f)).unwrap()).collect();
            outputs.push(bytes);
        }
        ensure(outputs[0] == outputs[1], || format!("mock:{kind} runs differ"))?;
    }
    Ok(format!("{} mock kinds, 2 runs each, byte-identical", InjectedErrorKind::ALL.len()))
}

fn miner_soundness() -> Result<String, String> {
    let registry = LanguageRegistry::builtin();
    let direction: Direction = "en-de".parse().unwrap();
    let mut config = SuiteConfig::default();
    config.directions = vec![direction.clone()];
    let cases = build_suite(&config, &registry, 9).map_err(|e| e.to_string())?;
    let perfect = MockBackend::new(InjectedErrorKind::Perfect, registry.clone());
    let corrupters = [
        MockBackend::new(InjectedErrorKind::DropDigit, registry.clone()),
        MockBackend::new(InjectedErrorKind::DuplicateDigit, registry.clone()),
        MockBackend::new(InjectedErrorKind::OmitNumber, registry.clone()),
    ];

    let mut records = Vec::new();
    let mut correct = Vec::new();
    let mut cases_iter = cases.iter();
    while records.len() < 100 {
        let case = cases_iter.next().ok_or("ran out of cases")?;
        let request = TranslationRequest::from_case(case);
        let good = records.len() % 5 < 3;
        let target = if good {
            perfect.mock_translate(&request)
        } else {
            corrupters[records.len() % corrupters.len()].mock_translate(&request)
        };
        let Ok(target) = target else { continue };
        if good {
            correct.push((case.source_sentence.clone(), target.clone()));
        }
        records.push(CorpusRecord {
            source: case.source_sentence.clone(),
            target: Some(target),
        });
    }

    let outcome = mine_templates(&records, &direction, &registry, MineMode::Reference, None).map_err(|e| e.to_string())?;
    ensure(outcome.stats.failed == 40, || format!("{} records rejected, expected 40", outcome.stats.failed))?;
    for t in &outcome.templates {
        ensure(correct.contains(&(t.source.clone(), t.target.clone())), || format!("{} mined from a corrupted pair", t.template.id))?;
        let verdict = judge(&t.as_case(&direction), &t.target, "miner", &registry).map_err(|e| e.to_string())?;
        ensure(verdict.passed, || format!("{} does not re-pass", t.template.id))?;
    }
    let emitted = outcome.templates.len();
    ensure(emitted > 0 && emitted <= 60, || format!("{emitted} templates"))?;
    Ok(format!("60/40 corpus -> {emitted} templates, all from correct pairs and re-passing"))
}

fn main() {
    let criteria: [(&str, Check); 9] = [
        ("suite composition", suite_composition),
        ("template fidelity", template_fidelity),
        ("numeral round trip", numeral_round_trip),
        ("localization round trip and asymmetry", localization_round_trip),
        ("equivalence oracle", equivalence_oracle),
        ("oracle controls", oracle_controls),
        ("report format", report_format),
        ("determinism", determinism),
        ("miner soundness", miner_soundness),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
