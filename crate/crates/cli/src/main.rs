mod config;
mod error;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use numtest::backends::{
    load_results, save_results, Backend, BackendSpec, BatchOptions, HttpBackend, MockBackend, ReplayBackend,
    TranslationResult,
};
use numtest::evaluator::{
    build_report, dump_failures, failure_records, judge_all, load_verdicts, save_verdicts, GridOptions, Report,
    Verdict,
};
use numtest::format::{builtin_formats, parse_format, NumeralMode};
use numtest::miner::{mine_templates, read_corpus, save_mined, MineMode};
use numtest::pipeline::{translate_cases, RunArtifacts};
use numtest::suite::{
    build_suite, builtin_templates, load_suite, load_templates, save_suite, starter_templates, Capability,
    CapabilityPlan, SuiteConfig, TestCase,
};
use numtest::{Direction, LanguageRegistry};

use crate::config::{load_http_config, FileConfig};
use crate::error::{CliError, Kind};

#[derive(Debug, Parser)]
#[command(name = "numtest", version, about = "Behavioural tests for numbers in machine translation")]
struct Cli {
    /// TOML file with defaults for any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a test suite.
    GenSuite {
        #[command(flatten)]
        suite: SuiteArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Translate a suite with one or more backends.
    Translate {
        #[arg(long)]
        suite: PathBuf,
        #[command(flatten)]
        backend: BackendArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Judge translation results against their cases.
    Judge {
        #[arg(long)]
        suite: PathBuf,
        #[arg(long)]
        results: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory for failures.jsonl and failures.txt.
        #[arg(long)]
        dump_failures: Option<PathBuf>,
    },
    /// Aggregate verdicts into a Pass Rate report.
    Report {
        #[arg(long)]
        verdicts: PathBuf,
        #[command(flatten)]
        report: ReportArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate, translate, judge and report in one go.
    Run {
        #[command(flatten)]
        suite: SuiteArgs,
        #[command(flatten)]
        backend: BackendArgs,
        #[command(flatten)]
        report: ReportArgs,
        #[arg(long)]
        out_dir: PathBuf,
        /// Also write failures.jsonl and failures.txt into the output directory.
        #[arg(long)]
        dump_failures: bool,
    },
    /// Mine templates from a corpus.
    Mine {
        #[arg(long)]
        corpus: PathBuf,
        /// Language pair of the corpus, e.g. de-en.
        #[arg(long)]
        direction: String,
        #[arg(long, value_enum, default_value_t = MineModeArg::Reference)]
        mode: MineModeArg,
        #[command(flatten)]
        backend: BackendArgs,
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the built-in number formats.
    ListFormats,
    /// Print the available templates.
    ListTemplates {
        #[arg(long)]
        language: Option<String>,
        #[arg(long = "templates")]
        templates: Vec<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
struct SuiteArgs {
    /// Required for generation, here or in the config file.
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated, e.g. en-de,en-zh.
    #[arg(long, value_delimiter = ',')]
    directions: Vec<String>,
    #[arg(long)]
    numeral_mode: Option<NumeralMode>,
    /// Extra template files (JSONL); repeatable.
    #[arg(long = "templates")]
    templates: Vec<PathBuf>,
    /// Use only the templates given with --templates.
    #[arg(long)]
    no_builtin_templates: bool,
    /// Case count per capability, e.g. Integers=20; repeatable.
    #[arg(long = "count", value_name = "CAPABILITY=N")]
    counts: Vec<String>,
    /// Format override, e.g. Separators=d,ddd; repeatable, replaces the
    /// capability's built-in formats.
    #[arg(long = "format", value_name = "CAPABILITY=PATTERN")]
    formats: Vec<String>,
}

#[derive(Debug, Clone, Args)]
struct BackendArgs {
    /// replay, http or mock:<kind>; repeatable, one report column each.
    #[arg(long = "backend")]
    backends: Vec<String>,
    /// Replay file for the replay backend.
    #[arg(long)]
    replay: Option<PathBuf>,
    /// TOML file describing the HTTP endpoint.
    #[arg(long)]
    http_config: Option<PathBuf>,
    /// Requests per second (default 1 for http, unlimited otherwise).
    #[arg(long)]
    rps: Option<f64>,
    #[arg(long)]
    max_inflight: Option<usize>,
    /// Retries for transient failures.
    #[arg(long)]
    retries: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Grid,
    Data,
}

#[derive(Debug, Clone, Args)]
struct ReportArgs {
    #[arg(long, value_enum, default_value_t = ReportFormat::Grid)]
    report_format: ReportFormat,
    /// Bold cells below this Pass Rate in the grid.
    #[arg(long)]
    bold_below: Option<f64>,
    /// Exit with code 7 when any cell is below this Pass Rate.
    #[arg(long)]
    min_pass_rate: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MineModeArg {
    Reference,
    Backend,
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::new(Kind::Io, format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::new(Kind::Io, format!("stdout: {e}"))),
    }
}

fn split_assignment(text: &str) -> Result<(Capability, &str), CliError> {
    let (cap, value) = text
        .split_once('=')
        .ok_or_else(|| CliError::usage(format!("expected CAPABILITY=VALUE, got {text:?}")))?;
    Ok((cap.trim().parse().map_err(CliError::usage)?, value.trim()))
}

fn suite_config(args: &SuiteArgs, file: &FileConfig) -> Result<SuiteConfig, CliError> {
    let mut config = SuiteConfig::default();
    let directions = if args.directions.is_empty() {
        file.directions.clone()
    } else {
        Some(args.directions.clone())
    };
    if let Some(directions) = directions {
        config.directions = directions
            .iter()
            .map(|d| d.trim().parse::<Direction>())
            .collect::<Result<_, _>>()?;
    }
    if let Some(mode) = args.numeral_mode {
        config.numeral_mode = mode;
    } else if let Some(mode) = &file.numeral_mode {
        config.numeral_mode = mode.parse().map_err(|e: String| CliError::new(Kind::Schema, e))?;
    }

    if args.no_builtin_templates || file.no_builtin_templates {
        config.templates.clear();
    }
    let files = if args.templates.is_empty() { &file.templates } else { &args.templates };
    for path in files {
        config.templates.extend(load_templates(path)?);
    }

    let mut counts: Vec<(Capability, usize)> = Vec::new();
    for (cap, n) in &file.counts {
        counts.push((cap.parse().map_err(|e: String| CliError::new(Kind::Schema, e))?, *n));
    }
    for text in &args.counts {
        let (cap, n) = split_assignment(text)?;
        counts.push((cap, n.parse().map_err(|_| CliError::usage(format!("bad count in {text:?}")))?));
    }
    for (cap, n) in counts {
        plan(&mut config, cap).count = Some(n);
    }

    let mut formats: Vec<(Capability, String)> = Vec::new();
    if args.formats.is_empty() {
        for (cap, patterns) in &file.formats {
            let cap: Capability = cap.parse().map_err(|e: String| CliError::new(Kind::Schema, e))?;
            formats.extend(patterns.iter().map(|p| (cap, p.clone())));
        }
    } else {
        for text in &args.formats {
            let (cap, pattern) = split_assignment(text)?;
            formats.push((cap, pattern.to_string()));
        }
    }
    let mut replaced: Vec<Capability> = Vec::new();
    for (cap, pattern) in formats {
        let format = parse_format(&pattern).map_err(|e| CliError::usage(format!("format {pattern:?}: {e}")))?;
        let plan = plan(&mut config, cap);
        if !replaced.contains(&cap) {
            plan.formats.clear();
            replaced.push(cap);
        }
        plan.formats.push(format);
    }
    Ok(config)
}

fn plan(config: &mut SuiteConfig, cap: Capability) -> &mut CapabilityPlan {
    config
        .plans
        .entry(cap)
        .or_insert_with(|| CapabilityPlan::default_for(cap))
}

fn require_seed(args: &SuiteArgs, file: &FileConfig) -> Result<u64, CliError> {
    args.seed
        .or(file.seed)
        .ok_or_else(|| CliError::usage("--seed is required (or set seed in the config file)"))
}

/// A backend together with the batch settings it runs under.
struct Configured {
    backend: Box<dyn Backend>,
    options: BatchOptions,
}

fn backends(args: &BackendArgs, file: &FileConfig, registry: &LanguageRegistry) -> Result<Vec<Configured>, CliError> {
    let specs = if args.backends.is_empty() { &file.backends } else { &args.backends };
    if specs.is_empty() {
        return Err(CliError::usage("--backend is required"));
    }
    let defaults = BatchOptions::default();
    specs
        .iter()
        .map(|text| {
            let spec: BackendSpec = text.parse().map_err(CliError::usage)?;
            let backend: Box<dyn Backend> = match spec {
                BackendSpec::Mock(kind) => Box::new(MockBackend::new(kind, registry.clone())),
                BackendSpec::Replay => {
                    let path = args
                        .replay
                        .as_ref()
                        .or(file.replay.as_ref())
                        .ok_or_else(|| CliError::usage("the replay backend needs --replay"))?;
                    Box::new(ReplayBackend::load(path)?)
                }
                BackendSpec::Http => {
                    let config = match &args.http_config {
                        Some(path) => load_http_config(path)?,
                        None => file
                            .http
                            .clone()
                            .ok_or_else(|| CliError::usage("the http backend needs --http-config or an [http] table"))?,
                    };
                    Box::new(HttpBackend::new(config)?)
                }
            };
            let remote = backend.is_remote();
            let options = BatchOptions {
                max_inflight: args.max_inflight.or(file.max_inflight).unwrap_or(defaults.max_inflight),
                rps: args.rps.or(file.rps).or(remote.then_some(1.0)),
                retries: args.retries.or(file.retries).unwrap_or(defaults.retries),
                backoff: defaults.backoff,
            };
            Ok(Configured { backend, options })
        })
        .collect()
}

fn translate_all(cases: &[TestCase], backends: &[Configured]) -> Result<Vec<TranslationResult>, CliError> {
    let mut results = Vec::new();
    for b in backends {
        results.extend(translate_cases(cases, &[b.backend.as_ref()], &b.options)?);
    }
    Ok(results)
}

fn grid_options(args: &ReportArgs, file: &FileConfig) -> GridOptions {
    GridOptions {
        bold_below: args.bold_below.or(file.bold_below),
    }
}

fn render_report(report: &Report, args: &ReportArgs, file: &FileConfig) -> String {
    match args.report_format {
        ReportFormat::Grid => report.render_grid(grid_options(args, file)),
        ReportFormat::Data => report.to_json(),
    }
}

fn gate(report: &Report, args: &ReportArgs, file: &FileConfig) -> Result<(), CliError> {
    let Some(threshold) = args.min_pass_rate.or(file.min_pass_rate) else {
        return Ok(());
    };
    let below: Vec<String> = report
        .cells_below(threshold)
        .iter()
        .map(|c| format!("{} {} {}={}", c.direction, c.capability, c.backend, c.pass_rate))
        .collect();
    if below.is_empty() {
        Ok(())
    } else {
        Err(CliError::new(
            Kind::Gate,
            format!("{} cell(s) below {threshold}: {}", below.len(), below.join(", ")),
        ))
    }
}

fn judge_files(
    cases: &[TestCase],
    results: &[TranslationResult],
    registry: &LanguageRegistry,
    dump: Option<&Path>,
) -> Result<Vec<Verdict>, CliError> {
    let verdicts = judge_all(cases, results, registry)?;
    if let Some(dir) = dump {
        dump_failures(dir, &failure_records(cases, results, &verdicts))?;
    }
    Ok(verdicts)
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let file = FileConfig::load(cli.config.as_deref())?;
    let registry = file.registry()?;
    match cli.command {
        Command::GenSuite { suite, out } => {
            let seed = require_seed(&suite, &file)?;
            let cases = build_suite(&suite_config(&suite, &file)?, &registry, seed)?;
            match out {
                Some(path) => save_suite(&cases, &path)?,
                None => write_output(None, &numtest::suite::suite_to_string(&cases))?,
            }
        }
        Command::Translate { suite, backend, out } => {
            let configured = backends(&backend, &file, &registry)?;
            let cases = load_suite(&suite)?;
            let results = translate_all(&cases, &configured)?;
            match out {
                Some(path) => save_results(&results, &path)?,
                None => write_output(None, &numtest::jsonl::to_string(&results))?,
            }
        }
        Command::Judge {
            suite,
            results,
            out,
            dump_failures,
        } => {
            let cases = load_suite(&suite)?;
            let results = load_results(&results)?;
            let verdicts = judge_files(&cases, &results, &registry, dump_failures.as_deref())?;
            match out {
                Some(path) => save_verdicts(&verdicts, &path)?,
                None => write_output(None, &numtest::jsonl::to_string(&verdicts))?,
            }
        }
        Command::Report { verdicts, report, out } => {
            let built = build_report(&load_verdicts(&verdicts)?)?;
            write_output(out.as_deref(), &render_report(&built, &report, &file))?;
            gate(&built, &report, &file)?;
        }
        Command::Run {
            suite,
            backend,
            report,
            out_dir,
            dump_failures,
        } => {
            let seed = require_seed(&suite, &file)?;
            let configured = backends(&backend, &file, &registry)?;
            let cases = build_suite(&suite_config(&suite, &file)?, &registry, seed)?;
            let results = translate_all(&cases, &configured)?;
            let dump = dump_failures.then(|| out_dir.join("failures"));
            let verdicts = judge_files(&cases, &results, &registry, dump.as_deref())?;
            let built = build_report(&verdicts)?;
            let artifacts = RunArtifacts {
                cases,
                results,
                verdicts,
                report: built,
            };
            artifacts.write(&out_dir, grid_options(&report, &file))?;
            write_output(None, &render_report(&artifacts.report, &report, &file))?;
            gate(&artifacts.report, &report, &file)?;
        }
        Command::Mine {
            corpus,
            direction,
            mode,
            backend,
            limit,
            out,
        } => {
            let direction: Direction = direction.parse()?;
            let records = read_corpus(&corpus, mode == MineModeArg::Reference)?;
            let outcome = match mode {
                MineModeArg::Reference => mine_templates(&records, &direction, &registry, MineMode::Reference, limit)?,
                MineModeArg::Backend => {
                    let mut configured = backends(&backend, &file, &registry)?;
                    if configured.len() != 1 {
                        return Err(CliError::usage("backend mode takes exactly one --backend"));
                    }
                    let Configured { backend, options } = configured.remove(0);
                    let mode = MineMode::Backend {
                        backend: backend.as_ref(),
                        options,
                    };
                    mine_templates(&records, &direction, &registry, mode, limit)?
                }
            };
            let s = &outcome.stats;
            eprintln!(
                "mined records={} no_numbers={} failed={} backend_errors={} duplicates={} emitted={}",
                s.records, s.no_numbers, s.failed, s.backend_errors, s.duplicates, s.emitted
            );
            match out {
                Some(path) => save_mined(&outcome.templates, &path)?,
                None => write_output(None, &numtest::jsonl::to_string(&outcome.templates))?,
            }
        }
        Command::ListFormats => {
            let text: String = builtin_formats()
                .iter()
                .map(|f| format!("{}\t{}\n", f.pattern(), f.capability))
                .collect();
            write_output(None, &text)?;
        }
        Command::ListTemplates { language, templates } => {
            let mut all = builtin_templates();
            all.extend(starter_templates());
            for path in templates.iter().chain(&file.templates) {
                all.extend(load_templates(path)?);
            }
            let text: String = all
                .iter()
                .filter(|t| language.as_ref().is_none_or(|l| *l == t.language))
                .map(|t| format!("{}\t{}\t{}\t{}\n", t.id, t.capability, t.language, t.text))
                .collect();
            write_output(None, &text)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            let message = first.strip_prefix("error: ").unwrap_or(first);
            eprintln!("{}", CliError::usage(message));
            return ExitCode::from(Kind::Usage.code() as u8);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.kind.code() as u8)
        }
    }
}
