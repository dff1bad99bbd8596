//! The end-to-end run: build a suite, translate it with each backend, judge
//! every output and aggregate a report.

use std::path::Path;

use thiserror::Error;

use crate::backends::{save_results, translate_batch, Backend, BackendError, BatchOptions, TranslationRequest, TranslationResult};
use crate::evaluator::{build_report, judge_all, save_verdicts, GridOptions, JudgeError, Report, ReportError, Verdict};
use crate::jsonl::JsonlError;
use crate::lang::LanguageRegistry;
use crate::suite::{build_suite, save_suite, SuiteConfig, SuiteError, TestCase};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Suite(#[from] SuiteError),
    #[error("{backend}: {source}")]
    Backend {
        backend: String,
        #[source]
        source: BackendError,
    },
    #[error(transparent)]
    Judge(#[from] JudgeError),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error(transparent)]
    Io(#[from] JsonlError),
}

#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub cases: Vec<TestCase>,
    pub results: Vec<TranslationResult>,
    pub verdicts: Vec<Verdict>,
    pub report: Report,
}

/// Translates `cases` with every backend in turn; results are grouped by
/// backend, each group in case order.
pub fn translate_cases(
    cases: &[TestCase],
    backends: &[&dyn Backend],
    options: &BatchOptions,
) -> Result<Vec<TranslationResult>, PipelineError> {
    let requests: Vec<TranslationRequest> = cases.iter().map(TranslationRequest::from_case).collect();
    let mut results = Vec::with_capacity(requests.len() * backends.len());
    for backend in backends {
        let batch = translate_batch(*backend, &requests, options).map_err(|source| PipelineError::Backend {
            backend: backend.id(),
            source,
        })?;
        results.extend(batch);
    }
    Ok(results)
}

pub fn run(
    config: &SuiteConfig,
    registry: &LanguageRegistry,
    seed: u64,
    backends: &[&dyn Backend],
    options: &BatchOptions,
) -> Result<RunArtifacts, PipelineError> {
    let cases = build_suite(config, registry, seed)?;
    let results = translate_cases(&cases, backends, options)?;
    let verdicts = judge_all(&cases, &results, registry)?;
    let report = build_report(&verdicts)?;
    Ok(RunArtifacts {
        cases,
        results,
        verdicts,
        report,
    })
}

impl RunArtifacts {
    /// Writes suite.jsonl, results.jsonl, verdicts.jsonl, report.json and
    /// report.txt into `dir`.
    pub fn write(&self, dir: &Path, grid: GridOptions) -> Result<(), JsonlError> {
        std::fs::create_dir_all(dir).map_err(|e| JsonlError::io(dir, e))?;
        save_suite(&self.cases, &dir.join("suite.jsonl"))?;
        save_results(&self.results, &dir.join("results.jsonl"))?;
        save_verdicts(&self.verdicts, &dir.join("verdicts.jsonl"))?;
        for (name, text) in [("report.json", self.report.to_json()), ("report.txt", self.report.render_grid(grid))] {
            let path = dir.join(name);
            std::fs::write(&path, text).map_err(|e| JsonlError::io(&path, e))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backends::{InjectedErrorKind, MockBackend};
    use crate::suite::Capability;

    fn small_config() -> SuiteConfig {
        let mut config = SuiteConfig::default();
        for plan in config.plans.values_mut() {
            plan.count = Some(6);
        }
        config
    }

    #[test]
    fn perfect_mock_passes_and_files_are_written() {
        let registry = LanguageRegistry::builtin();
        let mock = MockBackend::new(InjectedErrorKind::Perfect, registry.clone());
        let run = run(&small_config(), &registry, 7, &[&mock], &BatchOptions::default()).unwrap();
        assert_eq!(run.cases.len(), 24);
        assert!(run.verdicts.iter().all(|v| v.passed));
        assert_eq!(run.report.passed, 24);

        let dir = tempfile::tempdir().unwrap();
        run.write(dir.path(), GridOptions::default()).unwrap();
        for name in ["suite.jsonl", "results.jsonl", "verdicts.jsonl", "report.json", "report.txt"] {
            assert!(dir.path().join(name).is_file(), "{name}");
        }
    }

    #[test]
    fn several_backends_become_columns() {
        let registry = LanguageRegistry::builtin();
        let good = MockBackend::new(InjectedErrorKind::Perfect, registry.clone());
        let bad = MockBackend::new(InjectedErrorKind::OmitNumber, registry.clone());
        let run = run(&small_config(), &registry, 7, &[&good, &bad], &BatchOptions::default()).unwrap();
        assert_eq!(run.report.backends, vec!["mock:Perfect", "mock:OmitNumber"]);
        let direction = "en-de".parse().unwrap();
        let cell = run.report.cell(Capability::Integers, &direction, "mock:OmitNumber").unwrap();
        assert_eq!(cell.passed, 0);
    }
}
