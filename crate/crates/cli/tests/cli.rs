use std::path::Path;
use std::process::{Command, Output};

fn numtest(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_numtest"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gen_suite_is_deterministic() {
    let args = ["gen-suite", "--seed", "11", "--directions", "en-de,en-zh", "--count", "Integers=5"];
    let a = numtest(&args);
    let b = numtest(&args);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
    let other = numtest(&["gen-suite", "--seed", "12", "--directions", "en-de,en-zh", "--count", "Integers=5"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn perfect_mock_scores_full_marks() {
    let dir = tempfile::tempdir().unwrap();
    let out = numtest(&[
        "run", "--seed", "7", "--directions", "en-de", "--backend", "mock:Perfect", "--out-dir", p(dir.path()),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let grid = String::from_utf8(out.stdout).unwrap();
    let row = grid.lines().find(|l| l.starts_with("En→De")).expect("direction row");
    let cells: Vec<&str> = row.split('|').skip(1).map(str::trim).collect();
    assert_eq!(cells, ["100.0"; 5]);
    assert_eq!(std::fs::read_to_string(dir.path().join("report.txt")).unwrap(), grid);
}

#[test]
fn gate_fails_on_low_pass_rate() {
    let dir = tempfile::tempdir().unwrap();
    let out = numtest(&[
        "run", "--seed", "7", "--directions", "en-de", "--backend", "mock:DropDigit", "--count", "Integers=5",
        "--count", "Decimals=5", "--count", "Numerals=5", "--count", "Separators=5", "--min-pass-rate", "50",
        "--out-dir", p(dir.path()),
    ]);
    assert_eq!(code(&out), 7);
    let err = stderr(&out);
    assert!(err.starts_with("error kind=gate code=7:"), "{err}");
    assert_eq!(err.trim_end().lines().count(), 1);
}

#[test]
fn run_matches_the_individual_commands() {
    let dir = tempfile::tempdir().unwrap();
    let run_dir = dir.path().join("run");
    let suite_args = ["--seed", "3", "--directions", "en-de,de-en", "--count", "Numerals=8"];
    let backends = ["--backend", "mock:Perfect", "--backend", "mock:SwapDigits"];

    let mut run: Vec<&str> = vec!["run"];
    run.extend(suite_args);
    run.extend(backends);
    run.extend(["--out-dir", p(&run_dir)]);
    let run_out = numtest(&run);
    assert_eq!(code(&run_out), 0, "{}", stderr(&run_out));

    let suite = dir.path().join("suite.jsonl");
    let results = dir.path().join("results.jsonl");
    let verdicts = dir.path().join("verdicts.jsonl");
    let report = dir.path().join("report.txt");
    let mut gen: Vec<&str> = vec!["gen-suite"];
    gen.extend(suite_args);
    gen.extend(["--out", p(&suite)]);
    let mut translate: Vec<&str> = vec!["translate", "--suite", p(&suite)];
    translate.extend(backends);
    translate.extend(["--out", p(&results)]);
    for args in [
        gen,
        translate,
        vec!["judge", "--suite", p(&suite), "--results", p(&results), "--out", p(&verdicts)],
        vec!["report", "--verdicts", p(&verdicts), "--out", p(&report)],
    ] {
        let out = numtest(&args);
        assert_eq!(code(&out), 0, "{args:?}: {}", stderr(&out));
    }

    for name in ["suite.jsonl", "results.jsonl", "verdicts.jsonl", "report.txt"] {
        let a = std::fs::read(run_dir.join(name)).unwrap();
        let b = std::fs::read(dir.path().join(name)).unwrap();
        assert!(a == b, "{name} differs");
    }
    assert_eq!(run_out.stdout, std::fs::read(&report).unwrap());
}

#[test]
fn unknown_direction_is_a_language_error() {
    let out = numtest(&["gen-suite", "--seed", "1", "--directions", "en-xx"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("kind=language"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(code(&numtest(&["gen-suite"])), 2);
    assert_eq!(code(&numtest(&["frobnicate"])), 2);
    assert_eq!(code(&numtest(&["gen-suite", "--seed", "1", "--count", "Integers"])), 2);
    assert_eq!(code(&numtest(&["translate", "--suite", "x.jsonl", "--backend", "mock:Nope"])), 2);
}

#[test]
fn missing_api_key_is_reported_before_any_request() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("http.toml");
    std::fs::write(
        &config,
        r#"
endpoint = "http://127.0.0.1:9/translate"
body = '{"q":"{text}"}'
response_path = "text"
headers = { Authorization = "Bearer ${NUMTEST_TEST_UNSET_KEY}" }
"#,
    )
    .unwrap();
    let suite = dir.path().join("suite.jsonl");
    let gen = numtest(&["gen-suite", "--seed", "1", "--directions", "en-de", "--count", "Integers=2", "--out", p(&suite)]);
    assert_eq!(code(&gen), 0, "{}", stderr(&gen));
    let out = numtest(&["translate", "--suite", p(&suite), "--backend", "http", "--http-config", p(&config)]);
    assert_eq!(code(&out), 4, "{}", stderr(&out));
    assert!(stderr(&out).contains("NUMTEST_TEST_UNSET_KEY"));
}

#[test]
fn malformed_input_is_a_schema_error() {
    let dir = tempfile::tempdir().unwrap();
    let verdicts = dir.path().join("verdicts.jsonl");
    std::fs::write(&verdicts, "{\"not\": \"a verdict\"}\n").unwrap();
    let out = numtest(&["report", "--verdicts", p(&verdicts)]);
    assert_eq!(code(&out), 5);
    assert!(stderr(&out).contains("kind=schema"));

    let config = dir.path().join("numtest.toml");
    std::fs::write(&config, "sead = 4\n").unwrap();
    assert_eq!(code(&numtest(&["--config", p(&config), "list-formats"])), 5);
}

#[test]
fn missing_file_is_an_io_error() {
    let out = numtest(&["report", "--verdicts", "/nonexistent/verdicts.jsonl"]);
    assert_eq!(code(&out), 6);
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("numtest.toml");
    std::fs::write(&config, "seed = 5\ndirections = [\"en-zh\"]\ncounts = { Integers = 3, Decimals = 0, Numerals = 0, Separators = 0 }\n")
        .unwrap();
    let out = numtest(&["--config", p(&config), "gen-suite"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.contains("en-zh"));
}

#[test]
fn mine_reference_mode_reads_a_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus.tsv");
    std::fs::write(
        &corpus,
        "Es wurden 1.234 Fälle gemeldet.\t1,234 cases were reported.\nKeine Zahlen hier.\tNo numbers here.\n",
    )
    .unwrap();
    let out = numtest(&["mine", "--corpus", p(&corpus), "--direction", "de-en"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 1, "{text}");
    assert!(text.contains("[NUM]"));
    assert!(stderr(&out).contains("no_numbers=1"));
}

#[test]
fn listings_are_tab_separated() {
    let formats = String::from_utf8(numtest(&["list-formats"]).stdout).unwrap();
    assert!(formats.lines().count() >= 20);
    assert!(formats.lines().all(|l| l.split('\t').count() == 2));
    let templates = String::from_utf8(numtest(&["list-templates", "--language", "zh"]).stdout).unwrap();
    assert!(!templates.is_empty());
    assert!(templates.lines().all(|l| l.split('\t').nth(2) == Some("zh")));
}
