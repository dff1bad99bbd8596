//! The shipped starter templates are exactly what mining the shipped
//! corpora yields. Run with `NUMTEST_BLESS=1` to regenerate them.

use std::path::PathBuf;

use numtest::miner::{mine_templates, read_corpus, MineMode};
use numtest::suite::{starter_templates, Capability, Provenance, TestTemplate};
use numtest::LanguageRegistry;

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(rel)
}

fn mined(pair: &str) -> Vec<TestTemplate> {
    let records = read_corpus(&data(&format!("corpora/{pair}.tsv")), true).unwrap();
    let outcome = mine_templates(
        &records,
        &pair.parse().unwrap(),
        &LanguageRegistry::builtin(),
        MineMode::Reference,
        None,
    )
    .unwrap();
    assert!(outcome.stats.failed >= 3, "{pair}: corrupted pairs must be rejected");
    outcome.templates.into_iter().map(|t| t.template).collect()
}

#[test]
fn shipped_templates_match_the_corpora() {
    let bless = std::env::var_os("NUMTEST_BLESS").is_some();
    for (pair, file) in [("de-en", "templates/de.jsonl"), ("zh-en", "templates/zh.jsonl")] {
        let templates = mined(pair);
        let text: String = templates
            .iter()
            .map(|t| serde_json::to_string(t).unwrap() + "\n")
            .collect();
        if bless {
            std::fs::write(data(file), &text).unwrap();
        } else {
            assert_eq!(std::fs::read_to_string(data(file)).unwrap(), text, "{file} is stale");
        }
        for cap in Capability::ALL {
            assert!(
                templates.iter().any(|t| t.capability == cap),
                "{pair} has no {cap} template"
            );
        }
    }
}

#[test]
fn starter_templates_are_mined() {
    let templates = starter_templates();
    assert!(!templates.is_empty());
    assert!(templates.iter().all(|t| t.provenance == Provenance::Mined));
    assert!(templates.iter().all(|t| t.text.contains("[NUM]")));
}
