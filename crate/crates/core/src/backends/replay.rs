use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Backend, BackendError, TranslationRequest};
use crate::jsonl::{self, JsonlError};
use crate::lang::Direction;

/// One line of a replay file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayEntry {
    pub direction: Direction,
    pub source: String,
    pub output: String,
}

/// Answers from stored translations keyed by (direction, source sentence).
#[derive(Debug, Clone, Default)]
pub struct ReplayBackend {
    table: HashMap<(Direction, String), String>,
}

impl ReplayBackend {
    pub fn new(entries: impl IntoIterator<Item = ReplayEntry>) -> Self {
        ReplayBackend {
            table: entries
                .into_iter()
                .map(|e| ((e.direction, e.source), e.output))
                .collect(),
        }
    }

    pub fn load(path: &Path) -> Result<Self, JsonlError> {
        Ok(Self::new(jsonl::read::<ReplayEntry>(path)?))
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

impl Backend for ReplayBackend {
    fn id(&self) -> String {
        "replay".to_string()
    }

    fn translate(&self, request: &TranslationRequest) -> Result<String, BackendError> {
        self.table
            .get(&(request.direction.clone(), request.source_sentence.clone()))
            .cloned()
            .ok_or(BackendError::NotInReplay)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn request(direction: &str, text: &str) -> TranslationRequest {
        TranslationRequest {
            case_id: "c".into(),
            direction: direction.parse().unwrap(),
            source_sentence: text.into(),
            numbers: Vec::new(),
            capability: None,
            seed: 0,
        }
    }

    #[test]
    fn lookup_and_miss() {
        let replay = ReplayBackend::new([ReplayEntry {
            direction: "en-de".parse().unwrap(),
            source: "There were 914 cases".into(),
            output: "Es gab 914 Fälle".into(),
        }]);
        assert_eq!(replay.translate(&request("en-de", "There were 914 cases")).unwrap(), "Es gab 914 Fälle");
        assert_eq!(replay.translate(&request("en-zh", "There were 914 cases")), Err(BackendError::NotInReplay));
        assert_eq!(replay.translate(&request("en-de", "other")).unwrap_err().to_string(), "not in replay");
    }

    #[test]
    fn loads_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("replay.jsonl");
        std::fs::write(&path, "{\"direction\":\"en-de\",\"source\":\"a 1\",\"output\":\"b 1\"}\n").unwrap();
        let replay = ReplayBackend::load(&path).unwrap();
        assert_eq!(replay.len(), 1);
        assert_eq!(replay.translate(&request("en-de", "a 1")).unwrap(), "b 1");
    }
}
