//! A generic JSON-over-HTTP backend. Request bodies are filled from a
//! template and the translation is picked out of the response by a path.

use std::collections::BTreeMap;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Backend, BackendError, TranslationRequest};

fn default_method() -> String {
    "POST".to_string()
}

fn default_timeout() -> u64 {
    30
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HttpConfig {
    /// Backend id used in results and reports.
    #[serde(default = "HttpConfig::default_name")]
    pub name: String,
    pub endpoint: String,
    #[serde(default = "default_method")]
    pub method: String,
    /// Header values may reference environment variables as `${NAME}`.
    #[serde(default)]
    pub headers: BTreeMap<String, String>,
    /// JSON body with `{text}`, `{source_lang}` and `{target_lang}` slots.
    pub body: String,
    /// Where the translation sits in the response, e.g. `translations[0].text`.
    pub response_path: String,
    /// Maps language tags to the codes the service expects.
    #[serde(default)]
    pub language_codes: BTreeMap<String, String>,
    #[serde(default = "default_timeout")]
    pub timeout_secs: u64,
}

impl HttpConfig {
    fn default_name() -> String {
        "http".to_string()
    }
}

#[derive(Debug)]
pub struct HttpBackend {
    config: HttpConfig,
    agent: ureq::Agent,
}

/// Replaces `${NAME}` with the variable's value.
fn interpolate_env(text: &str, lookup: &dyn Fn(&str) -> Option<String>) -> Result<String, BackendError> {
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    while let Some(start) = rest.find("${") {
        out.push_str(&rest[..start]);
        let after = &rest[start + 2..];
        let end = after
            .find('}')
            .ok_or_else(|| BackendError::Misconfigured(format!("unterminated ${{ in {text:?}")))?;
        let name = &after[..end];
        out.push_str(&lookup(name).ok_or_else(|| BackendError::MissingApiKey(name.to_string()))?);
        rest = &after[end + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

fn json_escaped(text: &str) -> String {
    let quoted = serde_json::to_string(text).expect("strings serialize");
    quoted[1..quoted.len() - 1].to_string()
}

/// Follows `a.b[0].c` through a JSON value.
fn select<'v>(value: &'v Value, path: &str) -> Option<&'v Value> {
    let mut current = value;
    for part in path.split('.').filter(|p| !p.is_empty()) {
        let (key, indices) = match part.find('[') {
            Some(i) => (&part[..i], &part[i..]),
            None => (part, ""),
        };
        if !key.is_empty() {
            current = current.get(key)?;
        }
        for index in indices.split('[').filter(|s| !s.is_empty()) {
            let n: usize = index.strip_suffix(']')?.parse().ok()?;
            current = current.get(n)?;
        }
    }
    Some(current)
}

impl HttpBackend {
    pub fn new(config: HttpConfig) -> Result<Self, BackendError> {
        let method = config.method.to_ascii_uppercase();
        if method != "POST" && method != "PUT" {
            return Err(BackendError::Misconfigured(format!("unsupported method {}", config.method)));
        }
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(config.timeout_secs)))
            .http_status_as_error(false)
            .build()
            .into();
        Ok(HttpBackend {
            config: HttpConfig { method, ..config },
            agent,
        })
    }

    fn env(name: &str) -> Option<String> {
        std::env::var(name).ok()
    }

    fn code<'a>(&'a self, tag: &'a str) -> &'a str {
        self.config.language_codes.get(tag).map_or(tag, String::as_str)
    }

    fn body_for(&self, request: &TranslationRequest) -> String {
        self.config
            .body
            .replace("{text}", &json_escaped(&request.source_sentence))
            .replace("{source_lang}", &json_escaped(self.code(&request.direction.source)))
            .replace("{target_lang}", &json_escaped(self.code(&request.direction.target)))
    }

    fn resolved_headers(&self) -> Result<Vec<(String, String)>, BackendError> {
        self.config
            .headers
            .iter()
            .map(|(k, v)| Ok((k.clone(), interpolate_env(v, &Self::env)?)))
            .collect()
    }
}

impl Backend for HttpBackend {
    fn id(&self) -> String {
        self.config.name.clone()
    }

    fn is_remote(&self) -> bool {
        true
    }

    fn preflight(&self) -> Result<(), BackendError> {
        interpolate_env(&self.config.endpoint, &Self::env)?;
        self.resolved_headers().map(|_| ())
    }

    fn translate(&self, request: &TranslationRequest) -> Result<String, BackendError> {
        let endpoint = interpolate_env(&self.config.endpoint, &Self::env)?;
        let mut builder = ureq::http::Request::builder()
            .method(self.config.method.as_str())
            .uri(&endpoint)
            .header("Content-Type", "application/json");
        for (name, value) in self.resolved_headers()? {
            builder = builder.header(name, value);
        }
        let http_request = builder
            .body(self.body_for(request))
            .map_err(|e| BackendError::Misconfigured(e.to_string()))?;

        let mut response = self.agent.run(http_request).map_err(|e| match e {
            ureq::Error::BadUri(m) => BackendError::Misconfigured(format!("bad endpoint: {m}")),
            other => BackendError::Transport(other.to_string()),
        })?;
        let status = response.status().as_u16();
        let text = response
            .body_mut()
            .read_to_string()
            .map_err(|e| BackendError::Transport(e.to_string()))?;
        if !(200..300).contains(&status) {
            let mut body = text;
            body.truncate(200);
            return Err(BackendError::Status { status, body });
        }
        let json: Value = serde_json::from_str(&text).map_err(|e| BackendError::MalformedResponse(e.to_string()))?;
        select(&json, &self.config.response_path)
            .and_then(Value::as_str)
            .map(String::from)
            .ok_or_else(|| BackendError::MalformedResponse(format!("no string at {}", self.config.response_path)))
    }
}
