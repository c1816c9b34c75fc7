//! Deterministic stand-in for a model endpoint.
//!
//! A stub is loaded from a script of (pattern, response) pairs. The first
//! pattern that occurs as a substring of the prompt wins; an optional default
//! catches everything else. Same prompt, same response, on every platform.

use std::path::Path;

use serde::Deserialize;

use super::{ClientError, ModelClient};

#[derive(Debug, Clone, Deserialize)]
struct ScriptLine {
    pattern: String,
    response: String,
}

#[derive(Debug, Clone, Default)]
pub struct StubModel {
    rules: Vec<(String, String)>,
    default: Option<String>,
}

impl StubModel {
    pub fn new() -> Self {
        StubModel::default()
    }

    pub fn rule(mut self, pattern: &str, response: &str) -> Self {
        self.rules.push((pattern.to_string(), response.to_string()));
        self
    }

    pub fn with_default(mut self, response: &str) -> Self {
        self.default = Some(response.to_string());
        self
    }

    /// Loads a script: newline-delimited JSON objects
    /// `{"pattern": "...", "response": "..."}`. An empty pattern acts as the
    /// default response.
    pub fn from_script(text: &str) -> Result<Self, ClientError> {
        let mut stub = StubModel::new();
        for (idx, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let parsed: ScriptLine = serde_json::from_str(line).map_err(|e| {
                ClientError::MalformedReply(format!("stub script line {}: {e}", idx + 1))
            })?;
            if parsed.pattern.is_empty() {
                stub.default = Some(parsed.response);
            } else {
                stub.rules.push((parsed.pattern, parsed.response));
            }
        }
        Ok(stub)
    }

    pub fn load(path: &Path) -> Result<Self, ClientError> {
        Self::from_script(&std::fs::read_to_string(path)?)
    }
}

impl ModelClient for StubModel {
    fn complete(&self, prompt: &str) -> Result<String, ClientError> {
        for (pattern, response) in &self.rules {
            if prompt.contains(pattern.as_str()) {
                return Ok(response.clone());
            }
        }
        self.default.clone().ok_or(ClientError::NoStubMatch)
    }
}
