//! Layered CLI configuration: built-in defaults, then an optional TOML
//! file, then command-line flags. Later layers win field by field.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::client::EndpointConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CliConfig {
    pub endpoint: EndpointConfig,
    pub seed: u64,
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            endpoint: EndpointConfig::default(),
            seed: 0,
        }
    }
}

/// Flag-level overrides; `None` means "not given on the command line".
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub endpoint_url: Option<String>,
    pub model: Option<String>,
    pub seed: Option<u64>,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Unreadable {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("config file {path} is not valid TOML: {source}")]
    Invalid {
        path: String,
        #[source]
        source: toml::de::Error,
    },
}

pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<CliConfig, ConfigError> {
    let mut config = CliConfig::default();
    if let Some(path) = path {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Unreadable {
            path: path.display().to_string(),
            source,
        })?;
        config = toml::from_str(&text).map_err(|source| ConfigError::Invalid {
            path: path.display().to_string(),
            source,
        })?;
    }
    if let Some(url) = &overrides.endpoint_url {
        config.endpoint.url = url.clone();
    }
    if let Some(model) = &overrides.model {
        config.endpoint.model = model.clone();
    }
    if let Some(seed) = overrides.seed {
        config.seed = seed;
    }
    Ok(config)
}

/// Effective configuration as TOML, for `--show-config`.
pub fn show(config: &CliConfig) -> String {
    toml::to_string_pretty(config).expect("config serializes")
}
