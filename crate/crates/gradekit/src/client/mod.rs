//! Pluggable clients for the external model roles: completion endpoints,
//! the image-pair comparator, and deterministic stubs for offline tests.
//!
//! The wire format is a chat-completions-style POST. Transport is behind a
//! trait so tests can inject failures without any network access.

pub mod compare;
pub mod stub;

use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use compare::{compare_images, tally_wins, Comparison, Winner, WinnerTally};
pub use stub::StubModel;

/// Environment variable consulted for the API key; never stored in config.
pub const API_KEY_ENV: &str = "GRADEKIT_API_KEY";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EndpointConfig {
    pub url: String,
    pub model: String,
    pub temperature: f64,
    pub max_tokens: u32,
    pub top_p: f64,
    pub timeout_s: u64,
    pub retries: u32,
    /// Base backoff in milliseconds; doubles per retry (1s, 2s, 4s by default).
    pub backoff_ms: u64,
}

impl Default for EndpointConfig {
    fn default() -> Self {
        EndpointConfig {
            url: String::new(),
            model: String::new(),
            temperature: 0.0,
            max_tokens: 1500,
            top_p: 1.0,
            timeout_s: 30,
            retries: 3,
            backoff_ms: 1000,
        }
    }
}

#[derive(Debug, Error)]
pub enum ClientError {
    #[error("request timed out")]
    Timeout,
    #[error("http error: status {0}")]
    HttpError(u16),
    #[error("retries exhausted after {attempts} attempts: {last}")]
    ExhaustedRetries { attempts: u32, last: String },
    #[error("no prompt pattern matched and the stub has no default response")]
    NoStubMatch,
    #[error("malformed endpoint reply: {0}")]
    MalformedReply(String),
    #[error("no winner declaration found in comparator reply")]
    UndecidableReply,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Outcome of one transport attempt.
#[derive(Debug)]
pub enum TransportReply {
    Ok(String),
    /// Non-2xx HTTP status with the body, for error reporting.
    Status(u16, String),
}

#[derive(Debug, Error)]
pub enum TransportError {
    #[error("timeout")]
    Timeout,
    #[error("connection failed: {0}")]
    Connect(String),
}

/// One HTTP POST (or a test double standing in for it).
pub trait Transport {
    fn post(&self, url: &str, body: &str, timeout: Duration) -> Result<TransportReply, TransportError>;
}

/// Production transport over HTTP.
pub struct HttpTransport;

impl Transport for HttpTransport {
    fn post(&self, url: &str, body: &str, timeout: Duration) -> Result<TransportReply, TransportError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(timeout)
            .build()
            .map_err(|e| TransportError::Connect(e.to_string()))?;
        let mut req = client
            .post(url)
            .header("content-type", "application/json")
            .body(body.to_string());
        if let Ok(key) = std::env::var(API_KEY_ENV) {
            req = req.header("authorization", format!("Bearer {key}"));
        }
        match req.send() {
            Ok(resp) => {
                let status = resp.status().as_u16();
                let text = resp.text().unwrap_or_default();
                if (200..300).contains(&status) {
                    Ok(TransportReply::Ok(text))
                } else {
                    Ok(TransportReply::Status(status, text))
                }
            }
            Err(e) if e.is_timeout() => Err(TransportError::Timeout),
            Err(e) => Err(TransportError::Connect(e.to_string())),
        }
    }
}

/// Builds the byte-stable chat-completions request body. Key order is fixed
/// so identical (config, prompt) pairs serialize identically.
pub fn request_body(config: &EndpointConfig, prompt: &str) -> String {
    #[derive(Serialize)]
    struct Message<'a> {
        role: &'a str,
        content: &'a str,
    }
    #[derive(Serialize)]
    struct Body<'a> {
        model: &'a str,
        messages: Vec<Message<'a>>,
        temperature: f64,
        max_tokens: u32,
        top_p: f64,
    }
    serde_json::to_string(&Body {
        model: &config.model,
        messages: vec![Message {
            role: "user",
            content: prompt,
        }],
        temperature: config.temperature,
        max_tokens: config.max_tokens,
        top_p: config.top_p,
    })
    .expect("body serialization is infallible")
}

fn digest(text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    let out = hasher.finalize();
    out.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Extracts the assistant text from a chat-completions reply body.
fn extract_completion(body: &str) -> Result<String, ClientError> {
    let value: serde_json::Value =
        serde_json::from_str(body).map_err(|e| ClientError::MalformedReply(e.to_string()))?;
    value["choices"][0]["message"]["content"]
        .as_str()
        .map(|s| s.to_string())
        .ok_or_else(|| ClientError::MalformedReply("missing choices[0].message.content".to_string()))
}

/// Sends `prompt` through `transport`, retrying transient failures (timeouts,
/// connection errors, 5xx) with exponential backoff. 4xx fails immediately.
pub fn complete_with(
    transport: &dyn Transport,
    config: &EndpointConfig,
    prompt: &str,
) -> Result<String, ClientError> {
    let body = request_body(config, prompt);
    log::debug!("request digest {}", digest(&body));
    let timeout = Duration::from_secs(config.timeout_s);
    let attempts = config.retries.max(1);
    let mut last_failure = String::new();
    for attempt in 0..attempts {
        if attempt > 0 {
            let backoff = config.backoff_ms << (attempt - 1);
            std::thread::sleep(Duration::from_millis(backoff));
        }
        match transport.post(&config.url, &body, timeout) {
            Ok(TransportReply::Ok(reply)) => {
                let text = extract_completion(&reply)?;
                log::debug!("response digest {}", digest(&text));
                return Ok(text);
            }
            Ok(TransportReply::Status(status, _)) if (500..600).contains(&status) => {
                last_failure = format!("status {status}");
            }
            Ok(TransportReply::Status(status, _)) => {
                return Err(ClientError::HttpError(status));
            }
            Err(TransportError::Timeout) => last_failure = "timeout".to_string(),
            Err(TransportError::Connect(msg)) => last_failure = format!("connect: {msg}"),
        }
    }
    Err(ClientError::ExhaustedRetries {
        attempts,
        last: last_failure,
    })
}

/// A model endpoint or its offline stand-in.
pub trait ModelClient {
    fn complete(&self, prompt: &str) -> Result<String, ClientError>;
}

/// HTTP-backed client.
pub struct HttpClient {
    pub config: EndpointConfig,
    transport: Box<dyn Transport>,
}

impl HttpClient {
    pub fn new(config: EndpointConfig) -> Self {
        HttpClient {
            config,
            transport: Box::new(HttpTransport),
        }
    }

    pub fn with_transport(config: EndpointConfig, transport: Box<dyn Transport>) -> Self {
        HttpClient { config, transport }
    }
}

impl ModelClient for HttpClient {
    fn complete(&self, prompt: &str) -> Result<String, ClientError> {
        complete_with(self.transport.as_ref(), &self.config, prompt)
    }
}
