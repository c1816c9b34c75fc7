//! Pairwise image comparison through a multimodal endpoint.
//!
//! The judge sees the source image (A) and two candidates (B, C), describes
//! the transformations, then declares which candidate better represents the
//! user's intent. We parse the verdict from the final "Answer" sentence and
//! count wins per candidate.

use std::time::Duration;

use base64::Engine as _;
use serde::{Deserialize, Serialize};

use super::{ClientError, EndpointConfig, Transport, TransportError, TransportReply};
use crate::engine::image::{encode_ppm, Image};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Winner {
    B,
    C,
}

/// One adjudicated comparison, transcript retained for audit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Comparison {
    pub intent: String,
    pub winner: Winner,
    pub transcript: String,
}

pub const COMPARE_PROMPT: &str = "You are given three images: (A), (B), and (C). \
Describe the transformations of (B) and (C) from (A). \
Then choose which image (B) or (C) better represents the <user_request>";

/// Finds the winner label in the last "Answer" sentence, case-insensitive.
pub fn parse_winner(transcript: &str) -> Result<Winner, ClientError> {
    let lower = transcript.to_ascii_lowercase();
    let anchor = lower.rfind("answer").ok_or(ClientError::UndecidableReply)?;
    let tail = &lower[anchor..];
    let b = tail.find("(b)");
    let c = tail.find("(c)");
    match (b, c) {
        (Some(bp), Some(cp)) => Ok(if bp < cp { Winner::B } else { Winner::C }),
        (Some(_), None) => Ok(Winner::B),
        (None, Some(_)) => Ok(Winner::C),
        (None, None) => Err(ClientError::UndecidableReply),
    }
}

fn image_data_url(img: &Image) -> String {
    // PPM keeps the encoding dependency-free; endpoints that require PNG can
    // be fed files directly via the CLI instead.
    let bytes = encode_ppm(img);
    format!(
        "data:image/x-portable-pixmap;base64,{}",
        base64::engine::general_purpose::STANDARD.encode(bytes)
    )
}

/// Builds the multimodal request body: prompt text plus three inline images.
pub fn compare_request_body(
    config: &EndpointConfig,
    intent: &str,
    source: &Image,
    a: &Image,
    b: &Image,
) -> String {
    let prompt = COMPARE_PROMPT.replace("<user_request>", intent);
    let content = serde_json::json!([
        { "type": "text", "text": prompt },
        { "type": "image_url", "image_url": { "url": image_data_url(source) } },
        { "type": "image_url", "image_url": { "url": image_data_url(a) } },
        { "type": "image_url", "image_url": { "url": image_data_url(b) } },
    ]);
    serde_json::json!({
        "model": config.model,
        "messages": [{ "role": "user", "content": content }],
        "temperature": config.temperature,
        "max_tokens": config.max_tokens,
        "top_p": config.top_p,
    })
    .to_string()
}

/// A comparator backend: either a real multimodal endpoint or a stub.
pub trait Comparator {
    fn transcript(
        &self,
        config: &EndpointConfig,
        intent: &str,
        source: &Image,
        b: &Image,
        c: &Image,
    ) -> Result<String, ClientError>;
}

/// Endpoint-backed comparator.
pub struct TransportComparator<'a> {
    pub transport: &'a dyn Transport,
}

impl Comparator for TransportComparator<'_> {
    fn transcript(
        &self,
        config: &EndpointConfig,
        intent: &str,
        source: &Image,
        b: &Image,
        c: &Image,
    ) -> Result<String, ClientError> {
        let body = compare_request_body(config, intent, source, b, c);
        let timeout = Duration::from_secs(config.timeout_s);
        match self.transport.post(&config.url, &body, timeout) {
            Ok(TransportReply::Ok(reply)) => {
                let value: serde_json::Value = serde_json::from_str(&reply)
                    .map_err(|e| ClientError::MalformedReply(e.to_string()))?;
                value["choices"][0]["message"]["content"]
                    .as_str()
                    .map(|s| s.to_string())
                    .ok_or_else(|| {
                        ClientError::MalformedReply("missing completion text".to_string())
                    })
            }
            Ok(TransportReply::Status(status, _)) => Err(ClientError::HttpError(status)),
            Err(TransportError::Timeout) => Err(ClientError::Timeout),
            Err(TransportError::Connect(msg)) => Err(ClientError::ExhaustedRetries {
                attempts: 1,
                last: msg,
            }),
        }
    }
}

/// Stub comparator: matches the intent against a script of canned transcripts.
pub struct StubComparator {
    pub stub: super::StubModel,
}

impl Comparator for StubComparator {
    fn transcript(
        &self,
        _config: &EndpointConfig,
        intent: &str,
        _source: &Image,
        _b: &Image,
        _c: &Image,
    ) -> Result<String, ClientError> {
        use super::ModelClient;
        self.stub.complete(intent)
    }
}

/// Runs one comparison and parses the verdict.
pub fn compare_images(
    comparator: &dyn Comparator,
    config: &EndpointConfig,
    intent: &str,
    source: &Image,
    b: &Image,
    c: &Image,
) -> Result<Comparison, ClientError> {
    let transcript = comparator.transcript(config, intent, source, b, c)?;
    let winner = parse_winner(&transcript)?;
    Ok(Comparison {
        intent: intent.to_string(),
        winner,
        transcript,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct WinnerTally {
    pub b: usize,
    pub c: usize,
}

/// Counts wins per candidate. Binary verdicts, so no ties.
pub fn tally_wins(winners: &[Winner]) -> WinnerTally {
    let mut tally = WinnerTally::default();
    for w in winners {
        match w {
            Winner::B => tally.b += 1,
            Winner::C => tally.c += 1,
        }
    }
    tally
}
