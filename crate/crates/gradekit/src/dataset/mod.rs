//! Interaction-log ingestion, behavioral curation, splitting, statistics and
//! SFT export.

pub mod curate;
pub mod events;
pub mod sft;
pub mod split;
pub mod stats;

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use curate::{curate, CuratedRow};
pub use events::{completion_rate, CompletionRate};
pub use sft::export_sft;
pub use split::{split, DatasetSplit};
pub use stats::{dataset_stats, StatsReport};

use crate::tool_schema::Tool;

/// One logged teacher call for one tool, straight from the interaction log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteractionRecord {
    pub intent_id: String,
    pub intent: String,
    pub tool: Tool,
    /// Raw model text (rationale + parameters), parsed during curation.
    pub output: String,
    pub exports: u64,
    pub calls: u64,
    pub ts: String,
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read log file: {0}")]
    UnreadableFile(String),
    #[error("schema violation: {malformed} of {total} lines malformed (over 50%)")]
    SchemaViolation { malformed: usize, total: usize },
}

/// Ingest report: what was kept and what was dropped.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct IngestReport {
    pub total_lines: usize,
    pub malformed: usize,
    pub invariant_violations: usize,
}

/// Parses a newline-delimited interaction log. Malformed lines are counted,
/// not fatal, unless they are the majority (which indicates a wrong file).
pub fn ingest(path: &Path) -> Result<(Vec<InteractionRecord>, IngestReport), IngestError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| IngestError::UnreadableFile(e.to_string()))?;
    ingest_text(&text)
}

pub fn ingest_text(text: &str) -> Result<(Vec<InteractionRecord>, IngestReport), IngestError> {
    let mut records = Vec::new();
    let mut report = IngestReport::default();
    for line in text.lines() {
        if line.trim().is_empty() {
            continue;
        }
        report.total_lines += 1;
        match serde_json::from_str::<InteractionRecord>(line) {
            Ok(rec) => {
                if rec.exports > rec.calls || rec.calls == 0 {
                    report.invariant_violations += 1;
                } else {
                    records.push(rec);
                }
            }
            Err(_) => report.malformed += 1,
        }
    }
    if report.total_lines > 0 && report.malformed * 2 > report.total_lines {
        return Err(IngestError::SchemaViolation {
            malformed: report.malformed,
            total: report.total_lines,
        });
    }
    Ok((records, report))
}

/// Intent identity: case-folded, whitespace-normalized text.
pub fn normalize_intent(intent: &str) -> String {
    intent
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}
