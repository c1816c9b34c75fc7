//! Online completion-rate metric over a project event log.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Started,
    Exported,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectEvent {
    pub project_id: String,
    pub event: EventKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionRate {
    pub started: usize,
    pub exported: usize,
    pub rate: f64,
    /// Exports whose project never started: ignored, surfaced for review.
    pub orphan_exports: Vec<String>,
    pub malformed_lines: usize,
}

#[derive(Debug, Error)]
pub enum EventsError {
    #[error("cannot read event log {path}: {source}")]
    UnreadableFile {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("no started events in the log")]
    ZeroStarted,
}

/// Distinct exported projects over distinct started projects. Export events
/// for projects that never started do not count toward the numerator.
pub fn completion_rate_text(text: &str) -> Result<CompletionRate, EventsError> {
    let mut started = BTreeSet::new();
    let mut exported = BTreeSet::new();
    let mut malformed = 0usize;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        match serde_json::from_str::<ProjectEvent>(line) {
            Ok(ev) => match ev.event {
                EventKind::Started => {
                    started.insert(ev.project_id);
                }
                EventKind::Exported => {
                    exported.insert(ev.project_id);
                }
            },
            Err(_) => malformed += 1,
        }
    }
    if started.is_empty() {
        return Err(EventsError::ZeroStarted);
    }
    let orphan_exports: Vec<String> = exported
        .iter()
        .filter(|p| !started.contains(*p))
        .cloned()
        .collect();
    for p in &orphan_exports {
        log::warn!("export event for project {p} with no started event; ignored");
    }
    let completed = exported.iter().filter(|p| started.contains(*p)).count();
    Ok(CompletionRate {
        started: started.len(),
        exported: completed,
        rate: completed as f64 / started.len() as f64,
        orphan_exports,
        malformed_lines: malformed,
    })
}

pub fn completion_rate(path: &Path) -> Result<CompletionRate, EventsError> {
    let text = fs::read_to_string(path).map_err(|source| EventsError::UnreadableFile {
        path: path.display().to_string(),
        source,
    })?;
    completion_rate_text(&text)
}
