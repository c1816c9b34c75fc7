//! Supervised fine-tuning export: one prompt/completion pair per tool per
//! curated row, rendered from the bundled student templates.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::llm_io::{render_prompt, PromptTemplate, RenderError, Role};
use crate::tool_schema::{canonical_serialize_tool, Tool};

use super::CuratedRow;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SftRecord {
    pub prompt: String,
    pub completion: String,
}

#[derive(Debug, Error)]
pub enum SftError {
    #[error("row {index}: {source}")]
    Render {
        index: usize,
        #[source]
        source: RenderError,
    },
}

/// Canonical completion string for one tool of one row.
///
/// Used tools serialize their parameters; an unused filter is taught
/// explicitly as the "none" preset, while unused adjust / selective tools
/// are taught as the empty string.
pub fn completion_for(row: &CuratedRow, tool: Tool) -> String {
    match canonical_serialize_tool(&row.plan, tool) {
        Some(json) => format!("Parameters: {json}"),
        None => match tool {
            Tool::Filter => r#"Parameters: {"name":"none","intensity":0}"#.to_string(),
            _ => String::new(),
        },
    }
}

/// Produces three records per row, in row order, tools ordered
/// adjust, selective, filter.
pub fn export_sft(rows: &[CuratedRow]) -> Result<Vec<SftRecord>, SftError> {
    let templates: Vec<(Tool, PromptTemplate)> = Tool::ALL
        .iter()
        .map(|&t| {
            (
                t,
                PromptTemplate::bundled(Role::Student, Some(t))
                    .expect("student templates are bundled"),
            )
        })
        .collect();

    let mut out = Vec::with_capacity(rows.len() * templates.len());
    for (index, row) in rows.iter().enumerate() {
        for (tool, template) in &templates {
            let prompt = render_prompt(template, &row.intent)
                .map_err(|source| SftError::Render { index, source })?;
            out.push(SftRecord {
                prompt,
                completion: completion_for(row, *tool),
            });
        }
    }
    Ok(out)
}
