//! Prompt templating and robust parsing of raw model text.
//!
//! Templates ship as text assets, one per (role, tool), with a literal
//! `<user_request>` placeholder. Parsing is total: arbitrary byte input
//! yields either a [`ParsedToolOutput`] or a structured error, never a panic.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::tool_schema::{self, ClampWarning, EditPlan, SchemaError, Tool};

pub const PLACEHOLDER: &str = "<user_request>";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Teacher,
    Student,
    Augmenter,
}

/// A prompt template for one (role, tool) pair. The augmenter has no tool.
#[derive(Debug, Clone)]
pub struct PromptTemplate {
    pub role: Role,
    pub tool: Option<Tool>,
    pub text: &'static str,
}

impl PromptTemplate {
    /// The bundled template for a (role, tool) pair. Returns `None` for
    /// combinations that do not exist (e.g. augmenter with a tool).
    pub fn bundled(role: Role, tool: Option<Tool>) -> Option<PromptTemplate> {
        let text = match (role, tool) {
            (Role::Teacher, Some(Tool::Adjust)) => {
                include_str!("../assets/prompts/teacher_adjust.txt")
            }
            (Role::Teacher, Some(Tool::Selective)) => {
                include_str!("../assets/prompts/teacher_selective.txt")
            }
            (Role::Teacher, Some(Tool::Filter)) => {
                include_str!("../assets/prompts/teacher_filter.txt")
            }
            (Role::Student, Some(Tool::Adjust)) => {
                include_str!("../assets/prompts/student_adjust.txt")
            }
            (Role::Student, Some(Tool::Selective)) => {
                include_str!("../assets/prompts/student_selective.txt")
            }
            (Role::Student, Some(Tool::Filter)) => {
                include_str!("../assets/prompts/student_filter.txt")
            }
            (Role::Augmenter, None) => include_str!("../assets/prompts/augmenter.txt"),
            _ => return None,
        };
        Some(PromptTemplate { role, tool, text })
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum RenderError {
    #[error("intent is empty after trimming")]
    EmptyIntent,
}

/// Substitutes the intent into the template. No other mutation.
pub fn render_prompt(template: &PromptTemplate, intent: &str) -> Result<String, RenderError> {
    if intent.trim().is_empty() {
        return Err(RenderError::EmptyIntent);
    }
    Ok(template.text.replace(PLACEHOLDER, intent))
}

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("no JSON object found in model output")]
    NoObjectFound,
    #[error("malformed JSON object at byte {0}")]
    MalformedObject(usize),
}

/// Raw parse result for one tool call: rationale (teacher only), the
/// loosely-typed parameter tree, and any diagnostics gathered on the way.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedToolOutput {
    pub tool: Tool,
    pub rationale: Option<String>,
    /// `None` means the model signalled "tool not used".
    pub raw_params: Option<Value>,
    pub parse_diagnostics: Vec<String>,
}

impl ParsedToolOutput {
    pub fn not_used(tool: Tool) -> Self {
        ParsedToolOutput {
            tool,
            rationale: None,
            raw_params: None,
            parse_diagnostics: Vec::new(),
        }
    }
}

/// ASCII case-insensitive substring search; byte-offset safe for any input.
pub fn find_ci(haystack: &str, needle: &str) -> Option<usize> {
    let h = haystack.as_bytes();
    let n = needle.as_bytes();
    if n.is_empty() || h.len() < n.len() {
        return None;
    }
    (0..=h.len() - n.len()).find(|&i| h[i..i + n.len()].eq_ignore_ascii_case(n))
}

/// Case-insensitive search for the earliest output marker.
fn find_marker(text: &str) -> Option<(usize, usize)> {
    ["json:", "parameters:"]
        .iter()
        .filter_map(|m| find_ci(text, m).map(|pos| (pos, pos + m.len())))
        .min()
}

/// First well-formed JSON object at or after `from`. Tries every `{` in
/// order; reports the first `{` position when none parses.
fn first_object(text: &str, from: usize) -> Result<Option<(Value, usize)>, ParseError> {
    let tail = &text[from..];
    let mut first_brace: Option<usize> = None;
    for (off, _) in tail.match_indices('{') {
        let pos = from + off;
        first_brace.get_or_insert(pos);
        let mut stream = serde_json::Deserializer::from_str(&text[pos..]).into_iter::<Value>();
        if let Some(Ok(value)) = stream.next() {
            if value.is_object() {
                return Ok(Some((value, pos)));
            }
        }
    }
    match first_brace {
        Some(pos) => Err(ParseError::MalformedObject(pos)),
        None => Ok(None),
    }
}

/// Extracts the rationale (text between a `TOOL:` header and the output
/// marker) and the first well-formed object after the marker.
///
/// Tolerates surrounding prose, code fences and trailing text. For student
/// outputs an empty reply signals "tool not used". When no marker is present
/// the first object anywhere in the text is taken.
pub fn parse_model_output(text: &str, role: Role, tool: Tool) -> Result<ParsedToolOutput, ParseError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(ParsedToolOutput::not_used(tool));
    }

    let marker = find_marker(text);
    let mut diagnostics = Vec::new();

    let rationale = if role == Role::Teacher {
        find_ci(text, "tool:").and_then(|tpos| {
            let start = tpos + "tool:".len();
            let end = marker.map(|(mpos, _)| mpos).unwrap_or(text.len());
            if end > start {
                let r = text[start..end].trim();
                if r.is_empty() {
                    None
                } else {
                    Some(r.to_string())
                }
            } else {
                None
            }
        })
    } else {
        None
    };

    let search_from = match marker {
        Some((_, after)) => after,
        None => {
            diagnostics.push("no output marker found; scanning whole text".to_string());
            0
        }
    };

    match first_object(text, search_from)? {
        Some((value, _)) => {
            let raw = if value.as_object().map(|o| o.is_empty()).unwrap_or(false) {
                // Empty object is the "tool not used" marker.
                None
            } else {
                Some(value)
            };
            Ok(ParsedToolOutput {
                tool,
                rationale,
                raw_params: raw,
                parse_diagnostics: diagnostics,
            })
        }
        None => {
            // Marker present but nothing after it: treat "Parameters:" followed
            // by blank output as a not-used signal; otherwise it's an error.
            if marker.is_some() && text[search_from..].trim().is_empty() {
                let mut out = ParsedToolOutput::not_used(tool);
                out.rationale = rationale;
                out.parse_diagnostics = diagnostics;
                Ok(out)
            } else {
                Err(ParseError::NoObjectFound)
            }
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum AssembleError {
    #[error("invalid {tool} parameters: {source}")]
    Invalid {
        tool: Tool,
        #[source]
        source: SchemaError,
    },
}

/// Merges per-tool parse results into one validated plan. Not-used markers
/// (absent params, empty object, filter name "none") become absent tools.
pub fn assemble_plan(
    outputs: &[ParsedToolOutput],
) -> Result<(EditPlan, Vec<ClampWarning>), AssembleError> {
    let mut plan = EditPlan::default();
    let mut warnings = Vec::new();
    for out in outputs {
        let Some(raw) = &out.raw_params else { continue };
        match out.tool {
            Tool::Adjust => {
                let (p, w) = tool_schema::validate_adjust(raw).map_err(|source| {
                    AssembleError::Invalid {
                        tool: Tool::Adjust,
                        source,
                    }
                })?;
                warnings.extend(w);
                if p.is_used() {
                    plan.adjust = Some(p);
                }
            }
            Tool::Selective => {
                let (p, w) = tool_schema::validate_selective(raw).map_err(|source| {
                    AssembleError::Invalid {
                        tool: Tool::Selective,
                        source,
                    }
                })?;
                warnings.extend(w);
                if p.is_used() {
                    plan.selective = Some(p);
                }
            }
            Tool::Filter => {
                let (p, w) = tool_schema::validate_filter(raw).map_err(|source| {
                    AssembleError::Invalid {
                        tool: Tool::Filter,
                        source,
                    }
                })?;
                warnings.extend(w);
                if p.is_used() {
                    plan.filter = Some(p);
                }
            }
        }
    }
    Ok((plan, warnings))
}
