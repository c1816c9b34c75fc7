//! Behavioral curation: zero-export filtering and best-output selection.
//!
//! Per intent and tool, outputs with zero exports are dropped; among the
//! survivors the one with the highest export rate becomes ground truth.
//! Ties break on higher calls, then on lexicographically smaller canonical
//! serialization, so curation is deterministic and order-independent.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::llm_io::{self, Role};
use crate::tool_schema::{canonical_serialize_tool, EditPlan, Tool};

use super::{normalize_intent, InteractionRecord};

/// One curated intent with its ground-truth plan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CuratedRow {
    pub intent: String,
    pub plan: EditPlan,
    /// Export rate of the retained output per tool (absent if tool dropped).
    pub export_rates: BTreeMap<String, f64>,
    /// Total calls logged for this intent, across all tools and outputs.
    pub calls: u64,
}

/// Counters emitted alongside curation.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct CurationReport {
    pub intents_seen: usize,
    pub rows_kept: usize,
    /// Tool-level outputs dropped for having zero exports.
    pub zero_export_dropped: usize,
    /// Tool-level outputs dropped because their text failed to parse.
    pub unparseable_dropped: usize,
    /// Intents dropped entirely (no tool survived filtering).
    pub intents_dropped: usize,
}

struct Candidate {
    /// `None` = the retained output says "tool not used".
    section: Option<SectionPlan>,
    export_rate: f64,
    calls: u64,
    /// Canonical serialization for the lexicographic tie-break ("" if unused).
    canonical: String,
}

enum SectionPlan {
    Adjust(crate::tool_schema::AdjustParams),
    Selective(crate::tool_schema::SelectiveAdjustParams),
    Filter(crate::tool_schema::FilterParams),
}

fn parse_candidate(record: &InteractionRecord) -> Result<Candidate, ()> {
    let parsed =
        llm_io::parse_model_output(&record.output, Role::Teacher, record.tool).map_err(|_| ())?;
    let (plan, _) = llm_io::assemble_plan(std::slice::from_ref(&parsed)).map_err(|_| ())?;
    let canonical = canonical_serialize_tool(&plan, record.tool).unwrap_or_default();
    let section = match record.tool {
        Tool::Adjust => plan.adjust.map(SectionPlan::Adjust),
        Tool::Selective => plan.selective.map(SectionPlan::Selective),
        Tool::Filter => plan.filter.map(SectionPlan::Filter),
    };
    Ok(Candidate {
        section,
        export_rate: record.exports as f64 / record.calls as f64,
        calls: record.calls,
        canonical,
    })
}

/// True when `a` beats `b` under the deterministic ordering.
fn better(a: &Candidate, b: &Candidate) -> bool {
    if a.export_rate != b.export_rate {
        return a.export_rate > b.export_rate;
    }
    if a.calls != b.calls {
        return a.calls > b.calls;
    }
    a.canonical < b.canonical
}

/// Curates ingested records into one row per unique (normalized) intent.
pub fn curate(records: &[InteractionRecord]) -> (Vec<CuratedRow>, CurationReport) {
    // BTreeMap keys make output order independent of input order.
    let mut by_intent: BTreeMap<String, Vec<&InteractionRecord>> = BTreeMap::new();
    for rec in records {
        by_intent
            .entry(normalize_intent(&rec.intent))
            .or_default()
            .push(rec);
    }

    let mut report = CurationReport {
        intents_seen: by_intent.len(),
        ..Default::default()
    };
    let mut rows = Vec::new();

    for (intent, recs) in by_intent {
        let calls_total: u64 = recs.iter().map(|r| r.calls).sum();
        let mut plan = EditPlan::default();
        let mut export_rates = BTreeMap::new();
        let mut any_kept = false;

        for tool in Tool::ALL {
            let mut best: Option<Candidate> = None;
            for rec in recs.iter().filter(|r| r.tool == tool) {
                if rec.exports == 0 {
                    report.zero_export_dropped += 1;
                    continue;
                }
                match parse_candidate(rec) {
                    Ok(cand) => {
                        if best.as_ref().map(|b| better(&cand, b)).unwrap_or(true) {
                            best = Some(cand);
                        }
                    }
                    Err(()) => report.unparseable_dropped += 1,
                }
            }
            if let Some(cand) = best {
                any_kept = true;
                export_rates.insert(tool.name().to_string(), cand.export_rate);
                match cand.section {
                    Some(SectionPlan::Adjust(p)) => plan.adjust = Some(p),
                    Some(SectionPlan::Selective(p)) => plan.selective = Some(p),
                    Some(SectionPlan::Filter(p)) => plan.filter = Some(p),
                    None => {} // retained output says: tool not used
                }
            }
        }

        if any_kept {
            rows.push(CuratedRow {
                intent,
                plan,
                export_rates,
                calls: calls_total,
            });
            report.rows_kept += 1;
        } else {
            report.intents_dropped += 1;
        }
    }
    (rows, report)
}
