//! Mistake-driven training-set augmentation: sample training intents,
//! flag student mistakes against the teacher ground truth, generate one
//! similar intent per mistake, and grow the training set.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::client::ModelClient;
use crate::dataset::{normalize_intent, CuratedRow};
use crate::eval::{sample_cosine, EvalSample};
use crate::llm_io::{find_ci, render_prompt, PromptTemplate, Role};
use crate::rng::SeededRng;
use crate::tool_schema::{EditPlan, Tool};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineMeans {
    pub adjust: f64,
    pub selective: f64,
}

/// Per-tool evidence for why an intent was flagged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MistakeEvidence {
    WrongFilterName { predicted: String, truth: String },
    LowCosine { cosine: f64, baseline: f64 },
    SelectionMismatch { truth_used: bool, predicted_used: bool },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MistakeRecord {
    pub intent: String,
    pub tools: Vec<(Tool, MistakeEvidence)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Augmentation {
    pub source_intent: String,
    pub generated_intent: String,
    pub plan: EditPlan,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugmentationBatch {
    pub iteration: u64,
    pub augmentations: Vec<Augmentation>,
    /// Source intents whose generation failed or produced no distinct text.
    pub skipped: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bookkeeping {
    pub before: usize,
    pub added: usize,
    pub duplicates_skipped: usize,
    /// added / after * 100, Table 3's percentage convention.
    pub pct: f64,
    pub after: usize,
}

#[derive(Debug, Error)]
pub enum AugmentError {
    #[error("baseline mean for {tool} is missing or not finite")]
    MissingBaseline { tool: Tool },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Client(#[from] crate::client::ClientError),
    #[error("prompt rendering failed: {0}")]
    Render(#[from] crate::llm_io::RenderError),
}

/// Seeded sample of `sample_size` intents, then per-tool mistake rules:
/// filter = exact-name mismatch when both used; adjust/selective = cosine
/// below the un-augmented baseline mean. With `selection_mismatch_rule`
/// (default on) an is_used disagreement on adjust/selective also counts.
pub fn detect_mistakes(
    train: &[EvalSample],
    baselines: &BaselineMeans,
    sample_size: usize,
    seed: u64,
    selection_mismatch_rule: bool,
) -> Result<Vec<MistakeRecord>, AugmentError> {
    for (tool, m) in [(Tool::Adjust, baselines.adjust), (Tool::Selective, baselines.selective)] {
        if !m.is_finite() {
            return Err(AugmentError::MissingBaseline { tool });
        }
    }

    let mut order: Vec<usize> = (0..train.len()).collect();
    let mut rng = SeededRng::new(seed);
    rng.shuffle(&mut order);
    order.truncate(sample_size.min(train.len()));
    // Deterministic output order independent of the shuffle.
    order.sort_unstable();

    let mut mistakes = Vec::new();
    for idx in order {
        let s = &train[idx];
        let mut tools: Vec<(Tool, MistakeEvidence)> = Vec::new();

        for (tool, baseline) in [
            (Tool::Adjust, baselines.adjust),
            (Tool::Selective, baselines.selective),
        ] {
            match sample_cosine(s, tool) {
                Some(c) if c < baseline => {
                    tools.push((tool, MistakeEvidence::LowCosine { cosine: c, baseline }));
                }
                Some(_) => {}
                None => {
                    let tu = tool_used(&s.truth, tool);
                    let pu = tool_used(&s.prediction, tool);
                    if selection_mismatch_rule && tu != pu {
                        tools.push((
                            tool,
                            MistakeEvidence::SelectionMismatch {
                                truth_used: tu,
                                predicted_used: pu,
                            },
                        ));
                    }
                }
            }
        }

        let t_name = used_filter_name(&s.truth);
        let p_name = used_filter_name(&s.prediction);
        if let (Some(t), Some(p)) = (&t_name, &p_name) {
            if t != p {
                tools.push((
                    Tool::Filter,
                    MistakeEvidence::WrongFilterName {
                        predicted: p.clone(),
                        truth: t.clone(),
                    },
                ));
            }
        }

        if !tools.is_empty() {
            mistakes.push(MistakeRecord {
                intent: s.intent.clone(),
                tools,
            });
        }
    }
    Ok(mistakes)
}

fn tool_used(plan: &EditPlan, tool: Tool) -> bool {
    match tool {
        Tool::Adjust => plan.adjust.map(|a| a.is_used()).unwrap_or(false),
        Tool::Selective => plan.selective.map(|s| s.is_used()).unwrap_or(false),
        Tool::Filter => plan.filter.as_ref().map(|f| f.is_used()).unwrap_or(false),
    }
}

fn used_filter_name(plan: &EditPlan) -> Option<String> {
    plan.filter
        .as_ref()
        .filter(|f| f.is_used())
        .map(|f| f.name.clone())
}

/// Extracts the reply text after the SIMILAR_USER_REQUEST label if present;
/// otherwise takes the first nonempty line.
pub fn parse_similar_reply(reply: &str) -> Option<String> {
    let body = match find_ci(reply, "similar_user_request") {
        Some(pos) => {
            let after = &reply[pos + "similar_user_request".len()..];
            after.trim_start_matches(':')
        }
        None => reply,
    };
    body.lines()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .map(str::to_string)
}

/// One generated intent per mistaken intent, paired with the source's
/// teacher plan copied verbatim. A generation equal to its source after
/// normalization is retried once, then the intent is skipped.
pub fn generate_similar(
    mistakes: &[MistakeRecord],
    plans: &[CuratedRow],
    client: &dyn ModelClient,
    iteration: u64,
) -> Result<AugmentationBatch, AugmentError> {
    let template =
        PromptTemplate::bundled(Role::Augmenter, None).expect("augmenter template is bundled");
    let mut augmentations = Vec::new();
    let mut skipped = Vec::new();

    for m in mistakes {
        let Some(row) = plans
            .iter()
            .find(|r| normalize_intent(&r.intent) == normalize_intent(&m.intent))
        else {
            log::warn!("no teacher plan for mistaken intent {:?}; skipped", m.intent);
            skipped.push(m.intent.clone());
            continue;
        };
        let prompt = render_prompt(&template, &m.intent)?;
        let mut generated = None;
        for _attempt in 0..2 {
            let reply = match client.complete(&prompt) {
                Ok(r) => r,
                Err(e) => {
                    log::warn!("generation failed for {:?}: {e}", m.intent);
                    continue;
                }
            };
            if let Some(text) = parse_similar_reply(&reply) {
                if !text.is_empty() && normalize_intent(&text) != normalize_intent(&m.intent) {
                    generated = Some(text);
                    break;
                }
            }
        }
        match generated {
            Some(text) => augmentations.push(Augmentation {
                source_intent: m.intent.clone(),
                generated_intent: text,
                plan: row.plan.clone(),
            }),
            None => skipped.push(m.intent.clone()),
        }
    }

    Ok(AugmentationBatch {
        iteration,
        augmentations,
        skipped,
    })
}

/// Appends batch rows to the training set, skipping generated intents that
/// already exist (after normalization). Percentage = added / after * 100.
pub fn apply_augmentation(
    mut train: Vec<CuratedRow>,
    batch: &AugmentationBatch,
) -> (Vec<CuratedRow>, Bookkeeping) {
    let before = train.len();
    let mut seen: BTreeSet<String> = train
        .iter()
        .map(|r| normalize_intent(&r.intent))
        .collect();
    let mut added = 0usize;
    let mut duplicates = 0usize;
    for aug in &batch.augmentations {
        let key = normalize_intent(&aug.generated_intent);
        if !seen.insert(key) {
            duplicates += 1;
            continue;
        }
        train.push(CuratedRow {
            intent: aug.generated_intent.clone(),
            plan: aug.plan.clone(),
            export_rates: Default::default(),
            calls: 0,
        });
        added += 1;
    }
    let after = train.len();
    let pct = if after == 0 {
        0.0
    } else {
        added as f64 / after as f64 * 100.0
    };
    (
        train,
        Bookkeeping {
            before,
            added,
            duplicates_skipped: duplicates,
            pct,
            after,
        },
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationOutput {
    pub mistakes: Vec<MistakeRecord>,
    pub batch: AugmentationBatch,
    pub bookkeeping: Bookkeeping,
}

/// detect → generate → apply, writing all iteration state to `out_dir`:
/// mistakes.jsonl, batch.jsonl, train_augmented.jsonl, bookkeeping.json.
#[allow(clippy::too_many_arguments)]
pub fn run_iteration(
    train: Vec<CuratedRow>,
    predictions: &[EvalSample],
    baselines: &BaselineMeans,
    client: &dyn ModelClient,
    sample_size: usize,
    seed: u64,
    selection_mismatch_rule: bool,
    out_dir: &Path,
) -> Result<IterationOutput, AugmentError> {
    let mistakes = detect_mistakes(predictions, baselines, sample_size, seed, selection_mismatch_rule)?;
    let batch = generate_similar(&mistakes, &train, client, 1)?;
    let (augmented, bookkeeping) = apply_augmentation(train, &batch);

    fs::create_dir_all(out_dir).map_err(|source| AugmentError::Io {
        path: out_dir.display().to_string(),
        source,
    })?;
    let write = |name: &str, text: String| -> Result<(), AugmentError> {
        let path = out_dir.join(name);
        fs::write(&path, text).map_err(|source| AugmentError::Io {
            path: path.display().to_string(),
            source,
        })
    };
    let jsonl = |lines: Vec<String>| {
        let mut s = lines.join("\n");
        if !s.is_empty() {
            s.push('\n');
        }
        s
    };
    write(
        "mistakes.jsonl",
        jsonl(
            mistakes
                .iter()
                .map(|m| serde_json::to_string(m).expect("serializable"))
                .collect(),
        ),
    )?;
    write(
        "batch.jsonl",
        jsonl(
            batch
                .augmentations
                .iter()
                .map(|a| serde_json::to_string(a).expect("serializable"))
                .collect(),
        ),
    )?;
    write(
        "train_augmented.jsonl",
        jsonl(
            augmented
                .iter()
                .map(|r| serde_json::to_string(r).expect("serializable"))
                .collect(),
        ),
    )?;
    write(
        "bookkeeping.json",
        serde_json::to_string_pretty(&bookkeeping).expect("serializable"),
    )?;

    Ok(IterationOutput {
        mistakes,
        batch,
        bookkeeping,
    })
}
