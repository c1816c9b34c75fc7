//! Offline evaluation: tool-selection F1, parameter-quality scores, and
//! their harmonic-mean combination, reported per tool plus an overall mean.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tool_schema::{EditPlan, Tool};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalSample {
    pub intent: String,
    #[serde(default = "one")]
    pub calls: u64,
    pub truth: EditPlan,
    pub prediction: EditPlan,
}

fn one() -> u64 {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterQualityMode {
    /// Score names only where truth and prediction both use the filter.
    BothUsed,
    /// Score every sample; unused counts as the name "none".
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToolReport {
    pub selection: SelectionScore,
    /// `None` when no sample qualifies for the quality metric.
    pub quality: Option<f64>,
    pub no_overlap: bool,
    #[serde(rename = "final")]
    pub final_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub min_calls: u64,
    pub samples: usize,
    pub adjust: ToolReport,
    pub selective: ToolReport,
    pub filter: ToolReport,
    pub overall: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("no samples to evaluate")]
    EmptySampleSet,
}

fn used(plan: &EditPlan, tool: Tool) -> bool {
    match tool {
        Tool::Adjust => plan.adjust.map(|a| a.is_used()).unwrap_or(false),
        Tool::Selective => plan.selective.map(|s| s.is_used()).unwrap_or(false),
        Tool::Filter => plan.filter.as_ref().map(|f| f.is_used()).unwrap_or(false),
    }
}

/// Binary tool-selection score. 0/0 counts as 1 for precision and recall
/// (nothing predicted, nothing to find); F1 is 0 when P + R = 0.
pub fn selection_f1(samples: &[EvalSample], tool: Tool) -> Result<SelectionScore, EvalError> {
    if samples.is_empty() {
        return Err(EvalError::EmptySampleSet);
    }
    let (mut tp, mut fp, mut fn_) = (0usize, 0usize, 0usize);
    for s in samples {
        let t = used(&s.truth, tool);
        let p = used(&s.prediction, tool);
        match (t, p) {
            (true, true) => tp += 1,
            (false, true) => fp += 1,
            (true, false) => fn_ += 1,
            (false, false) => {}
        }
    }
    let precision = if tp + fp == 0 {
        1.0
    } else {
        tp as f64 / (tp + fp) as f64
    };
    let recall = if tp + fn_ == 0 {
        1.0
    } else {
        tp as f64 / (tp + fn_) as f64
    };
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Ok(SelectionScore {
        precision,
        recall,
        f1,
    })
}

/// Fraction of samples whose predicted filter name exactly equals the
/// ground truth name. Intensity is never scored. `None` when no sample
/// qualifies under the chosen mode.
pub fn quality_filter(samples: &[EvalSample], mode: FilterQualityMode) -> Option<f64> {
    let name = |plan: &EditPlan| -> String {
        plan.filter
            .as_ref()
            .filter(|f| f.is_used())
            .map(|f| f.name.clone())
            .unwrap_or_else(|| "none".to_string())
    };
    let mut correct = 0usize;
    let mut total = 0usize;
    for s in samples {
        if mode == FilterQualityMode::BothUsed
            && !(used(&s.truth, Tool::Filter) && used(&s.prediction, Tool::Filter))
        {
            continue;
        }
        total += 1;
        if name(&s.truth) == name(&s.prediction) {
            correct += 1;
        }
    }
    (total > 0).then(|| correct as f64 / total as f64)
}

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    match (na == 0.0, nb == 0.0) {
        (true, true) => 1.0,
        (true, false) | (false, true) => 0.0,
        (false, false) => dot / (na * nb),
    }
}

fn tool_vector(plan: &EditPlan, tool: Tool) -> Vec<f64> {
    match tool {
        Tool::Adjust => plan
            .adjust
            .unwrap_or_default()
            .as_vector()
            .iter()
            .map(|&v| v as f64)
            .collect(),
        Tool::Selective => plan
            .selective
            .unwrap_or_default()
            .as_vector()
            .iter()
            .map(|&v| v as f64)
            .collect(),
        Tool::Filter => unreachable!("filter quality is name accuracy"),
    }
}

/// Mean cosine similarity of fixed-order parameter vectors over samples
/// where truth and prediction both use the tool. `None` when no overlap.
pub fn quality_cosine(samples: &[EvalSample], tool: Tool) -> Option<f64> {
    let mut sum = 0.0;
    let mut n = 0usize;
    for s in samples {
        if !(used(&s.truth, tool) && used(&s.prediction, tool)) {
            continue;
        }
        sum += cosine(&tool_vector(&s.truth, tool), &tool_vector(&s.prediction, tool));
        n += 1;
    }
    (n > 0).then(|| sum / n as f64)
}

/// Per-sample cosine for one tool, for mistake detection. `None` unless
/// both truth and prediction use the tool.
pub fn sample_cosine(sample: &EvalSample, tool: Tool) -> Option<f64> {
    (used(&sample.truth, tool) && used(&sample.prediction, tool)).then(|| {
        cosine(
            &tool_vector(&sample.truth, tool),
            &tool_vector(&sample.prediction, tool),
        )
    })
}

/// Harmonic mean of selection and quality; 0 when both are 0.
pub fn final_score(selection: f64, quality: f64) -> f64 {
    if selection + quality == 0.0 {
        0.0
    } else {
        2.0 * selection * quality / (selection + quality)
    }
}

/// Arithmetic mean of the three per-tool final scores.
pub fn overall(adjust: f64, selective: f64, filter: f64) -> f64 {
    (adjust + selective + filter) / 3.0
}

/// Display rounding: half-up to two decimals.
pub fn round2(v: f64) -> f64 {
    (v * 100.0 + 0.5).floor() / 100.0
}

fn tool_report(
    samples: &[EvalSample],
    tool: Tool,
    mode: FilterQualityMode,
) -> Result<ToolReport, EvalError> {
    let selection = selection_f1(samples, tool)?;
    let quality = match tool {
        Tool::Filter => quality_filter(samples, mode),
        _ => quality_cosine(samples, tool),
    };
    let final_score = match quality {
        Some(q) => final_score(selection.f1, q),
        None => 0.0,
    };
    Ok(ToolReport {
        selection,
        quality,
        no_overlap: quality.is_none(),
        final_score,
    })
}

/// Filters to samples with `calls >= min_calls`, then scores every tool.
pub fn evaluate(
    samples: &[EvalSample],
    min_calls: u64,
    mode: FilterQualityMode,
) -> Result<EvalReport, EvalError> {
    let scoped: Vec<EvalSample> = samples
        .iter()
        .filter(|s| s.calls >= min_calls)
        .cloned()
        .collect();
    if scoped.is_empty() {
        return Err(EvalError::EmptySampleSet);
    }
    let adjust = tool_report(&scoped, Tool::Adjust, mode)?;
    let selective = tool_report(&scoped, Tool::Selective, mode)?;
    let filter = tool_report(&scoped, Tool::Filter, mode)?;
    let overall = overall(adjust.final_score, selective.final_score, filter.final_score);
    Ok(EvalReport {
        min_calls,
        samples: scoped.len(),
        adjust,
        selective,
        filter,
        overall,
    })
}

/// Human-readable table: one row per min-calls scope.
pub fn render_table(reports: &[EvalReport]) -> String {
    let mut out = String::new();
    out.push_str("scope   | adjust (s, q, f)   | selective (s, q, f) | filter (s, q, f)   | overall\n");
    for r in reports {
        let scope = if r.min_calls <= 1 {
            "All".to_string()
        } else {
            format!("r{}", r.min_calls)
        };
        let cell = |t: &ToolReport| {
            let q = t
                .quality
                .map(|q| format!("{:.2}", round2(q)))
                .unwrap_or_else(|| "n/a".to_string());
            format!(
                "(.{:02}, {}, {:.2})",
                (round2(t.selection.f1) * 100.0).round() as i64,
                q,
                round2(t.final_score)
            )
        };
        out.push_str(&format!(
            "{:<7} | {:<18} | {:<19} | {:<18} | {:.2}\n",
            scope,
            cell(&r.adjust),
            cell(&r.selective),
            cell(&r.filter),
            round2(r.overall)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tool_schema::{AdjustParams, Band, FilterParams, SelectiveAdjustParams};

    fn adj(exposure: i32) -> Option<AdjustParams> {
        Some(AdjustParams {
            exposure,
            ..Default::default()
        })
    }

    fn filt(name: &str) -> Option<FilterParams> {
        Some(FilterParams {
            name: name.to_string(),
            intensity: 50,
        })
    }

    fn sample(calls: u64, truth: EditPlan, prediction: EditPlan) -> EvalSample {
        EvalSample {
            intent: "i".to_string(),
            calls,
            truth,
            prediction,
        }
    }

    #[test]
    fn f1_hand_arithmetic() {
        // TP=3, FP=1, FN=2, TN=1.
        let yes = EditPlan {
            adjust: adj(5),
            ..Default::default()
        };
        let no = EditPlan::default();
        let samples = vec![
            sample(1, yes.clone(), yes.clone()),
            sample(1, yes.clone(), yes.clone()),
            sample(1, yes.clone(), yes.clone()),
            sample(1, no.clone(), yes.clone()),
            sample(1, yes.clone(), no.clone()),
            sample(1, yes.clone(), no.clone()),
            sample(1, no.clone(), no.clone()),
        ];
        let s = selection_f1(&samples, Tool::Adjust).unwrap();
        assert!((s.precision - 0.75).abs() < 1e-12);
        assert!((s.recall - 0.6).abs() < 1e-12);
        assert!((s.f1 - 2.0 * 0.45 / 1.35).abs() < 1e-12);
    }

    #[test]
    fn f1_degenerate_all_negative() {
        let no = EditPlan::default();
        let samples = vec![sample(1, no.clone(), no.clone())];
        let s = selection_f1(&samples, Tool::Adjust).unwrap();
        assert_eq!((s.precision, s.recall, s.f1), (1.0, 1.0, 1.0));
    }

    #[test]
    fn filter_accuracy_both_used_default() {
        let mk = |t: &str, p: Option<&str>| {
            sample(
                1,
                EditPlan {
                    filter: filt(t),
                    ..Default::default()
                },
                EditPlan {
                    filter: p.map(|n| filt(n).unwrap()),
                    ..Default::default()
                },
            )
        };
        let samples = vec![
            mk("winter", Some("winter")),
            mk("north", Some("winter")),
            // No prediction: excluded from the both-used denominator.
            mk("sepia", None),
        ];
        let acc = quality_filter(&samples, FilterQualityMode::BothUsed).unwrap();
        assert!((acc - 0.5).abs() < 1e-12);
        // "all" mode: denominator 3, one correct.
        let acc_all = quality_filter(&samples, FilterQualityMode::All).unwrap();
        assert!((acc_all - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn cosine_conventions_and_orthogonality() {
        assert_eq!(cosine(&[0.0, 0.0], &[0.0, 0.0]), 1.0);
        assert_eq!(cosine(&[0.0, 0.0], &[1.0, 0.0]), 0.0);
        assert_eq!(cosine(&[1.0, 0.0], &[0.0, 1.0]), 0.0);
        assert!((cosine(&[1.0, 2.0], &[2.0, 4.0]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mean_cosine_matches_brute_force() {
        // 100 pseudo-random paired vectors via the pinned generator.
        let mut rng = crate::rng::SeededRng::new(7);
        let mut samples = Vec::new();
        let mut expect_sum = 0.0;
        for _ in 0..100 {
            let mut t = AdjustParams::default();
            let mut p = AdjustParams::default();
            t.exposure = rng.range(201) as i32 - 100;
            t.contrast = rng.range(201) as i32 - 100;
            t.saturation = 1 + rng.range(100) as i32;
            p.exposure = rng.range(201) as i32 - 100;
            p.contrast = rng.range(201) as i32 - 100;
            p.saturation = 1 + rng.range(100) as i32;
            let tv: Vec<f64> = t.as_vector().iter().map(|&v| v as f64).collect();
            let pv: Vec<f64> = p.as_vector().iter().map(|&v| v as f64).collect();
            let dot: f64 = tv.iter().zip(&pv).map(|(a, b)| a * b).sum();
            let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
            expect_sum += dot / (norm(&tv) * norm(&pv));
            samples.push(sample(
                1,
                EditPlan {
                    adjust: Some(t),
                    ..Default::default()
                },
                EditPlan {
                    adjust: Some(p),
                    ..Default::default()
                },
            ));
        }
        let got = quality_cosine(&samples, Tool::Adjust).unwrap();
        assert!((got - expect_sum / 100.0).abs() < 1e-12);
    }

    #[test]
    fn final_score_table2_cells() {
        assert!((round2(final_score(0.95, 0.63)) - 0.76).abs() < 1e-12);
        assert!((round2(final_score(0.81, 0.71)) - 0.76).abs() < 1e-12);
        assert_eq!(final_score(0.4, 0.0), 0.0);
        assert_eq!(final_score(0.0, 0.0), 0.0);
    }

    #[test]
    fn overall_table2_cells() {
        assert!((round2(overall(0.76, 0.70, 0.76)) - 0.74).abs() < 1e-12);
        assert!((round2(overall(0.80, 0.74, 0.81)) - 0.78).abs() < 1e-12);
        assert_eq!(overall(1.0, 1.0, 1.0), 1.0);
    }

    #[test]
    fn min_calls_filters_scope() {
        let yes = EditPlan {
            adjust: adj(5),
            ..Default::default()
        };
        let samples: Vec<EvalSample> = [1u64, 3, 5, 7]
            .iter()
            .map(|&c| sample(c, yes.clone(), yes.clone()))
            .collect();
        let r = evaluate(&samples, 5, FilterQualityMode::BothUsed).unwrap();
        assert_eq!(r.samples, 2);
        let all = evaluate(&samples, 1, FilterQualityMode::BothUsed).unwrap();
        assert_eq!(all.samples, 4);
        assert!(matches!(
            evaluate(&samples, 100, FilterQualityMode::BothUsed),
            Err(EvalError::EmptySampleSet)
        ));
    }

    #[test]
    fn perfect_predictions_score_one() {
        let plan = EditPlan {
            adjust: adj(10),
            selective: Some(SelectiveAdjustParams {
                red: Band {
                    saturation: 20,
                    luminance: 0,
                },
                ..Default::default()
            }),
            filter: filt("vintage"),
        };
        let samples = vec![sample(2, plan.clone(), plan.clone())];
        let r = evaluate(&samples, 1, FilterQualityMode::BothUsed).unwrap();
        assert_eq!(r.adjust.final_score, 1.0);
        assert_eq!(r.selective.final_score, 1.0);
        assert_eq!(r.filter.final_score, 1.0);
        assert_eq!(r.overall, 1.0);
    }

    #[test]
    fn no_overlap_flags_and_zero_final() {
        // Truth uses the filter, prediction never does.
        let samples = vec![sample(
            1,
            EditPlan {
                filter: filt("sepia"),
                ..Default::default()
            },
            EditPlan::default(),
        )];
        let r = evaluate(&samples, 1, FilterQualityMode::BothUsed).unwrap();
        assert!(r.filter.no_overlap);
        assert_eq!(r.filter.quality, None);
        assert_eq!(r.filter.final_score, 0.0);
    }

    #[test]
    fn permutation_invariant() {
        let yes = EditPlan {
            adjust: adj(30),
            filter: filt("noir"),
            ..Default::default()
        };
        let no = EditPlan::default();
        let mut samples = vec![
            sample(1, yes.clone(), yes.clone()),
            sample(2, yes.clone(), no.clone()),
            sample(3, no.clone(), yes.clone()),
        ];
        let a = evaluate(&samples, 1, FilterQualityMode::BothUsed).unwrap();
        samples.reverse();
        let b = evaluate(&samples, 1, FilterQualityMode::BothUsed).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn display_rounding_half_up() {
        assert_eq!(round2(0.755), 0.76);
        assert_eq!(round2(0.754), 0.75);
        assert_eq!(round2(0.7833333), 0.78);
    }
}
