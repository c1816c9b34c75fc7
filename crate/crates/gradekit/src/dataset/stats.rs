//! Descriptive statistics over curated rows: per-tool usage counts,
//! filter-name frequency ranking, and per-parameter distributions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::tool_schema::{ADJUST_FIELDS, BAND_COLORS};

use super::CuratedRow;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToolUsage {
    pub used: usize,
    pub total: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamStats {
    pub min: i32,
    pub max: i32,
    pub mean: f64,
    pub stddev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub rows: usize,
    pub adjust: ToolUsage,
    pub selective: ToolUsage,
    pub filter: ToolUsage,
    /// Filter preset names ranked by descending frequency, ties broken
    /// lexicographically. "none" / absent filters are not counted.
    pub filter_names: Vec<(String, usize)>,
    /// Keyed by parameter name; computed over rows where adjust is used.
    pub adjust_params: BTreeMap<String, ParamStats>,
    /// Keyed by "<band>.saturation" / "<band>.luminance"; over rows where
    /// the selective tool is used.
    pub selective_params: BTreeMap<String, ParamStats>,
}

fn param_stats(values: &[i32]) -> ParamStats {
    if values.is_empty() {
        return ParamStats {
            min: 0,
            max: 0,
            mean: 0.0,
            stddev: 0.0,
        };
    }
    let min = *values.iter().min().unwrap();
    let max = *values.iter().max().unwrap();
    let n = values.len() as f64;
    let mean = values.iter().map(|&v| v as f64).sum::<f64>() / n;
    // Population standard deviation.
    let var = values
        .iter()
        .map(|&v| {
            let d = v as f64 - mean;
            d * d
        })
        .sum::<f64>()
        / n;
    ParamStats {
        min,
        max,
        mean,
        stddev: var.sqrt(),
    }
}

pub fn dataset_stats(rows: &[CuratedRow]) -> StatsReport {
    let total = rows.len();
    let mut adjust_used = 0usize;
    let mut selective_used = 0usize;
    let mut filter_used = 0usize;
    let mut name_counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut adjust_cols: Vec<Vec<i32>> = vec![Vec::new(); ADJUST_FIELDS.len()];
    let mut selective_cols: Vec<Vec<i32>> = vec![Vec::new(); BAND_COLORS.len() * 2];

    for row in rows {
        if let Some(a) = &row.plan.adjust {
            adjust_used += 1;
            for (col, v) in adjust_cols.iter_mut().zip(a.as_vector()) {
                col.push(v);
            }
        }
        if let Some(s) = &row.plan.selective {
            selective_used += 1;
            for (col, v) in selective_cols.iter_mut().zip(s.as_vector()) {
                col.push(v);
            }
        }
        if let Some(f) = &row.plan.filter {
            if f.is_used() {
                filter_used += 1;
                *name_counts.entry(f.name.clone()).or_insert(0) += 1;
            }
        }
    }

    let mut filter_names: Vec<(String, usize)> = name_counts.into_iter().collect();
    filter_names.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));

    let adjust_params = ADJUST_FIELDS
        .iter()
        .zip(&adjust_cols)
        .map(|(name, col)| (name.to_string(), param_stats(col)))
        .collect();
    let selective_params = BAND_COLORS
        .iter()
        .flat_map(|band| {
            [format!("{band}.saturation"), format!("{band}.luminance")]
        })
        .zip(selective_cols.iter().map(|col| param_stats(col)))
        .collect();

    StatsReport {
        rows: total,
        adjust: ToolUsage {
            used: adjust_used,
            total,
        },
        selective: ToolUsage {
            used: selective_used,
            total,
        },
        filter: ToolUsage {
            used: filter_used,
            total,
        },
        filter_names,
        adjust_params,
        selective_params,
    }
}
