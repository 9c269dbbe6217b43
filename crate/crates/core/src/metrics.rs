//! Run records and the summary statistics used for repeated runs.

use serde::{Deserialize, Serialize};

/// One solver run, serialized as a flat JSON object.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub instance: String,
    pub algorithm: String,
    pub seed: u64,
    pub edge_cut: f64,
    pub z_value: f64,
    pub k: usize,
    pub time_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepeatSummary {
    pub runs: usize,
    pub min_edge_cut: f64,
    pub best_seed: u64,
    /// Geometric mean of `|edge_cut|`, negated.
    pub geometric_mean_edge_cut: f64,
    pub min_time_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepeatReport {
    pub runs: Vec<RunMetrics>,
    pub summary: RepeatSummary,
}

/// Geometric mean of the absolute values, multiplied by -1. Cuts in this
/// domain are typically negative, so this keeps the sign meaningful.
pub fn negated_geometric_mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    if values.contains(&0.0) {
        return 0.0;
    }
    let mean_log = values.iter().map(|v| v.abs().ln()).sum::<f64>() / values.len() as f64;
    -mean_log.exp()
}

/// Panics if `runs` is empty.
pub fn summarize(runs: &[RunMetrics]) -> RepeatSummary {
    let best = runs
        .iter()
        .min_by(|a, b| a.edge_cut.total_cmp(&b.edge_cut))
        .expect("at least one run");
    let cuts: Vec<f64> = runs.iter().map(|r| r.edge_cut).collect();
    RepeatSummary {
        runs: runs.len(),
        min_edge_cut: best.edge_cut,
        best_seed: best.seed,
        geometric_mean_edge_cut: negated_geometric_mean(&cuts),
        min_time_seconds: runs.iter().map(|r| r.time_seconds).fold(f64::INFINITY, f64::min),
    }
}
