//! Machine-readable output schemas.
//!
//! Every JSON report is built from per-item records plus aggregates that are
//! recomputable from those records alone; nothing in an aggregate comes from
//! state outside the report. Wall-time fields are the only nondeterministic
//! values, and `--stable-output` zeroes them so fixed-seed runs are
//! byte-identical.

use ged_core::{CostModel, EditOp};
use serde::Serialize;

/// Report for a single pairwise computation.
#[derive(Serialize, Debug)]
pub struct PairReport {
    pub g1: String,
    pub g2: String,
    pub distance: f64,
    /// Beam width, absent when the exact oracle produced the answer.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    pub exact: bool,
    pub wall_ms: f64,
    /// Present when --verify ran; engine outputs always verify.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<Vec<EditOp>>,
}

/// Report for a dataset distance matrix.
#[derive(Serialize, Debug)]
pub struct MatrixReport {
    pub names: Vec<String>,
    /// Row-major square matrix; `null` marks a failed pair.
    pub matrix: Vec<Vec<Option<f64>>>,
    pub mean_distance: f64,
    pub computed_pairs: usize,
    pub failed_pairs: usize,
    pub skipped_files: Vec<String>,
}

/// Report for nearest-neighbor classification.
#[derive(Serialize, Debug)]
pub struct KnnReport {
    pub accuracy: f64,
    pub correct: usize,
    pub total: usize,
    pub neighbors: usize,
    /// Class labels indexing the confusion matrix, lexicographic.
    pub classes: Vec<String>,
    /// confusion[i][j] = test graphs of class i predicted as class j.
    pub confusion: Vec<Vec<usize>>,
    pub predictions: Vec<Prediction>,
}

#[derive(Serialize, Debug)]
pub struct Prediction {
    pub name: String,
    pub actual: String,
    pub predicted: String,
    pub nearest: String,
    pub nearest_distance: f64,
}

/// Report for an edit-path crossover.
#[derive(Serialize, Debug)]
pub struct CrossoverReport {
    pub g1: String,
    pub g2: String,
    pub fraction: f64,
    pub ops_applied: usize,
    pub ops_total: usize,
    pub offspring_vertices: usize,
    pub offspring_edges: usize,
    pub distance_from_g1: f64,
    pub distance_from_g2: f64,
}

/// Report produced by every bench protocol.
#[derive(Serialize, Debug)]
pub struct BenchReport {
    pub protocol: String,
    pub settings: BenchSettings,
    pub records: Vec<BenchRecord>,
    /// One row per density / beam width / size, recomputable from records.
    pub groups: Vec<GroupStats>,
    pub totals: Totals,
}

#[derive(Serialize, Debug)]
pub struct BenchSettings {
    pub costs: CostModel,
    pub seed: u64,
    pub pairs_per_group: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex_count: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub densities: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ks: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub density: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_budget: Option<u64>,
    pub vertex_alphabet: Vec<String>,
    pub edge_alphabet: Vec<String>,
}

#[derive(Serialize, Debug)]
pub struct BenchRecord {
    /// Which sweep point this record belongs to ("density=0.3", "k=100",
    /// "n=50").
    pub group: String,
    pub pair: usize,
    pub g1_seed: u64,
    pub g2_seed: u64,
    pub distance: f64,
    /// Oracle distance; absent when the oracle was skipped or over budget.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimal: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deviation_pct: Option<f64>,
    pub wall_ms: f64,
}

#[derive(Serialize, Debug, PartialEq)]
pub struct GroupStats {
    pub group: String,
    pub pairs: usize,
    /// Pairs with an oracle answer (equals `pairs` when no oracle ran).
    pub evaluated: usize,
    pub excluded: usize,
    pub mean_distance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_exact: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_deviation_pct: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimal_rate: Option<f64>,
    /// Mean distance divided by the first group's mean (ksweep only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalized: Option<f64>,
    pub mean_wall_ms: f64,
}

#[derive(Serialize, Debug)]
pub struct Totals {
    pub pairs: usize,
    pub excluded: usize,
    pub total_wall_ms: f64,
}

/// Recomputes one group row from the records that belong to it. Both the
/// harness and the test suite go through this, so "aggregates recompute from
/// records" holds by construction.
///
/// `oracle_ran` distinguishes "no oracle in this protocol" (every pair
/// counts as evaluated) from "oracle attempted" (pairs without an exact
/// answer were cut off by the budget and are excluded).
pub fn group_stats(
    group: &str,
    records: &[BenchRecord],
    baseline_mean: Option<f64>,
    oracle_ran: bool,
) -> GroupStats {
    let rows: Vec<&BenchRecord> = records.iter().filter(|r| r.group == group).collect();
    let pairs = rows.len();
    let mean = |values: &[f64]| -> f64 {
        if values.is_empty() {
            0.0
        } else {
            values.iter().sum::<f64>() / values.len() as f64
        }
    };
    let distances: Vec<f64> = rows.iter().map(|r| r.distance).collect();
    let exacts: Vec<f64> = rows.iter().filter_map(|r| r.exact).collect();
    let deviations: Vec<f64> = rows.iter().filter_map(|r| r.deviation_pct).collect();
    let optimal = rows.iter().filter(|r| r.optimal == Some(true)).count();
    let walls: Vec<f64> = rows.iter().map(|r| r.wall_ms).collect();
    let evaluated = if oracle_ran {
        rows.iter().filter(|r| r.exact.is_some()).count()
    } else {
        pairs
    };
    let mean_distance = mean(&distances);
    GroupStats {
        group: group.to_owned(),
        pairs,
        evaluated,
        excluded: pairs - evaluated,
        mean_distance,
        mean_exact: (!exacts.is_empty()).then(|| mean(&exacts)),
        mean_deviation_pct: (!deviations.is_empty()).then(|| mean(&deviations)),
        optimal_rate: (oracle_ran && evaluated > 0).then(|| optimal as f64 / evaluated as f64),
        normalized: baseline_mean.map(|base| mean_distance / base),
        mean_wall_ms: mean(&walls),
    }
}

/// Serializes any report as pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("reports always serialize");
    text.push('\n');
    text
}
