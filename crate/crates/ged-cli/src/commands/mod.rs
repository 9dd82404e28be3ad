//! Command implementations.
//!
//! Each command splits into a `compute_*` function returning a report struct
//! (what the test suite drives) and a `run` function that formats it. All
//! parallelism happens inside a dedicated thread pool sized by `--threads`,
//! which caps pair-level and engine-level work together.

pub mod bench;
pub mod crossover;
pub mod generate;
pub mod ged;
pub mod knn;
pub mod matrix;

use std::time::Instant;

use ged_core::{
    apply_prefix, costs_equal, graphs_equal_under_mapping, path_cost, CostModel, EditOp,
    EngineConfig, LabeledGraph,
};

use crate::args::{EngineOpts, DEFAULT_K};
use crate::error::CliError;

/// Builds the pool every parallel section of a command runs inside.
pub(crate) fn thread_pool(threads: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot build thread pool: {e}")))
}

pub(crate) fn engine_config(opts: &EngineOpts, default_k: usize) -> EngineConfig {
    EngineConfig {
        k: opts.k_or(default_k),
        costs: opts.costs,
        workers: opts.threads(),
        collect_level_stats: false,
    }
}

pub(crate) fn default_engine_config(opts: &EngineOpts) -> EngineConfig {
    engine_config(opts, DEFAULT_K)
}

/// Milliseconds since `start`, or zero under --stable-output.
pub(crate) fn elapsed_ms(start: Instant, stable: bool) -> f64 {
    if stable {
        0.0
    } else {
        start.elapsed().as_secs_f64() * 1e3
    }
}

/// Checks a witness end to end: its recomputed cost must match the reported
/// distance and replaying it must rebuild the target graph.
pub(crate) fn verify_witness(
    distance: f64,
    ops: &[EditOp],
    g1: &LabeledGraph,
    g2: &LabeledGraph,
    costs: &CostModel,
) -> bool {
    match path_cost(ops, g1, g2, costs) {
        Ok(cost) if costs_equal(cost, distance) => {}
        _ => return false,
    }
    let Ok(application) = apply_prefix(g1, ops, g2, ops.len()) else {
        return false;
    };
    let Some(mapping) = application.target_mapping() else {
        return false;
    };
    graphs_equal_under_mapping(&application.graph, g2, &mapping).unwrap_or(false)
}

/// One line per edit operation, for text output.
pub(crate) fn describe_op(op: &EditOp) -> String {
    match op {
        EditOp::Substitute { v, u } => format!("substitute v{v} -> u{u}"),
        EditOp::Delete { v } => format!("delete v{v}"),
        EditOp::Insert { u } => format!("insert u{u}"),
    }
}

/// Graph display name: the file stem for loaded graphs.
pub(crate) fn graph_name(g: &LabeledGraph) -> String {
    g.name().unwrap_or("unnamed").to_owned()
}
