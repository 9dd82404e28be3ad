//! Graph edit distance for labeled graphs.
//!
//! The distance between two graphs is the cheapest sequence of vertex
//! substitutions, deletions, and insertions rewriting one into the other,
//! with edge changes charged implicitly along the way (see [`edit`] for the
//! exact charging rule). Computing it exactly is NP-hard, so this crate
//! offers a spectrum:
//!
//! * [`engine::ged_kbest`] - the workhorse: a level-wise search that keeps
//!   only the `k` cheapest partial mappings per level. Polynomial for fixed
//!   `k`, exact in the limit, and deterministic regardless of thread count.
//! * [`oracle::exact_ged`] - branch-and-bound ground truth for small graphs.
//! * [`oracle::exhaustive_ged`] - brute-force enumeration, deliberately
//!   sharing no evaluation code with the other two; the final arbiter in
//!   tests.
//!
//! [`io`] covers JSON/GXL decoding, dataset directories, and seeded random
//! graph generation; [`topk`] holds the deterministic parallel selection
//! primitive the engine is built on.

pub mod cost;
pub mod edit;
pub mod engine;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod topk;

pub use cost::{costs_equal, CostError, CostModel, COST_TOLERANCE};
pub use edit::{
    apply_edit_path, apply_prefix, graphs_equal_under_mapping, op_cost, path_cost, EditError,
    EditOp, EditPath, PrefixApplication, VertexOrigin,
};
pub use engine::{
    branch, finalize_insertions, ged_kbest, implied_edge_cost, EngineConfig, EngineError,
    GedResult, LevelStats, SearchNode,
};
pub use graph::{GraphError, Label, LabeledGraph};
pub use oracle::{exact_ged, exhaustive_ged, lower_bound, OracleConfig, OracleError};
pub use topk::{select_k_smallest, Candidate, SelectError};
