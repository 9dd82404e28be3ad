//! Shared fixtures for the criterion benches.

use ged_core::io::{generate_random, GenSpec};
use ged_core::LabeledGraph;

/// A reproducible random graph with the benchmark alphabets.
pub fn graph(seed: u64, n: u32, density: f64) -> LabeledGraph {
    let spec = GenSpec {
        vertex_count: n,
        density,
        vertex_alphabet: vec!["A".into(), "B".into(), "C".into()],
        edge_alphabet: vec!["a".into(), "b".into()],
        seed,
    };
    generate_random(&spec).expect("benchmark generator spec is valid")
}

/// Two independently seeded graphs of the same size and density.
pub fn pair(seed: u64, n: u32, density: f64) -> (LabeledGraph, LabeledGraph) {
    (graph(seed, n, density), graph(seed ^ 0x9E37_79B9, n, density))
}
