//! Labeled-graph domain types.
//!
//! Graphs are simple (no self-loops, at most one edge per unordered pair),
//! undirected, with an opaque label on every vertex and edge. Vertices are
//! identified by contiguous 0-based indices. Graphs are immutable after
//! construction, so they can be shared freely between worker threads.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// An opaque label token. Equality is exact token equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label(String);

impl Label {
    pub fn new(value: impl Into<String>) -> Self {
        Label(value.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Label {
    fn from(value: &str) -> Self {
        Label(value.to_owned())
    }
}

impl From<String> for Label {
    fn from(value: String) -> Self {
        Label(value)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Label({:?})", self.0)
    }
}

/// Errors raised while constructing a [`LabeledGraph`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge ({u}, {u}) is a self-loop")]
    SelfLoop { u: u32 },
    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: u32, v: u32 },
    #[error("edge endpoint {v} out of range for a graph with {n} vertices")]
    EndpointOutOfRange { v: u32, n: usize },
}

/// A simple undirected graph with labeled vertices and edges.
#[derive(Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    name: Option<String>,
    vertices: Vec<Label>,
    edges: BTreeMap<(u32, u32), Label>,
}

impl LabeledGraph {
    /// Builds a graph from vertex labels and `(u, v, label)` edge triples.
    ///
    /// Endpoint order within a triple does not matter; edges are stored with
    /// the smaller index first. Self-loops, duplicate edges (in either
    /// orientation), and out-of-range endpoints are rejected.
    pub fn new(
        vertices: Vec<Label>,
        edges: impl IntoIterator<Item = (u32, u32, Label)>,
    ) -> Result<Self, GraphError> {
        let n = vertices.len();
        let mut edge_map = BTreeMap::new();
        for (a, b, label) in edges {
            if a as usize >= n {
                return Err(GraphError::EndpointOutOfRange { v: a, n });
            }
            if b as usize >= n {
                return Err(GraphError::EndpointOutOfRange { v: b, n });
            }
            if a == b {
                return Err(GraphError::SelfLoop { u: a });
            }
            let key = (a.min(b), a.max(b));
            if edge_map.insert(key, label).is_some() {
                return Err(GraphError::DuplicateEdge { u: key.0, v: key.1 });
            }
        }
        Ok(LabeledGraph {
            name: None,
            vertices,
            edges: edge_map,
        })
    }

    /// Returns the same graph with its name replaced.
    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Number of vertices.
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_labels(&self) -> &[Label] {
        &self.vertices
    }

    pub fn vertex_label(&self, v: u32) -> Option<&Label> {
        self.vertices.get(v as usize)
    }

    /// Label of the edge between `a` and `b`, in either endpoint order.
    pub fn edge_label(&self, a: u32, b: u32) -> Option<&Label> {
        if a == b {
            return None;
        }
        self.edges.get(&(a.min(b), a.max(b)))
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        self.edge_label(a, b).is_some()
    }

    /// Edges as `(u, v, label)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32, &Label)> {
        self.edges.iter().map(|(&(u, v), label)| (u, v, label))
    }
}

impl fmt::Debug for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LabeledGraph")
            .field("name", &self.name)
            .field("n", &self.vertices.len())
            .field("m", &self.edges.len())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(tokens: &[&str]) -> Vec<Label> {
        tokens.iter().map(|t| Label::from(*t)).collect()
    }

    #[test]
    fn builds_and_normalizes_edge_order() {
        let g = LabeledGraph::new(
            labels(&["C", "N", "O"]),
            vec![(2, 0, Label::from("b")), (0, 1, Label::from("a"))],
        )
        .unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.edge_label(0, 2).map(Label::as_str), Some("b"));
        assert_eq!(g.edge_label(2, 0).map(Label::as_str), Some("b"));
        assert!(!g.has_edge(1, 2));
    }

    #[test]
    fn rejects_self_loop() {
        let err = LabeledGraph::new(labels(&["C"]), vec![(0, 0, Label::from("a"))]).unwrap_err();
        assert_eq!(err, GraphError::SelfLoop { u: 0 });
    }

    #[test]
    fn rejects_duplicate_edge_in_either_orientation() {
        let err = LabeledGraph::new(
            labels(&["C", "N"]),
            vec![(0, 1, Label::from("a")), (1, 0, Label::from("b"))],
        )
        .unwrap_err();
        assert_eq!(err, GraphError::DuplicateEdge { u: 0, v: 1 });
    }

    #[test]
    fn rejects_out_of_range_endpoint() {
        let err = LabeledGraph::new(labels(&["C"]), vec![(0, 3, Label::from("a"))]).unwrap_err();
        assert_eq!(err, GraphError::EndpointOutOfRange { v: 3, n: 1 });
    }
}
