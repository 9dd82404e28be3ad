//! Edit operations, edit paths, and the reference cost/replay semantics.
//!
//! An edit path rewrites a source graph `g1` into a target graph `g2` through
//! vertex operations; edge changes are never explicit operations. Instead,
//! each edge is charged exactly once, at the moment the *second* of its
//! endpoints is resolved by a vertex operation:
//!
//! * both graphs have the edge - edge substitution (free on equal labels),
//! * only `g1` has it - edge deletion,
//! * only `g2` has it - edge insertion.
//!
//! A vertex deleted from `g1` resolves to nothing, so the `g2` side of its
//! incident pairs is always absent; edges it carried are charged as deletions
//! when their other endpoint resolves.
//!
//! [`path_cost`] below is the ground truth the search engine is tested
//! against. It recomputes a path's cost from nothing but the two graphs and
//! the operation list, walking pairs in operation order. Per operation it
//! accumulates four terms in a fixed order — the vertex charge, then the
//! implied edge charges grouped by kind (substitution count x cost, deletion
//! count x cost, insertion count x cost) — so that an engine maintaining
//! costs incrementally with the same grouping reproduces its sums bit for
//! bit.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cost::CostModel;
use crate::graph::{Label, LabeledGraph};

/// A single vertex edit. Indices on the `v` side refer to `g1`, indices on
/// the `u` side refer to `g2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum EditOp {
    /// Map `g1` vertex `v` onto `g2` vertex `u`, relabeling if needed.
    Substitute { v: u32, u: u32 },
    /// Remove `g1` vertex `v` together with its incident edges.
    Delete { v: u32 },
    /// Add `g2` vertex `u` (and, implicitly, its edges to already-resolved
    /// vertices).
    Insert { u: u32 },
}

/// An ordered list of edit operations plus its total cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EditPath {
    pub ops: Vec<EditOp>,
    pub total_cost: f64,
}

impl EditPath {
    pub fn empty() -> Self {
        EditPath {
            ops: Vec::new(),
            total_cost: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EditError {
    #[error("operation references g{side} vertex {index}, but the graph has {len} vertices")]
    VertexOutOfRange { side: u8, index: u32, len: usize },
    #[error("g{side} vertex {index} is used by more than one operation")]
    DuplicateVertexUse { side: u8, index: u32 },
    #[error("prefix length {prefix_len} exceeds path length {path_len}")]
    PrefixOutOfRange {
        prefix_len: usize,
        path_len: usize,
    },
    #[error("mapping does not form a bijection between {a} and {b} vertices")]
    MappingNotBijective { a: usize, b: usize },
}

/// The `(g1, g2)` footprint of an operation: which vertex, if any, it
/// resolves on each side.
pub(crate) fn op_pair(op: EditOp) -> (Option<u32>, Option<u32>) {
    match op {
        EditOp::Substitute { v, u } => (Some(v), Some(u)),
        EditOp::Delete { v } => (Some(v), None),
        EditOp::Insert { u } => (None, Some(u)),
    }
}

/// Cost of the vertex part of one operation, ignoring implied edge charges.
pub fn op_cost(
    op: EditOp,
    g1: &LabeledGraph,
    g2: &LabeledGraph,
    costs: &CostModel,
) -> Result<f64, EditError> {
    let (v, u) = op_pair(op);
    if let Some(v) = v {
        check_index(1, v, g1.vertex_count())?;
    }
    if let Some(u) = u {
        check_index(2, u, g2.vertex_count())?;
    }
    Ok(match op {
        EditOp::Substitute { v, u } => costs.vertex_substitution(
            g1.vertex_label(v).expect("checked above"),
            g2.vertex_label(u).expect("checked above"),
        ),
        EditOp::Delete { .. } => costs.vertex_del,
        EditOp::Insert { .. } => costs.vertex_ins,
    })
}

fn check_index(side: u8, index: u32, len: usize) -> Result<(), EditError> {
    if index as usize >= len {
        Err(EditError::VertexOutOfRange { side, index, len })
    } else {
        Ok(())
    }
}

/// Edge charges implied by one new operation, tallied by kind against a set
/// of earlier operations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct ImpliedCounts {
    /// Edges present in both graphs whose labels differ.
    pub esub: u32,
    /// Edges present only on the `g1` side.
    pub edel: u32,
    /// Edges present only on the `g2` side.
    pub eins: u32,
}

/// Tallies the edge charges implied by resolving `new` after `earlier`: per
/// the second-endpoint rule, one potential charge per earlier operation.
pub(crate) fn implied_counts<I>(
    earlier: I,
    new: (Option<u32>, Option<u32>),
    g1: &LabeledGraph,
    g2: &LabeledGraph,
) -> ImpliedCounts
where
    I: IntoIterator<Item = (Option<u32>, Option<u32>)>,
{
    let mut counts = ImpliedCounts::default();
    for prev in earlier {
        let e1: Option<&Label> = match (prev.0, new.0) {
            (Some(a), Some(b)) => g1.edge_label(a, b),
            _ => None,
        };
        let e2: Option<&Label> = match (prev.1, new.1) {
            (Some(a), Some(b)) => g2.edge_label(a, b),
            _ => None,
        };
        match (e1, e2) {
            (Some(a), Some(b)) => {
                if a != b {
                    counts.esub += 1;
                }
            }
            (Some(_), None) => counts.edel += 1,
            (None, Some(_)) => counts.eins += 1,
            (None, None) => {}
        }
    }
    counts
}

/// The canonical accumulation step shared by every cost computation in the
/// crate: onto `base`, add the vertex term, then each edge group as
/// `count x cost`, in that exact order. Any two code paths that produce the
/// same counts through this function yield bitwise-identical sums.
#[inline]
pub(crate) fn charge_grouped(
    base: f64,
    vertex_term: f64,
    counts: ImpliedCounts,
    costs: &CostModel,
) -> f64 {
    let mut acc = base;
    acc += vertex_term;
    acc += counts.esub as f64 * costs.edge_sub;
    acc += counts.edel as f64 * costs.edge_del;
    acc += counts.eins as f64 * costs.edge_ins;
    acc
}

/// Checks ranges and single-use of every vertex across an operation list.
fn validate_ops(ops: &[EditOp], g1: &LabeledGraph, g2: &LabeledGraph) -> Result<(), EditError> {
    let mut used1 = vec![false; g1.vertex_count()];
    let mut used2 = vec![false; g2.vertex_count()];
    for &op in ops {
        let (v, u) = op_pair(op);
        if let Some(v) = v {
            check_index(1, v, used1.len())?;
            if used1[v as usize] {
                return Err(EditError::DuplicateVertexUse { side: 1, index: v });
            }
            used1[v as usize] = true;
        }
        if let Some(u) = u {
            check_index(2, u, used2.len())?;
            if used2[u as usize] {
                return Err(EditError::DuplicateVertexUse { side: 2, index: u });
            }
            used2[u as usize] = true;
        }
    }
    Ok(())
}

/// Recomputes the total cost of an operation sequence from scratch.
///
/// Validates as it goes: every index must be in range and no vertex of
/// either graph may be touched twice. The result is well-defined for partial
/// paths too; completeness is not required.
pub fn path_cost(
    ops: &[EditOp],
    g1: &LabeledGraph,
    g2: &LabeledGraph,
    costs: &CostModel,
) -> Result<f64, EditError> {
    validate_ops(ops, g1, g2)?;
    let mut resolved: Vec<(Option<u32>, Option<u32>)> = Vec::with_capacity(ops.len());
    let mut total = 0.0;
    for &op in ops {
        let pair = op_pair(op);
        let vertex_term = op_cost(op, g1, g2, costs)?;
        let counts = implied_counts(resolved.iter().copied(), pair, g1, g2);
        total = charge_grouped(total, vertex_term, counts, costs);
        resolved.push(pair);
    }
    Ok(total)
}

/// Where a vertex of a replayed graph came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexOrigin {
    /// Still the original `g1` vertex; untouched by the applied prefix.
    Source { v: u32 },
    /// `g1` vertex `v` rewritten to `g2` vertex `u`.
    Substituted { v: u32, u: u32 },
    /// Inserted copy of `g2` vertex `u`.
    Inserted { u: u32 },
}

/// Result of replaying a path prefix over the source graph.
#[derive(Debug, Clone)]
pub struct PrefixApplication {
    pub graph: LabeledGraph,
    /// Origin of each vertex of `graph`, parallel to its vertex indices.
    pub origins: Vec<VertexOrigin>,
}

impl PrefixApplication {
    /// For a fully-resolved replay (no [`VertexOrigin::Source`] left), the
    /// mapping from each vertex of the replayed graph to its `g2` vertex.
    pub fn target_mapping(&self) -> Option<Vec<u32>> {
        self.origins
            .iter()
            .map(|origin| match origin {
                VertexOrigin::Source { .. } => None,
                VertexOrigin::Substituted { u, .. } => Some(*u),
                VertexOrigin::Inserted { u } => Some(*u),
            })
            .collect()
    }
}

/// Replays the first `prefix_len` operations of a path over `g1`.
///
/// Substituted and inserted vertices take their `g2` labels, deleted
/// vertices disappear (with their incident edges), and untouched `g1`
/// vertices keep their labels and their edges among themselves. An edge
/// between two resolved vertices exists exactly when `g2` has it; an edge
/// between a resolved and an untouched vertex survives from `g1` until the
/// untouched endpoint is itself resolved.
pub fn apply_prefix(
    g1: &LabeledGraph,
    ops: &[EditOp],
    g2: &LabeledGraph,
    prefix_len: usize,
) -> Result<PrefixApplication, EditError> {
    if prefix_len > ops.len() {
        return Err(EditError::PrefixOutOfRange {
            prefix_len,
            path_len: ops.len(),
        });
    }
    let prefix = &ops[..prefix_len];
    validate_ops(prefix, g1, g2)?;

    #[derive(Clone, Copy)]
    enum Fate {
        Untouched,
        Mapped(u32),
        Removed,
    }
    let mut fate = vec![Fate::Untouched; g1.vertex_count()];
    let mut inserted: Vec<u32> = Vec::new();
    for &op in prefix {
        match op {
            EditOp::Substitute { v, u } => fate[v as usize] = Fate::Mapped(u),
            EditOp::Delete { v } => fate[v as usize] = Fate::Removed,
            EditOp::Insert { u } => inserted.push(u),
        }
    }

    let mut labels: Vec<Label> = Vec::new();
    let mut origins: Vec<VertexOrigin> = Vec::new();
    for v in 0..g1.vertex_count() as u32 {
        match fate[v as usize] {
            Fate::Untouched => {
                labels.push(g1.vertex_label(v).expect("in range").clone());
                origins.push(VertexOrigin::Source { v });
            }
            Fate::Mapped(u) => {
                labels.push(g2.vertex_label(u).expect("validated").clone());
                origins.push(VertexOrigin::Substituted { v, u });
            }
            Fate::Removed => {}
        }
    }
    for &u in &inserted {
        labels.push(g2.vertex_label(u).expect("validated").clone());
        origins.push(VertexOrigin::Inserted { u });
    }

    // Edge between two replayed vertices: resolved pairs follow g2,
    // pairs with an untouched endpoint still follow g1.
    let g1_side = |origin: VertexOrigin| -> Option<u32> {
        match origin {
            VertexOrigin::Source { v } | VertexOrigin::Substituted { v, .. } => Some(v),
            VertexOrigin::Inserted { .. } => None,
        }
    };
    let g2_side = |origin: VertexOrigin| -> Option<u32> {
        match origin {
            VertexOrigin::Substituted { u, .. } | VertexOrigin::Inserted { u } => Some(u),
            VertexOrigin::Source { .. } => None,
        }
    };
    let mut edges: Vec<(u32, u32, Label)> = Vec::new();
    for i in 0..origins.len() {
        for j in (i + 1)..origins.len() {
            let unresolved = matches!(origins[i], VertexOrigin::Source { .. })
                || matches!(origins[j], VertexOrigin::Source { .. });
            let label = if unresolved {
                match (g1_side(origins[i]), g1_side(origins[j])) {
                    (Some(a), Some(b)) => g1.edge_label(a, b),
                    _ => None,
                }
            } else {
                match (g2_side(origins[i]), g2_side(origins[j])) {
                    (Some(a), Some(b)) => g2.edge_label(a, b),
                    _ => None,
                }
            };
            if let Some(label) = label {
                edges.push((i as u32, j as u32, label.clone()));
            }
        }
    }
    let graph = LabeledGraph::new(labels, edges).expect("replayed graph is simple by construction");
    Ok(PrefixApplication { graph, origins })
}

/// Replays `prefix_len` operations of `path` over `g1` and returns the
/// resulting graph. See [`apply_prefix`] for the full semantics.
pub fn apply_edit_path(
    g1: &LabeledGraph,
    path: &EditPath,
    g2: &LabeledGraph,
    prefix_len: usize,
) -> Result<LabeledGraph, EditError> {
    apply_prefix(g1, &path.ops, g2, prefix_len).map(|application| application.graph)
}

/// Checks whether `mapping` (indexed by vertices of `a`, valued in vertices
/// of `b`) is a label- and edge-preserving isomorphism witness.
pub fn graphs_equal_under_mapping(
    a: &LabeledGraph,
    b: &LabeledGraph,
    mapping: &[u32],
) -> Result<bool, EditError> {
    let (na, nb) = (a.vertex_count(), b.vertex_count());
    if mapping.len() != na || na != nb {
        return Err(EditError::MappingNotBijective { a: na, b: nb });
    }
    let mut seen = vec![false; nb];
    for &image in mapping {
        if image as usize >= nb || seen[image as usize] {
            return Err(EditError::MappingNotBijective { a: na, b: nb });
        }
        seen[image as usize] = true;
    }
    for v in 0..na as u32 {
        if a.vertex_label(v) != b.vertex_label(mapping[v as usize]) {
            return Ok(false);
        }
    }
    if a.edge_count() != b.edge_count() {
        return Ok(false);
    }
    for (x, y, label) in a.edges() {
        if b.edge_label(mapping[x as usize], mapping[y as usize]) != Some(label) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(vertices: &[&str], edges: &[(u32, u32, &str)]) -> LabeledGraph {
        LabeledGraph::new(
            vertices.iter().map(|l| Label::from(*l)).collect(),
            edges
                .iter()
                .map(|&(u, v, l)| (u, v, Label::from(l)))
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    /// Two C vertices joined by a single bond.
    fn p2() -> LabeledGraph {
        graph(&["C", "C"], &[(0, 1, "s")])
    }

    /// A single C vertex.
    fn k1() -> LabeledGraph {
        graph(&["C"], &[])
    }

    /// Three C vertices, all pairs bonded.
    fn triangle() -> LabeledGraph {
        graph(&["C", "C", "C"], &[(0, 1, "s"), (0, 2, "s"), (1, 2, "s")])
    }

    /// Three C vertices in a line.
    fn path3() -> LabeledGraph {
        graph(&["C", "C", "C"], &[(0, 1, "s"), (1, 2, "s")])
    }

    #[test]
    fn op_cost_examples() {
        let cm = CostModel::default();
        let a = graph(&["C"], &[]);
        let b = graph(&["N"], &[]);
        assert_eq!(op_cost(EditOp::Substitute { v: 0, u: 0 }, &a, &a, &cm), Ok(0.0));
        assert_eq!(op_cost(EditOp::Substitute { v: 0, u: 0 }, &a, &b, &cm), Ok(2.0));
        assert_eq!(op_cost(EditOp::Delete { v: 0 }, &a, &b, &cm), Ok(4.0));
        assert_eq!(op_cost(EditOp::Insert { u: 0 }, &a, &b, &cm), Ok(4.0));
        assert_eq!(
            op_cost(EditOp::Substitute { v: 1, u: 0 }, &a, &b, &cm),
            Err(EditError::VertexOutOfRange {
                side: 1,
                index: 1,
                len: 1
            })
        );
    }

    #[test]
    fn path_cost_charges_edge_at_second_endpoint() {
        let cm = CostModel::default();
        // Map one endpoint, delete the other: the bond dies with the deleted
        // vertex and is charged there.
        let ops = [EditOp::Substitute { v: 0, u: 0 }, EditOp::Delete { v: 1 }];
        assert_eq!(path_cost(&ops, &p2(), &k1(), &cm), Ok(6.0));
        // Prefix cost is well-defined: only the substitution so far.
        assert_eq!(path_cost(&ops[..1], &p2(), &k1(), &cm), Ok(0.0));
    }

    #[test]
    fn path_cost_triangle_to_path() {
        let cm = CostModel::default();
        // Identity mapping: vertices free, edges (0,1) and (1,2) match,
        // edge (0,2) exists only in the triangle and is deleted.
        let ops = [
            EditOp::Substitute { v: 0, u: 0 },
            EditOp::Substitute { v: 1, u: 1 },
            EditOp::Substitute { v: 2, u: 2 },
        ];
        assert_eq!(path_cost(&ops, &triangle(), &path3(), &cm), Ok(2.0));
    }

    #[test]
    fn path_cost_insertions_charge_edges_to_resolved_vertices() {
        let cm = CostModel::default();
        // Grow K1 into a triangle: two vertex insertions plus three bond
        // insertions, each charged when its second endpoint appears.
        let ops = [
            EditOp::Substitute { v: 0, u: 0 },
            EditOp::Insert { u: 1 },
            EditOp::Insert { u: 2 },
        ];
        assert_eq!(path_cost(&ops, &k1(), &triangle(), &cm), Ok(14.0));
        // And K1 into P2: one vertex plus one bond.
        let ops = [EditOp::Substitute { v: 0, u: 0 }, EditOp::Insert { u: 1 }];
        assert_eq!(path_cost(&ops, &k1(), &p2(), &cm), Ok(6.0));
    }

    #[test]
    fn path_cost_rejects_duplicate_vertex_use() {
        let cm = CostModel::default();
        let ops = [
            EditOp::Substitute { v: 0, u: 0 },
            EditOp::Delete { v: 0 },
        ];
        assert_eq!(
            path_cost(&ops, &p2(), &k1(), &cm),
            Err(EditError::DuplicateVertexUse { side: 1, index: 0 })
        );
        let ops = [
            EditOp::Substitute { v: 0, u: 0 },
            EditOp::Insert { u: 0 },
        ];
        assert_eq!(
            path_cost(&ops, &p2(), &triangle(), &cm),
            Err(EditError::DuplicateVertexUse { side: 2, index: 0 })
        );
    }

    #[test]
    fn apply_full_path_reconstructs_target() {
        let ops = [EditOp::Substitute { v: 0, u: 0 }, EditOp::Delete { v: 1 }];
        let application = apply_prefix(&p2(), &ops, &k1(), 2).unwrap();
        assert_eq!(application.graph, k1());
        let mapping = application.target_mapping().unwrap();
        assert!(graphs_equal_under_mapping(&application.graph, &k1(), &mapping).unwrap());
    }

    #[test]
    fn apply_prefix_keeps_unresolved_source_edges() {
        // After only the substitution, the untouched endpoint keeps its
        // original bond; the graph is still P2-shaped.
        let ops = [EditOp::Substitute { v: 0, u: 0 }, EditOp::Delete { v: 1 }];
        let application = apply_prefix(&p2(), &ops, &k1(), 1).unwrap();
        assert_eq!(application.graph.vertex_count(), 2);
        assert!(application.graph.has_edge(0, 1));
        assert_eq!(
            application.origins,
            vec![
                VertexOrigin::Substituted { v: 0, u: 0 },
                VertexOrigin::Source { v: 1 }
            ]
        );
        assert_eq!(application.target_mapping(), None);
    }

    #[test]
    fn apply_prefix_resolved_pairs_follow_target_edges() {
        // Triangle -> P3 under the identity: once vertices 0 and 2 are both
        // resolved, their bond must be gone because P3 lacks it.
        let ops = [
            EditOp::Substitute { v: 0, u: 0 },
            EditOp::Substitute { v: 2, u: 2 },
            EditOp::Substitute { v: 1, u: 1 },
        ];
        let mid = apply_prefix(&triangle(), &ops, &path3(), 2).unwrap();
        assert!(!mid.graph.has_edge(0, 2));
        assert!(mid.graph.has_edge(0, 1) && mid.graph.has_edge(1, 2));
        let done = apply_prefix(&triangle(), &ops, &path3(), 3).unwrap();
        assert_eq!(done.graph, path3());
    }

    #[test]
    fn apply_rejects_overlong_prefix() {
        let ops = [EditOp::Delete { v: 0 }];
        assert_eq!(
            apply_prefix(&k1(), &ops, &k1(), 2).unwrap_err(),
            EditError::PrefixOutOfRange {
                prefix_len: 2,
                path_len: 1
            }
        );
    }

    #[test]
    fn mapping_equality_detects_label_and_edge_mismatches() {
        let a = graph(&["C", "N"], &[(0, 1, "s")]);
        let b = graph(&["N", "C"], &[(0, 1, "s")]);
        assert_eq!(graphs_equal_under_mapping(&a, &b, &[1, 0]), Ok(true));
        assert_eq!(graphs_equal_under_mapping(&a, &b, &[0, 1]), Ok(false));
        let c = graph(&["N", "C"], &[]);
        assert_eq!(graphs_equal_under_mapping(&a, &c, &[1, 0]), Ok(false));
        assert_eq!(
            graphs_equal_under_mapping(&a, &b, &[0, 0]),
            Err(EditError::MappingNotBijective { a: 2, b: 2 })
        );
    }
}
