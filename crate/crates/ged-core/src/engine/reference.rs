//! Plain, allocation-per-node search primitives.
//!
//! These operate directly on [`LabeledGraph`] values and spell out the
//! branching rule one successor at a time. The production search in
//! [`ged_kbest`](super::ged_kbest) uses a flat-array representation instead,
//! but must stay observationally identical to these functions; the test
//! suite drives both and compares.

use crate::cost::CostModel;
use crate::edit::{charge_grouped, implied_counts, op_cost, op_pair, EditError, EditOp, EditPath};
use crate::graph::LabeledGraph;

use super::EngineError;

/// A partial edit path under construction: source vertices strictly below
/// `next_vertex` are resolved by `path`, and `remaining_targets` lists the
/// still-unused target vertices in ascending order.
///
/// `path.total_cost` is the node's partial edit distance; it always equals
/// [`path_cost`](crate::edit::path_cost) of `path.ops`.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchNode {
    pub path: EditPath,
    pub next_vertex: u32,
    pub remaining_targets: Vec<u32>,
}

impl SearchNode {
    /// The empty partial path: nothing resolved, every target available.
    pub fn root(_g1: &LabeledGraph, g2: &LabeledGraph) -> Self {
        SearchNode {
            path: EditPath::empty(),
            next_vertex: 0,
            remaining_targets: (0..g2.vertex_count() as u32).collect(),
        }
    }

    /// The node's partial edit distance.
    pub fn ped(&self) -> f64 {
        self.path.total_cost
    }

    /// True once every source vertex has been substituted or deleted.
    pub fn source_exhausted(&self, g1: &LabeledGraph) -> bool {
        self.next_vertex as usize == g1.vertex_count()
    }
}

/// Sum of the edge charges implied by appending `op` to `node`'s path: one
/// potential charge per already-applied operation, per the second-endpoint
/// rule, grouped by kind.
pub fn implied_edge_cost(
    node: &SearchNode,
    op: EditOp,
    g1: &LabeledGraph,
    g2: &LabeledGraph,
    costs: &CostModel,
) -> Result<f64, EditError> {
    // Surface bad indices before touching adjacency.
    op_cost(op, g1, g2, costs)?;
    let pair = op_pair(op);
    let counts = implied_counts(node.path.ops.iter().map(|&prev| op_pair(prev)), pair, g1, g2);
    Ok(charge_grouped(0.0, 0.0, counts, costs))
}

/// Appends `op` to a node, maintaining the partial cost incrementally with
/// the same term grouping as a from-scratch recomputation.
fn extend(
    node: &SearchNode,
    op: EditOp,
    g1: &LabeledGraph,
    g2: &LabeledGraph,
    costs: &CostModel,
) -> Result<SearchNode, EditError> {
    let pair = op_pair(op);
    let vertex_term = op_cost(op, g1, g2, costs)?;
    let counts = implied_counts(node.path.ops.iter().map(|&prev| op_pair(prev)), pair, g1, g2);
    let total = charge_grouped(node.path.total_cost, vertex_term, counts, costs);
    let mut ops = node.path.ops.clone();
    ops.push(op);
    Ok(SearchNode {
        path: EditPath {
            ops,
            total_cost: total,
        },
        next_vertex: match op {
            EditOp::Substitute { .. } | EditOp::Delete { .. } => node.next_vertex + 1,
            EditOp::Insert { .. } => node.next_vertex,
        },
        remaining_targets: match pair.1 {
            Some(u) => node
                .remaining_targets
                .iter()
                .copied()
                .filter(|&t| t != u)
                .collect(),
            None => node.remaining_targets.clone(),
        },
    })
}

/// All successors of `node` obtained by resolving source vertex `v`: one
/// substitution per remaining target in ascending order, then the deletion.
///
/// `v` must be exactly the node's next unresolved source vertex.
pub fn branch(
    node: &SearchNode,
    v: u32,
    g1: &LabeledGraph,
    g2: &LabeledGraph,
    costs: &CostModel,
) -> Result<Vec<SearchNode>, EngineError> {
    if v != node.next_vertex || v as usize >= g1.vertex_count() {
        return Err(EngineError::WrongVertex {
            expected: node.next_vertex,
            got: v,
        });
    }
    let mut successors = Vec::with_capacity(node.remaining_targets.len() + 1);
    for &u in &node.remaining_targets {
        successors.push(extend(node, EditOp::Substitute { v, u }, g1, g2, costs)?);
    }
    successors.push(extend(node, EditOp::Delete { v }, g1, g2, costs)?);
    Ok(successors)
}

/// Completes a source-exhausted node by inserting every remaining target in
/// ascending order, returning the finished node.
pub fn finalize_insertions(
    node: &SearchNode,
    g1: &LabeledGraph,
    g2: &LabeledGraph,
    costs: &CostModel,
) -> Result<SearchNode, EngineError> {
    if !node.source_exhausted(g1) {
        return Err(EngineError::Incomplete {
            next_vertex: node.next_vertex,
        });
    }
    let mut done = node.clone();
    for &u in &node.remaining_targets {
        done = extend(&done, EditOp::Insert { u }, g1, g2, costs)?;
    }
    Ok(done)
}
