//! Exact edit-distance oracles.
//!
//! Two independent routes to ground truth, both exponential and meant for
//! small graphs:
//!
//! * [`exact_ged`] - depth-first branch-and-bound over the same successor
//!   structure the K-best engine uses, seeded with the engine's greedy
//!   (`k = 1`) result and pruned by an admissible remaining-cost bound.
//!   Practical up to roughly a dozen vertices per side.
//! * [`exhaustive_ged`] - brute-force enumeration of every complete mapping,
//!   each one priced from scratch by [`path_cost`]. Shares no evaluation
//!   code with the engine or with `exact_ged`, which is the point: it is
//!   the arbiter the cheaper routes are tested against.

use thiserror::Error;

use crate::cost::{CostModel, COST_TOLERANCE};
use crate::edit::{path_cost, EditOp, EditPath};
use crate::engine::context::{
    completion_ped, deletion_ped, substitution_ped, EvalScratch, PairContext, UNMAPPED,
};
use crate::engine::{ged_kbest, EngineConfig, EngineError, GedResult, SearchNode};
use crate::graph::LabeledGraph;

/// Vertex-count ceiling per graph for [`exhaustive_ged`]. Enumeration visits
/// every mapping, so growth beyond this is astronomically slow.
pub const EXHAUSTIVE_MAX_VERTICES: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error(
        "exhaustive enumeration supports at most {max} vertices per graph, got {n1} and {n2}"
    )]
    TooLarge { n1: usize, n2: usize, max: usize },
    #[error("expansion budget of {limit} exhausted; best distance found so far is {}", .incumbent.distance)]
    BudgetExceeded {
        limit: u64,
        /// Best (possibly non-optimal) result at the moment the budget ran
        /// out.
        incumbent: Box<GedResult>,
    },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    /// Maximum number of child evaluations before giving up.
    pub node_limit: u64,
    /// Disable to search without the admissible bound (for testing that
    /// pruning never changes the answer).
    pub use_bound: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            node_limit: 20_000_000,
            use_bound: true,
        }
    }
}

/// Admissible lower bound on the cost still to pay below `node`.
///
/// Counts how many vertices each side must lose or gain (surplus source
/// vertices can only be deleted, surplus target vertices can only be
/// inserted) and does the same for the edges whose both endpoints are still
/// unresolved. Never overestimates: substitutions are assumed free.
pub fn lower_bound(
    node: &SearchNode,
    g1: &LabeledGraph,
    g2: &LabeledGraph,
    costs: &CostModel,
) -> f64 {
    let r1 = g1.vertex_count() as i64 - node.next_vertex as i64;
    let r2 = node.remaining_targets.len() as i64;
    let e1 = g1
        .edges()
        .filter(|&(u, v, _)| u >= node.next_vertex && v >= node.next_vertex)
        .count() as i64;
    let mut in_remaining = vec![false; g2.vertex_count()];
    for &u in &node.remaining_targets {
        in_remaining[u as usize] = true;
    }
    let e2 = g2
        .edges()
        .filter(|&(u, v, _)| in_remaining[u as usize] && in_remaining[v as usize])
        .count() as i64;
    bound_from_counts(r1, r2, e1, e2, costs)
}

fn bound_from_counts(r1: i64, r2: i64, e1: i64, e2: i64, costs: &CostModel) -> f64 {
    (r1 - r2).max(0) as f64 * costs.vertex_del
        + (r2 - r1).max(0) as f64 * costs.vertex_ins
        + (e1 - e2).max(0) as f64 * costs.edge_del
        + (e2 - e1).max(0) as f64 * costs.edge_ins
}

struct Search<'a> {
    ctx: &'a PairContext,
    node_limit: u64,
    use_bound: bool,
    assigned: Vec<u16>,
    used: Vec<u64>,
    /// Per target vertex, its edge count into the used set (maintained with
    /// the same increments the engine frontier applies).
    into_used: Vec<u16>,
    /// Degree of each still-unused target vertex counting only still-unused
    /// neighbours. Stale (and unread) while a vertex is in use.
    deg_rem2: Vec<u32>,
    rem_e2: i64,
    explored: u64,
    incumbent: f64,
    best: Vec<u16>,
}

struct BudgetHit;

impl Search<'_> {
    fn run(
        &mut self,
        depth: usize,
        ped: f64,
        scratch: &mut [EvalScratch],
    ) -> Result<(), BudgetHit> {
        let n1 = self.ctx.n1;
        let n2 = self.ctx.n2;
        if depth == n1 {
            let total = completion_ped(self.ctx, &self.used, ped);
            if total < self.incumbent - COST_TOLERANCE {
                self.incumbent = total;
                self.best.clear();
                self.best.extend_from_slice(&self.assigned);
            }
            return Ok(());
        }
        let (mine, deeper) = scratch.split_first_mut().expect("one scratch per level");
        mine.begin(self.ctx, &self.assigned);
        let r1_child = (n1 - depth - 1) as i64;
        let e1_child = self.ctx.g1_suffix_edges[depth + 1] as i64;
        let r2 = (0..self.ctx.words)
            .map(|w| self.used[w].count_ones() as i64)
            .sum::<i64>();
        let r2 = n2 as i64 - r2;

        for u in 0..n2 {
            if self.used[u >> 6] & (1 << (u & 63)) != 0 {
                continue;
            }
            self.explored += 1;
            if self.explored > self.node_limit {
                return Err(BudgetHit);
            }
            let e2_child = self.rem_e2 - self.deg_rem2[u] as i64;
            let bound = if self.use_bound {
                bound_from_counts(r1_child, r2 - 1, e1_child, e2_child, &self.ctx.costs)
            } else {
                0.0
            };
            let limit = self.incumbent - bound - COST_TOLERANCE;
            let child_ped =
                substitution_ped(self.ctx, mine, u, self.into_used[u] as u32, ped);
            if child_ped > limit {
                continue;
            }
            // Consume u: flip its bit, detach it from remaining degrees.
            self.used[u >> 6] |= 1 << (u & 63);
            self.assigned.push(u as u16);
            self.rem_e2 = e2_child;
            let row = self.ctx.adj2_row(u);
            for (w, &edge) in row.iter().enumerate() {
                if edge != 0 {
                    self.into_used[w] += 1;
                    if self.used[w >> 6] & (1 << (w & 63)) == 0 {
                        self.deg_rem2[w] -= 1;
                    }
                }
            }
            let outcome = self.run(depth + 1, child_ped, deeper);
            for (w, &edge) in row.iter().enumerate() {
                if edge != 0 {
                    self.into_used[w] -= 1;
                    if self.used[w >> 6] & (1 << (w & 63)) == 0 {
                        self.deg_rem2[w] += 1;
                    }
                }
            }
            self.rem_e2 += self.deg_rem2[u] as i64;
            self.assigned.pop();
            self.used[u >> 6] &= !(1 << (u & 63));
            outcome?;
        }

        self.explored += 1;
        if self.explored > self.node_limit {
            return Err(BudgetHit);
        }
        let bound = if self.use_bound {
            bound_from_counts(r1_child, r2, e1_child, self.rem_e2, &self.ctx.costs)
        } else {
            0.0
        };
        let limit = self.incumbent - bound - COST_TOLERANCE;
        let child_ped = deletion_ped(self.ctx, depth, ped);
        if child_ped <= limit {
            self.assigned.push(UNMAPPED);
            let outcome = self.run(depth + 1, child_ped, deeper);
            self.assigned.pop();
            outcome?;
        }
        Ok(())
    }
}

/// Turns a complete assignment row into the canonical operation list.
fn path_from_assignment(assigned: &[u16], n2: usize, distance: f64) -> EditPath {
    let mut ops: Vec<EditOp> = Vec::with_capacity(assigned.len() + n2);
    let mut used = vec![false; n2];
    for (v, &m) in assigned.iter().enumerate() {
        if m == UNMAPPED {
            ops.push(EditOp::Delete { v: v as u32 });
        } else {
            used[m as usize] = true;
            ops.push(EditOp::Substitute {
                v: v as u32,
                u: m as u32,
            });
        }
    }
    for (u, &taken) in used.iter().enumerate() {
        if !taken {
            ops.push(EditOp::Insert { u: u as u32 });
        }
    }
    EditPath {
        ops,
        total_cost: distance,
    }
}

fn assignment_from_path(path: &EditPath, n1: usize) -> Vec<u16> {
    let mut assigned = vec![UNMAPPED; n1];
    for op in &path.ops {
        if let EditOp::Substitute { v, u } = *op {
            assigned[v as usize] = u as u16;
        }
    }
    assigned
}

/// Exact edit distance by branch-and-bound.
///
/// Explores substitutions in ascending target order, then deletion, at every
/// depth; prunes a child when its partial cost plus the admissible bound
/// cannot beat the incumbent. The incumbent starts at the greedy (`k = 1`)
/// engine result, so the search can only confirm or improve it. Runs on one
/// thread; parallelize across pairs, not within one call.
pub fn exact_ged(
    g1: &LabeledGraph,
    g2: &LabeledGraph,
    costs: &CostModel,
    config: &OracleConfig,
) -> Result<GedResult, OracleError> {
    let greedy = ged_kbest(
        g1,
        g2,
        &EngineConfig {
            k: 1,
            costs: *costs,
            workers: 1,
            collect_level_stats: false,
        },
    )?;

    let ctx = PairContext::new(g1, g2, *costs);
    let n2 = ctx.n2;
    let mut scratch: Vec<EvalScratch> = (0..ctx.n1).map(|_| EvalScratch::new(&ctx)).collect();
    let mut search = Search {
        ctx: &ctx,
        node_limit: config.node_limit,
        use_bound: config.use_bound,
        assigned: Vec::with_capacity(ctx.n1),
        used: vec![0u64; ctx.words],
        into_used: vec![0u16; n2],
        deg_rem2: ctx.g2_degrees.clone(),
        rem_e2: ctx.g2_edge_count as i64,
        explored: 0,
        incumbent: greedy.distance,
        best: assignment_from_path(&greedy.path, ctx.n1),
    };
    let outcome = search.run(0, 0.0, &mut scratch);
    let result = GedResult {
        distance: search.incumbent,
        path: path_from_assignment(&search.best, n2, search.incumbent),
        levels: Vec::new(),
    };
    match outcome {
        Ok(()) => Ok(result),
        Err(BudgetHit) => Err(OracleError::BudgetExceeded {
            limit: config.node_limit,
            incumbent: Box::new(result),
        }),
    }
}

/// Exact edit distance by enumerating every complete mapping and pricing
/// each with [`path_cost`]. Deliberately shares no evaluation code with the
/// engine; see the module docs.
pub fn exhaustive_ged(
    g1: &LabeledGraph,
    g2: &LabeledGraph,
    costs: &CostModel,
) -> Result<GedResult, OracleError> {
    let (n1, n2) = (g1.vertex_count(), g2.vertex_count());
    if n1 > EXHAUSTIVE_MAX_VERTICES || n2 > EXHAUSTIVE_MAX_VERTICES {
        return Err(OracleError::TooLarge {
            n1,
            n2,
            max: EXHAUSTIVE_MAX_VERTICES,
        });
    }

    struct Enumeration<'a> {
        g1: &'a LabeledGraph,
        g2: &'a LabeledGraph,
        costs: &'a CostModel,
        ops: Vec<EditOp>,
        used2: Vec<bool>,
        best: Option<(f64, Vec<EditOp>)>,
    }

    impl Enumeration<'_> {
        fn recurse(&mut self, depth: usize) {
            if depth == self.g1.vertex_count() {
                let before = self.ops.len();
                for (u, &used) in self.used2.iter().enumerate() {
                    if !used {
                        self.ops.push(EditOp::Insert { u: u as u32 });
                    }
                }
                let cost = path_cost(&self.ops, self.g1, self.g2, self.costs)
                    .expect("enumerated paths are well-formed");
                // Strict improvement only: the first witness among exact
                // ties wins, and the reported distance is the sharp minimum
                // (no tolerance slack, unlike the pruned search).
                match &self.best {
                    Some((incumbent, _)) if cost >= *incumbent => {}
                    _ => self.best = Some((cost, self.ops.clone())),
                }
                self.ops.truncate(before);
                return;
            }
            for u in 0..self.used2.len() {
                if self.used2[u] {
                    continue;
                }
                self.used2[u] = true;
                self.ops.push(EditOp::Substitute {
                    v: depth as u32,
                    u: u as u32,
                });
                self.recurse(depth + 1);
                self.ops.pop();
                self.used2[u] = false;
            }
            self.ops.push(EditOp::Delete { v: depth as u32 });
            self.recurse(depth + 1);
            self.ops.pop();
        }
    }

    let mut enumeration = Enumeration {
        g1,
        g2,
        costs,
        ops: Vec::with_capacity(n1 + n2),
        used2: vec![false; n2],
        best: None,
    };
    enumeration.recurse(0);
    let (distance, ops) = enumeration
        .best
        .expect("at least the all-delete/all-insert path exists");
    Ok(GedResult {
        distance,
        path: EditPath {
            ops,
            total_cost: distance,
        },
        levels: Vec::new(),
    })
}
