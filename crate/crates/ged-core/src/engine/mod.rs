//! K-best level-wise edit-distance search.
//!
//! [`ged_kbest`] sweeps the source graph one vertex per level, in natural
//! order. Every node of the current frontier branches into one successor per
//! unused target vertex (substitution, ascending) plus one deletion; from
//! that candidate pool only the `k` cheapest partial paths survive to the
//! next level. After the last level, each surviving leaf is completed by
//! inserting the target vertices it never used, and the cheapest completed
//! path wins.
//!
//! The search is deterministic for a fixed input and `k`, independent of
//! thread count: ties are broken by candidate tag (parent frontier position,
//! then successor order), and every floating-point sum is accumulated with
//! the same canonical term grouping a from-scratch
//! [`path_cost`](crate::edit::path_cost) walk uses.
//!
//! With `k` large enough to hold every possible path the result is the exact
//! edit distance; the interesting regime is small `k`, where the frontier
//! cap turns an exponential enumeration into `O(levels * k * |V2|)` work at
//! the price of optimality guarantees.

pub(crate) mod context;
mod reference;

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cost::{CostError, CostModel};
use crate::edit::{EditOp, EditPath};
use crate::graph::LabeledGraph;
use crate::topk::{select_k_smallest, Candidate};

use context::{
    bit_set, completion_ped, deletion_ped, set_bit, substitution_ped, EvalScratch, PairContext,
    MAX_VERTICES, UNMAPPED,
};
pub use reference::{branch, finalize_insertions, implied_edge_cost, SearchNode};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("g{side} has {n} vertices, above the supported maximum of {max}")]
    TooLarge { side: u8, n: usize, max: usize },
    #[error("k must be at least 1")]
    ZeroK,
    #[error(transparent)]
    Costs(#[from] CostError),
    #[error(
        "out of memory holding {candidates} candidates at level {level}; lower k or the workload"
    )]
    Capacity { level: usize, candidates: u64 },
    #[error("cannot branch on source vertex {got}; the next unresolved vertex is {expected}")]
    WrongVertex { expected: u32, got: u32 },
    #[error("node still has unresolved source vertices (next is {next_vertex})")]
    Incomplete { next_vertex: u32 },
    /// A hand-built node referenced vertices outside its graphs.
    #[error(transparent)]
    Edit(#[from] crate::edit::EditError),
}

/// Search parameters for [`ged_kbest`].
#[derive(Debug, Clone)]
pub struct EngineConfig {
    /// Frontier cap: how many partial paths survive each level.
    pub k: usize,
    pub costs: CostModel,
    /// Number of chunks candidate generation is split into. Purely a
    /// performance knob; results never depend on it.
    pub workers: usize,
    /// Record per-level frontier statistics in the result.
    pub collect_level_stats: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            k: 700_000,
            costs: CostModel::default(),
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            collect_level_stats: false,
        }
    }
}

/// Per-level search telemetry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelStats {
    /// Level index: the source vertex resolved at this step.
    pub level: u32,
    /// Successor candidates the frontier generated.
    pub candidates: u64,
    /// Frontier width after selection.
    pub retained: u64,
    /// Cheapest partial cost in the retained frontier.
    pub min_ped: f64,
    /// Costliest partial cost in the retained frontier.
    pub max_ped: f64,
}

/// Outcome of a search: the best edit path found and its cost.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GedResult {
    /// Total cost of `path`; an upper bound on (and often equal to) the true
    /// edit distance.
    pub distance: f64,
    pub path: EditPath,
    /// Per-level telemetry; empty unless requested.
    pub levels: Vec<LevelStats>,
}

/// Flat frontier: row `p` of each array describes one partial path.
struct Frontier {
    /// Columns per assignment row (= levels completed).
    level: usize,
    /// Words per usage-bitset row.
    words: usize,
    /// Columns per `into_used` row: the target vertex count, at least one so
    /// rows keep a nonzero stride when the target graph is empty.
    iu_stride: usize,
    len: usize,
    /// `level`-column rows: target index or [`UNMAPPED`] per source vertex.
    assigned: Vec<u16>,
    /// Bitset rows marking consumed target vertices.
    used: Vec<u64>,
    /// `n2`-column rows: per target vertex, its edge count into the consumed
    /// set. Maintained incrementally so successor pricing never rescans the
    /// usage bitset.
    into_used: Vec<u16>,
    ped: Vec<f64>,
}

impl Frontier {
    fn root(words: usize, n2: usize) -> Self {
        let iu_stride = n2.max(1);
        Frontier {
            level: 0,
            words,
            iu_stride,
            len: 1,
            assigned: Vec::new(),
            used: vec![0; words],
            into_used: vec![0; iu_stride],
            ped: vec![0.0],
        }
    }

    #[inline]
    fn assigned_row(&self, p: usize) -> &[u16] {
        &self.assigned[p * self.level..(p + 1) * self.level]
    }

    #[inline]
    fn used_row(&self, p: usize) -> &[u64] {
        &self.used[p * self.words..(p + 1) * self.words]
    }

    #[inline]
    fn edges_into_used_row(&self, p: usize) -> &[u16] {
        &self.into_used[p * self.iu_stride..(p + 1) * self.iu_stride]
    }
}

#[inline]
fn candidate_tag(parent: usize, successor: usize, n2: usize) -> u64 {
    parent as u64 * (n2 as u64 + 1) + successor as u64
}

/// Shared upper bound on costs that can still make the cut, as `f64` bits.
///
/// Valid because all costs are non-negative, where IEEE-754 bit patterns
/// order like the values they encode. Each worker keeps a max-heap of the
/// `k` cheapest candidate costs it generated; the k-th cheapest within any
/// single worker is an upper bound on the k-th cheapest overall, so the
/// shared minimum of the published heap tops never drops below the true
/// selection threshold. Candidates costlier than the bound can be dropped
/// before entering the pool without ever losing a survivor, and since the
/// survivors are re-selected exactly afterwards, the result stays
/// independent of scheduling.
struct CostBound(AtomicU64);

impl CostBound {
    fn new() -> Self {
        CostBound(AtomicU64::new(f64::INFINITY.to_bits()))
    }

    #[inline]
    fn get(&self) -> f64 {
        f64::from_bits(self.0.load(Ordering::Relaxed))
    }

    #[inline]
    fn lower_to(&self, cost_bits: u64) {
        self.0.fetch_min(cost_bits, Ordering::Relaxed);
    }
}

/// Worker-local top-k tracker feeding a [`CostBound`].
struct WorkerHeap {
    heap: std::collections::BinaryHeap<u64>,
    k: usize,
}

impl WorkerHeap {
    fn new(k: usize) -> Self {
        WorkerHeap {
            heap: std::collections::BinaryHeap::new(),
            k,
        }
    }

    #[inline]
    fn offer(&mut self, cost: f64, bound: &CostBound) {
        let bits = cost.to_bits();
        if self.heap.len() < self.k {
            self.heap.push(bits);
            if self.heap.len() == self.k {
                bound.lower_to(*self.heap.peek().expect("non-empty"));
            }
        } else if bits < *self.heap.peek().expect("non-empty") {
            {
                let mut top = self.heap.peek_mut().expect("non-empty");
                *top = bits;
            }
            bound.lower_to(*self.heap.peek().expect("non-empty"));
        }
    }
}

/// Generates the surviving candidates for the node range `lo..hi`.
fn expand_chunk(
    ctx: &PairContext,
    frontier: &Frontier,
    lo: usize,
    hi: usize,
    level: usize,
    estimated: u64,
    bound: Option<(&CostBound, usize)>,
) -> Result<Vec<Candidate>, EngineError> {
    let n2 = ctx.n2;
    let mut out: Vec<Candidate> = Vec::new();
    let mut pruning: Option<(WorkerHeap, &CostBound)> =
        bound.map(|(b, k)| (WorkerHeap::new(k), b));
    let mut scratch = EvalScratch::new(ctx);
    for p in lo..hi {
        let base = frontier.ped[p];
        let cutoff = pruning
            .as_ref()
            .map_or(f64::INFINITY, |(_, bound)| bound.get());
        // Costs only grow along a path, so once the prefix alone exceeds the
        // cutoff no successor of this node can survive selection.
        if base > cutoff {
            continue;
        }
        let assigned = frontier.assigned_row(p);
        let used = frontier.used_row(p);
        scratch.begin(ctx, assigned);
        let remaining =
            n2 - used.iter().map(|w| w.count_ones() as usize).sum::<usize>();
        if out.capacity() - out.len() < remaining + 1 {
            out.try_reserve(remaining + 1).map_err(|_| EngineError::Capacity {
                level,
                candidates: estimated,
            })?;
        }
        let into_used = frontier.edges_into_used_row(p);
        for (w, &word) in used.iter().enumerate() {
            let width = (n2 - w * 64).min(64);
            let mut free = !word;
            if width < 64 {
                free &= (1u64 << width) - 1;
            }
            while free != 0 {
                let u = w * 64 + free.trailing_zeros() as usize;
                free &= free - 1;
                let ped = substitution_ped(ctx, &scratch, u, into_used[u] as u32, base);
                if ped > cutoff {
                    continue;
                }
                out.push(Candidate {
                    cost: ped,
                    tag: candidate_tag(p, u, n2),
                });
                if let Some((heap, bound)) = pruning.as_mut() {
                    heap.offer(ped, bound);
                }
            }
        }
        let ped = deletion_ped(ctx, level, base);
        if ped <= cutoff {
            out.push(Candidate {
                cost: ped,
                tag: candidate_tag(p, n2, n2),
            });
            if let Some((heap, bound)) = pruning.as_mut() {
                heap.offer(ped, bound);
            }
        }
    }
    Ok(out)
}

fn try_make_vec<T: Clone + Default>(len: usize, level: usize, candidates: u64) -> Result<Vec<T>, EngineError> {
    let mut v = Vec::new();
    v.try_reserve_exact(len)
        .map_err(|_| EngineError::Capacity { level, candidates })?;
    v.resize(len, T::default());
    Ok(v)
}

/// Runs the K-best search and returns the cheapest complete path found.
pub fn ged_kbest(
    g1: &LabeledGraph,
    g2: &LabeledGraph,
    config: &EngineConfig,
) -> Result<GedResult, EngineError> {
    config.costs.validate()?;
    if config.k == 0 {
        return Err(EngineError::ZeroK);
    }
    let (n1, n2) = (g1.vertex_count(), g2.vertex_count());
    if n1 > MAX_VERTICES {
        return Err(EngineError::TooLarge { side: 1, n: n1, max: MAX_VERTICES });
    }
    if n2 > MAX_VERTICES {
        return Err(EngineError::TooLarge { side: 2, n: n2, max: MAX_VERTICES });
    }
    let ctx = PairContext::new(g1, g2, config.costs);
    let k = config.k;
    let workers = config.workers.max(1);

    let mut frontier = Frontier::root(ctx.words, n2);
    let mut levels: Vec<LevelStats> = Vec::new();

    for level in 0..n1 {
        // Conceptual successor count: one per unused target per node, plus
        // one deletion per node. Independent of pruning, so it doubles as a
        // stable telemetry value.
        let used_total: u64 = frontier
            .used
            .par_iter()
            .map(|w| w.count_ones() as u64)
            .sum();
        let estimated =
            frontier.len as u64 * (n2 as u64 + 1) - used_total;

        // Abandoning evaluations early pays off when the pool dwarfs k;
        // below that the bookkeeping costs more than it saves.
        let prune = estimated > 4 * k as u64 && estimated > 100_000;
        let bound = CostBound::new();
        let bound_ref = prune.then_some((&bound, k));

        let chunk = frontier.len.div_ceil(workers).max(1);
        let ranges: Vec<(usize, usize)> = (0..frontier.len)
            .step_by(chunk)
            .map(|lo| (lo, (lo + chunk).min(frontier.len)))
            .collect();
        let buffers: Vec<Vec<Candidate>> = ranges
            .into_par_iter()
            .map(|(lo, hi)| expand_chunk(&ctx, &frontier, lo, hi, level, estimated, bound_ref))
            .collect::<Result<_, _>>()?;

        let total: usize = buffers.iter().map(Vec::len).sum();
        let mut pool: Vec<Candidate> = Vec::new();
        pool.try_reserve_exact(total)
            .map_err(|_| EngineError::Capacity { level, candidates: estimated })?;
        for buffer in &buffers {
            pool.extend_from_slice(buffer);
        }
        drop(buffers);

        let mut selected = select_k_smallest(&pool, k).expect("k validated at entry");
        drop(pool);
        // Canonical frontier order: by tag, i.e. by (parent, successor).
        selected.par_sort_unstable_by_key(|candidate| candidate.tag);

        let next_level = level + 1;
        let mut assigned =
            try_make_vec::<u16>(selected.len() * next_level, level, estimated)?;
        let iu_stride = frontier.iu_stride;
        let mut used = try_make_vec::<u64>(selected.len() * ctx.words, level, estimated)?;
        let mut into_used = try_make_vec::<u16>(selected.len() * iu_stride, level, estimated)?;
        let mut ped = try_make_vec::<f64>(selected.len(), level, estimated)?;
        assigned
            .par_chunks_mut(next_level)
            .zip(used.par_chunks_mut(ctx.words))
            .zip(into_used.par_chunks_mut(iu_stride))
            .zip(ped.par_iter_mut())
            .zip(selected.par_iter())
            .for_each(|((((assigned_row, used_row), into_used_row), ped_out), candidate)| {
                let parent = (candidate.tag / (n2 as u64 + 1)) as usize;
                let successor = (candidate.tag % (n2 as u64 + 1)) as usize;
                assigned_row[..level].copy_from_slice(frontier.assigned_row(parent));
                used_row.copy_from_slice(frontier.used_row(parent));
                into_used_row.copy_from_slice(frontier.edges_into_used_row(parent));
                if successor == n2 {
                    assigned_row[level] = UNMAPPED;
                } else {
                    assigned_row[level] = successor as u16;
                    set_bit(used_row, successor);
                    for &w in ctx.g2_neighbors(successor) {
                        into_used_row[w as usize] += 1;
                    }
                }
                *ped_out = candidate.cost;
            });

        frontier = Frontier {
            level: next_level,
            words: ctx.words,
            iu_stride,
            len: selected.len(),
            assigned,
            used,
            into_used,
            ped,
        };

        if config.collect_level_stats {
            let (mut min_ped, mut max_ped) = (f64::INFINITY, f64::NEG_INFINITY);
            for &p in &frontier.ped {
                min_ped = min_ped.min(p);
                max_ped = max_ped.max(p);
            }
            levels.push(LevelStats {
                level: level as u32,
                candidates: estimated,
                retained: frontier.len as u64,
                min_ped,
                max_ped,
            });
        }
    }

    // Complete every survivor with its forced insertions and keep the best.
    let finished: Vec<f64> = (0..frontier.len)
        .into_par_iter()
        .map(|p| completion_ped(&ctx, frontier.used_row(p), frontier.ped[p]))
        .collect();
    let mut winner = 0;
    for p in 1..finished.len() {
        if finished[p] < finished[winner] {
            winner = p;
        }
    }

    let assigned = frontier.assigned_row(winner);
    let used = frontier.used_row(winner);
    let mut ops: Vec<EditOp> = Vec::with_capacity(n1 + n2);
    for (v, &m) in assigned.iter().enumerate() {
        ops.push(if m == UNMAPPED {
            EditOp::Delete { v: v as u32 }
        } else {
            EditOp::Substitute { v: v as u32, u: m as u32 }
        });
    }
    for u in 0..n2 {
        if !bit_set(used, u) {
            ops.push(EditOp::Insert { u: u as u32 });
        }
    }
    let distance = finished[winner];
    Ok(GedResult {
        distance,
        path: EditPath { ops, total_cost: distance },
        levels,
    })
}
