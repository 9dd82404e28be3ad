//! Pair-local compact working representation.
//!
//! Before a search runs, both graphs are flattened into dense structures:
//! interned `u32` label ids, adjacency matrices whose entries are
//! `label id + 1` (so `0` means "no edge"), and per-vertex adjacency bitsets
//! over the target graph. Partial mappings become flat `u16` rows, with
//! [`UNMAPPED`] marking a deleted source vertex.
//!
//! Successor evaluation is split in two. [`EvalScratch::begin`] runs once per
//! search node and distills the node's mapping into bitsets keyed by the next
//! source vertex's neighborhood; [`substitution_ped`] then prices each
//! successor from a handful of masked popcounts. The implied edge charges
//! come out as integer counts, folded into the running cost with
//! [`charge_grouped`](crate::edit::charge_grouped) — the same canonical
//! grouping a from-scratch [`path_cost`](crate::edit::path_cost) walk uses —
//! so incrementally maintained costs reproduce recomputed ones bit for bit.

use std::collections::HashMap;

use crate::cost::CostModel;
use crate::edit::{charge_grouped, ImpliedCounts};
use crate::graph::LabeledGraph;

/// Sentinel in an assignment row: the source vertex was deleted.
pub(crate) const UNMAPPED: u16 = u16::MAX;

/// Largest vertex count either graph may have in compact form; one `u16`
/// value is reserved for [`UNMAPPED`].
pub(crate) const MAX_VERTICES: usize = u16::MAX as usize - 1;

/// Most distinct edge labels for which per-label adjacency bitsets are
/// built. Beyond this, matched-edge label agreement falls back to a scan of
/// the source vertex's resolved neighbors (identical counts, more work).
const EDGE_LABEL_BITSET_LIMIT: usize = 8;

pub(crate) struct PairContext {
    pub n1: usize,
    pub n2: usize,
    /// Words per `g2` usage bitset row (at least one).
    pub words: usize,
    pub vlab1: Vec<u32>,
    pub vlab2: Vec<u32>,
    adj2: Vec<u32>,
    pub costs: CostModel,
    /// `g1_suffix_edges[i]` = edges of `g1` with both endpoints `>= i`.
    pub g1_suffix_edges: Vec<u32>,
    /// Plain degree of every `g2` vertex.
    pub g2_degrees: Vec<u32>,
    pub g2_edge_count: u32,
    /// CSR row starts into `prefix_neighbors`, one row per `g1` vertex.
    prefix_offsets: Vec<u32>,
    /// For `g1` vertex `i`, its neighbors `j < i` as `(j, edge entry)`.
    prefix_neighbors: Vec<(u16, u32)>,
    /// Per `g2` vertex: bitset of its neighbors (`words` words per row).
    adj2_bits: Vec<u64>,
    /// CSR row starts into `adj2_lists`, one row per `g2` vertex.
    adj2_list_offsets: Vec<u32>,
    /// Neighbor lists of `g2`, for walking one vertex's edges cheaply.
    adj2_lists: Vec<u16>,
    /// Dense index per adjacency entry value, or `u32::MAX`; empty when
    /// per-label bitsets are disabled.
    label_index: Vec<u32>,
    /// Per dense label, per `g2` vertex: bitset of neighbors joined by an
    /// edge with that label. Empty when disabled.
    adj2_label_bits: Vec<u64>,
    /// Number of dense edge labels; `0` means per-label bitsets are off.
    label_count: usize,
}

impl PairContext {
    /// Flattens a validated pair of graphs. Callers must have checked both
    /// vertex counts against [`MAX_VERTICES`].
    pub fn new(g1: &LabeledGraph, g2: &LabeledGraph, costs: CostModel) -> Self {
        let n1 = g1.vertex_count();
        let n2 = g2.vertex_count();
        let words = n2.div_ceil(64).max(1);
        let mut ids: HashMap<&crate::graph::Label, u32> = HashMap::new();
        let mut intern = |label| {
            let next = ids.len() as u32;
            *ids.entry(label).or_insert(next)
        };

        let vlab1: Vec<u32> = g1.vertex_labels().iter().map(&mut intern).collect();
        let vlab2: Vec<u32> = g2.vertex_labels().iter().map(&mut intern).collect();

        let mut adj1 = vec![0u32; n1 * n1];
        let mut edges_by_min = vec![0u32; n1 + 1];
        for (u, v, label) in g1.edges() {
            let id = intern(label) + 1;
            adj1[u as usize * n1 + v as usize] = id;
            adj1[v as usize * n1 + u as usize] = id;
            edges_by_min[u.min(v) as usize] += 1;
        }
        let mut g1_suffix_edges = vec![0u32; n1 + 1];
        for i in (0..n1).rev() {
            g1_suffix_edges[i] = g1_suffix_edges[i + 1] + edges_by_min[i];
        }

        let mut adj2 = vec![0u32; n2 * n2];
        let mut g2_degrees = vec![0u32; n2];
        for (u, v, label) in g2.edges() {
            let id = intern(label) + 1;
            adj2[u as usize * n2 + v as usize] = id;
            adj2[v as usize * n2 + u as usize] = id;
            g2_degrees[u as usize] += 1;
            g2_degrees[v as usize] += 1;
        }

        let mut prefix_offsets = vec![0u32; n1 + 1];
        let mut prefix_neighbors: Vec<(u16, u32)> = Vec::new();
        for i in 0..n1 {
            for j in 0..i {
                let entry = adj1[i * n1 + j];
                if entry != 0 {
                    prefix_neighbors.push((j as u16, entry));
                }
            }
            prefix_offsets[i + 1] = prefix_neighbors.len() as u32;
        }

        let mut adj2_bits = vec![0u64; n2 * words];
        let mut adj2_list_offsets = vec![0u32; n2 + 1];
        let mut adj2_lists: Vec<u16> = Vec::new();
        for u in 0..n2 {
            for p in 0..n2 {
                if adj2[u * n2 + p] != 0 {
                    set_bit(&mut adj2_bits[u * words..(u + 1) * words], p);
                    adj2_lists.push(p as u16);
                }
            }
            adj2_list_offsets[u + 1] = adj2_lists.len() as u32;
        }

        // Distinct edge entry values across both graphs decide whether the
        // per-label fast path is available.
        let mut entries: Vec<u32> = adj1
            .iter()
            .chain(adj2.iter())
            .copied()
            .filter(|&e| e != 0)
            .collect();
        entries.sort_unstable();
        entries.dedup();
        let (label_index, adj2_label_bits, label_count) =
            if !entries.is_empty() && entries.len() <= EDGE_LABEL_BITSET_LIMIT {
                let count = entries.len();
                let max_entry = *entries.last().expect("non-empty") as usize;
                let mut index = vec![u32::MAX; max_entry + 1];
                for (dense, &entry) in entries.iter().enumerate() {
                    index[entry as usize] = dense as u32;
                }
                let mut bits = vec![0u64; count * n2 * words];
                for u in 0..n2 {
                    for p in 0..n2 {
                        let entry = adj2[u * n2 + p];
                        if entry != 0 {
                            let dense = index[entry as usize] as usize;
                            let row = (dense * n2 + u) * words;
                            set_bit(&mut bits[row..row + words], p);
                        }
                    }
                }
                (index, bits, count)
            } else {
                (Vec::new(), Vec::new(), 0)
            };

        PairContext {
            n1,
            n2,
            words,
            vlab1,
            vlab2,
            adj2,
            costs,
            g1_suffix_edges,
            g2_degrees,
            g2_edge_count: g2.edge_count() as u32,
            prefix_offsets,
            prefix_neighbors,
            adj2_bits,
            adj2_list_offsets,
            adj2_lists,
            label_index,
            adj2_label_bits,
            label_count,
        }
    }

    #[inline]
    pub fn adj2_row(&self, a: usize) -> &[u32] {
        &self.adj2[a * self.n2..(a + 1) * self.n2]
    }

    /// Neighbor list of `g2` vertex `u`.
    #[inline]
    pub fn g2_neighbors(&self, u: usize) -> &[u16] {
        let lo = self.adj2_list_offsets[u] as usize;
        let hi = self.adj2_list_offsets[u + 1] as usize;
        &self.adj2_lists[lo..hi]
    }

    /// Neighbors `j < i` of `g1` vertex `i`, with their edge entries.
    #[inline]
    fn prefix_row(&self, i: usize) -> &[(u16, u32)] {
        let lo = self.prefix_offsets[i] as usize;
        let hi = self.prefix_offsets[i + 1] as usize;
        &self.prefix_neighbors[lo..hi]
    }

    /// Number of `g1` edges from vertex `i` into `0..i`.
    #[inline]
    pub fn prefix_degree(&self, i: usize) -> u32 {
        self.prefix_offsets[i + 1] - self.prefix_offsets[i]
    }

    #[inline]
    fn adj2_bits_row(&self, u: usize) -> &[u64] {
        &self.adj2_bits[u * self.words..(u + 1) * self.words]
    }

    #[inline]
    fn adj2_label_row(&self, dense: usize, u: usize) -> &[u64] {
        let start = (dense * self.n2 + u) * self.words;
        &self.adj2_label_bits[start..start + self.words]
    }
}

#[inline]
pub(crate) fn bit_set(words: &[u64], index: usize) -> bool {
    words[index >> 6] & (1u64 << (index & 63)) != 0
}

#[inline]
pub(crate) fn set_bit(words: &mut [u64], index: usize) {
    words[index >> 6] |= 1u64 << (index & 63);
}

/// Reusable per-node digest for pricing the successors of one search node.
///
/// [`begin`](Self::begin) runs the shared pass: it walks the next source
/// vertex's already-resolved neighbors once and records where their images
/// sit in the target graph. Every successor is then priced against these
/// bitsets without revisiting the mapping.
pub(crate) struct EvalScratch {
    /// The source vertex being resolved: the mapping's length at `begin`.
    vertex: usize,
    /// Count of resolved `g1` neighbors (substituted or deleted).
    prefix_deg: u32,
    /// Images of the substituted neighbors.
    images: Vec<u64>,
    /// Dense labels touched in `per_label` (kept cleared between nodes).
    active: Vec<u32>,
    /// Per dense label: images of the neighbors joined by that label.
    per_label: Vec<u64>,
    /// Fallback when per-label bitsets are off: `(image, edge entry)` per
    /// substituted neighbor.
    pairs: Vec<(u16, u32)>,
}

impl EvalScratch {
    pub fn new(ctx: &PairContext) -> Self {
        EvalScratch {
            vertex: 0,
            prefix_deg: 0,
            images: vec![0; ctx.words],
            active: Vec::new(),
            per_label: vec![0; ctx.label_count * ctx.words],
            pairs: Vec::new(),
        }
    }

    /// Digests one node's mapping for resolving its next source vertex.
    pub fn begin(&mut self, ctx: &PairContext, assigned: &[u16]) {
        let i = assigned.len();
        self.vertex = i;
        self.prefix_deg = ctx.prefix_degree(i);
        self.images.fill(0);
        for &dense in &self.active {
            let row = dense as usize * ctx.words;
            self.per_label[row..row + ctx.words].fill(0);
        }
        self.active.clear();
        self.pairs.clear();
        for &(j, entry) in ctx.prefix_row(i) {
            let image = assigned[j as usize];
            if image == UNMAPPED {
                continue;
            }
            set_bit(&mut self.images, image as usize);
            if ctx.label_count > 0 {
                let dense = ctx.label_index[entry as usize];
                if !self.active.contains(&dense) {
                    self.active.push(dense);
                }
                let row = dense as usize * ctx.words;
                set_bit(&mut self.per_label[row..row + ctx.words], image as usize);
            } else {
                self.pairs.push((image, entry));
            }
        }
    }

    /// Image bitset for one dense label.
    #[inline]
    fn label_images(&self, ctx: &PairContext, dense: u32) -> &[u64] {
        let start = dense as usize * ctx.words;
        &self.per_label[start..start + ctx.words]
    }
}

/// Partial cost after mapping the scratch's source vertex onto target `u`,
/// starting from `base`. `into_used` is the number of edges from `u` into
/// the node's already-consumed targets, which callers maintain incrementally
/// (it only grows as a path extends, one increment per neighbor of each
/// newly consumed target).
///
/// The implied edge charges are pure intersection counts: edges of `u` into
/// the neighbor images split into label-matched and relabeled substitutions,
/// the remaining resolved neighbors pay deletions, and edges of `u` into
/// otherwise-used targets pay insertions.
#[inline]
pub(crate) fn substitution_ped(
    ctx: &PairContext,
    scratch: &EvalScratch,
    u: usize,
    into_used: u32,
    base: f64,
) -> f64 {
    let vertex_term = if ctx.vlab1[scratch.vertex] == ctx.vlab2[u] {
        0.0
    } else {
        ctx.costs.vertex_sub
    };
    let row = ctx.adj2_bits_row(u);
    let mut matched = 0u32;
    for (&r, &im) in row.iter().zip(&scratch.images) {
        matched += (r & im).count_ones();
    }
    // An edge of `u` carries exactly one label and each image sits in exactly
    // one per-label image set, so the per-label intersections are pairwise
    // disjoint: their union can be counted with one popcount per word.
    let mut same_label = 0u32;
    if ctx.label_count > 0 {
        match *scratch.active.as_slice() {
            [] => {}
            [a] => {
                let label_row = ctx.adj2_label_row(a as usize, u);
                let images = scratch.label_images(ctx, a);
                for (&lr, &im) in label_row.iter().zip(images) {
                    same_label += (lr & im).count_ones();
                }
            }
            [a, b] => {
                let row_a = ctx.adj2_label_row(a as usize, u);
                let row_b = ctx.adj2_label_row(b as usize, u);
                let im_a = scratch.label_images(ctx, a);
                let im_b = scratch.label_images(ctx, b);
                for (((&ra, &ia), &rb), &ib) in
                    row_a.iter().zip(im_a).zip(row_b).zip(im_b)
                {
                    same_label += ((ra & ia) | (rb & ib)).count_ones();
                }
            }
            _ => {
                for &dense in &scratch.active {
                    let label_row = ctx.adj2_label_row(dense as usize, u);
                    let images = scratch.label_images(ctx, dense);
                    for (&lr, &im) in label_row.iter().zip(images) {
                        same_label += (lr & im).count_ones();
                    }
                }
            }
        }
    } else {
        let arow = ctx.adj2_row(u);
        for &(image, entry) in &scratch.pairs {
            if arow[image as usize] == entry {
                same_label += 1;
            }
        }
    }
    let counts = ImpliedCounts {
        esub: matched - same_label,
        edel: scratch.prefix_deg - matched,
        eins: into_used - matched,
    };
    charge_grouped(base, vertex_term, counts, &ctx.costs)
}

/// Partial cost after deleting source vertex `i`: the vertex charge plus one
/// edge deletion per resolved `g1` neighbor.
#[inline]
pub(crate) fn deletion_ped(ctx: &PairContext, i: usize, base: f64) -> f64 {
    let counts = ImpliedCounts {
        esub: 0,
        edel: ctx.prefix_degree(i),
        eins: 0,
    };
    charge_grouped(base, ctx.costs.vertex_del, counts, &ctx.costs)
}

/// Cost of completing a node by inserting every unused `g2` vertex in
/// ascending order, starting from `base`. Each insertion charges the vertex
/// plus one edge insertion per edge into an already-resolved target (used,
/// or unused below it and hence inserted earlier).
pub(crate) fn completion_ped(ctx: &PairContext, used: &[u64], base: f64) -> f64 {
    let mut acc = base;
    let mut resolved = used.to_vec();
    for u in 0..ctx.n2 {
        if bit_set(used, u) {
            continue;
        }
        let row = ctx.adj2_bits_row(u);
        let mut eins = 0u32;
        for w in 0..ctx.words {
            eins += (row[w] & resolved[w]).count_ones();
        }
        let counts = ImpliedCounts {
            esub: 0,
            edel: 0,
            eins,
        };
        acc = charge_grouped(acc, ctx.costs.vertex_ins, counts, &ctx.costs);
        set_bit(&mut resolved, u);
    }
    acc
}
