//! Parallel selection of the k cheapest candidates from a flat pool.
//!
//! Selection is exact and deterministic: ties at the cut are broken by the
//! candidate tag, so the retained set depends only on the pool contents and
//! `k`, never on chunking or on how many worker threads rayon happens to run.

use rayon::prelude::*;
use thiserror::Error;

/// A scored item: `cost` decides survival, `tag` breaks ties and lets the
/// caller recover what the candidate meant.
///
/// Tags are expected to be unique within one pool; costs must not be NaN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub cost: f64,
    pub tag: u64,
}

impl Candidate {
    /// The total order selection runs under: `cost` by [`f64::total_cmp`],
    /// then `tag` ascending. Exposed so callers can reproduce the exact
    /// ranking (for instance when verifying a selection).
    #[inline]
    pub fn key(&self) -> (u64, u64) {
        // total_cmp order, encoded so that tuple comparison works: flip the
        // sign bit for non-negative floats, all bits for negative ones.
        let bits = self.cost.to_bits();
        let ordered = if bits >> 63 == 0 {
            bits ^ (1 << 63)
        } else {
            !bits
        };
        (ordered, self.tag)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SelectError {
    #[error("selection size k must be at least 1")]
    ZeroK,
}

/// Smallest chunk worth handing to a separate task.
const MIN_CHUNK: usize = 4096;

/// Returns the `min(k, pool.len())` candidates with the smallest
/// `(cost, tag)` keys, in unspecified order.
///
/// Works in three passes so that large pools never need a full sort: each
/// chunk pre-selects its local cheapest, the union of survivors yields the
/// global cut value, and a filtered gather (plus an exact trim when tags tie
/// at the cut in over-supply) produces the final set.
pub fn select_k_smallest(pool: &[Candidate], k: usize) -> Result<Vec<Candidate>, SelectError> {
    if k == 0 {
        return Err(SelectError::ZeroK);
    }
    if pool.len() <= k {
        return Ok(pool.to_vec());
    }

    let chunk_len = (pool.len().div_ceil(rayon::current_num_threads().max(1))).max(MIN_CHUNK);
    let chunk_count = pool.len().div_ceil(chunk_len);
    // Cheapest candidates each chunk can be asked for while still covering
    // the global top k between them.
    let local_k = k.div_ceil(chunk_count).max(5);

    let mut survivors: Vec<Candidate> = pool
        .par_chunks(chunk_len)
        .flat_map_iter(|chunk| {
            let mut local = chunk.to_vec();
            if local.len() > local_k {
                local.select_nth_unstable_by_key(local_k - 1, Candidate::key);
                local.truncate(local_k);
            }
            local
        })
        .collect();

    if survivors.len() < k {
        // Chunk pre-selection under-supplied (possible only with degenerate
        // chunk shapes); select on a full copy instead.
        survivors = pool.to_vec();
    }
    let (_, cut, _) = survivors.select_nth_unstable_by_key(k - 1, Candidate::key);
    let cut_key = cut.key();

    let mut selected: Vec<Candidate> = pool
        .par_iter()
        .filter(|candidate| candidate.key() <= cut_key)
        .copied()
        .collect();
    debug_assert!(selected.len() >= k);
    if selected.len() > k {
        selected.select_nth_unstable_by_key(k - 1, Candidate::key);
        selected.truncate(k);
    }
    Ok(selected)
}
