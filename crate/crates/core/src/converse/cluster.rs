use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::info::hamming_distance;
use crate::pool::Pool;

/// Largest `M` accepted by the exact search.
pub const MAX_EXACT_M: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClusterMode {
    /// Maximum-size set by branch and bound; lexicographically first among ties.
    Exact,
    /// First-fit in index order.
    Greedy,
}

/// Subset of string indices (0-based) whose members are pairwise at
/// Hamming distance at least `ceil(alpha * L)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterSet {
    pub indices: Vec<usize>,
    pub alpha: f64,
    pub threshold: usize,
    pub exact: bool,
}

impl ClusterSet {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Whether every pair of members respects the distance threshold.
    pub fn is_valid_for(&self, pool: &Pool) -> bool {
        self.indices.iter().enumerate().all(|(a, &i)| {
            self.indices[a + 1..]
                .iter()
                .all(|&j| hamming_distance(pool.get(i), pool.get(j)).unwrap_or(0) >= self.threshold)
        })
    }
}

/// `ceil(alpha * L)`, tolerant to `alpha * L` landing just above an integer.
pub fn separation_threshold(alpha: f64, l: usize) -> usize {
    (alpha * l as f64 - 1e-9).ceil().max(0.0) as usize
}

pub fn cluster_set(pool: &Pool, alpha: f64, mode: ClusterMode) -> Result<ClusterSet> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::domain(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    let m = pool.count();
    let threshold = separation_threshold(alpha, pool.string_len());
    let far = |i: usize, j: usize| hamming_distance(pool.get(i), pool.get(j)).unwrap_or(0) >= threshold;
    let indices = match mode {
        ClusterMode::Greedy => {
            let mut chosen: Vec<usize> = Vec::new();
            for j in 0..m {
                if chosen.iter().all(|&i| far(i, j)) {
                    chosen.push(j);
                }
            }
            chosen
        }
        ClusterMode::Exact => {
            if m > MAX_EXACT_M {
                return Err(Error::domain(format!(
                    "exact clustering supports M <= {MAX_EXACT_M}, got {m}"
                )));
            }
            let compat: Vec<u32> = (0..m)
                .map(|i| (0..m).filter(|&j| j != i && far(i, j)).fold(0u32, |acc, j| acc | 1 << j))
                .collect();
            mask_to_indices(max_compatible_set(&compat))
        }
    };
    Ok(ClusterSet { indices, alpha, threshold, exact: mode == ClusterMode::Exact })
}

pub(crate) fn mask_to_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

/// Maximum clique of the compatibility graph `compat` (bitset adjacency),
/// preferring the lexicographically smallest index list among ties.
pub(crate) fn max_compatible_set(compat: &[u32]) -> u32 {
    struct Search<'a> {
        compat: &'a [u32],
        best: u32,
        best_size: u32,
    }
    impl Search<'_> {
        fn expand(&mut self, current: u32, size: u32, candidates: u32) {
            if candidates == 0 {
                if size > self.best_size {
                    self.best = current;
                    self.best_size = size;
                }
                return;
            }
            if size + candidates.count_ones() <= self.best_size {
                return;
            }
            let v = candidates.trailing_zeros();
            let higher = !((2u32 << v).wrapping_sub(1));
            // include-first visits sets in lexicographic order
            self.expand(current | 1 << v, size + 1, candidates & self.compat[v as usize] & higher);
            self.expand(current, size, candidates & !(1 << v));
        }
    }
    let m = compat.len();
    if m == 0 {
        return 0;
    }
    let all = if m == 32 { u32::MAX } else { (1u32 << m) - 1 };
    let mut search = Search { compat, best: 0, best_size: 0 };
    search.expand(0, 0, all);
    search.best
}

/// For each member `i` of the cluster, the set of input indices `j` whose
/// nearest in-cluster output string is `y_i` (ties go to the smaller `i`).
pub fn partition_a_sets(x_pool: &Pool, y_pool: &Pool, cluster: &ClusterSet) -> Result<BTreeMap<usize, Vec<usize>>> {
    if x_pool.count() != y_pool.count() || x_pool.string_len() != y_pool.string_len() {
        return Err(Error::LengthMismatch { left: x_pool.count(), right: y_pool.count() });
    }
    if cluster.indices.is_empty() {
        return Err(Error::domain("cluster set is empty"));
    }
    if let Some(&bad) = cluster.indices.iter().find(|&&i| i >= y_pool.count()) {
        return Err(Error::domain(format!("cluster index {bad} out of range")));
    }
    let mut sets: BTreeMap<usize, Vec<usize>> = cluster.indices.iter().map(|&i| (i, Vec::new())).collect();
    for j in 0..x_pool.count() {
        let nearest = cluster
            .indices
            .iter()
            .copied()
            .min_by_key(|&i| (hamming_distance(x_pool.get(j), y_pool.get(i)).unwrap_or(usize::MAX), i))
            .expect("non-empty cluster");
        sets.get_mut(&nearest).expect("cluster member").push(j);
    }
    Ok(sets)
}
