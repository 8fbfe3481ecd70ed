use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Graph;
use crate::error::{Error, Result};

/// Disjoint cliques `K_size` joined by `inter_edges` bridges.
///
/// Cluster `c` owns nodes `c*size .. (c+1)*size`. The first `clusters - 1`
/// bridges chain consecutive clusters into a path and the next one closes the
/// cycle, so any `inter_edges >= clusters - 1` yields a connected graph. The
/// rest join uniformly random cross-cluster pairs. Bridge endpoints are
/// random within their clusters and never duplicate an existing bridge.
pub fn generate_planted_partition(
    clusters: usize,
    size: usize,
    inter_edges: usize,
    seed: u64,
) -> Result<Graph> {
    if clusters < 2 || size < 3 {
        return Err(Error::validation("planted partition needs clusters >= 2 and size >= 3"));
    }
    let n = clusters * size;
    let cross_pairs = n * (n - 1) / 2 - clusters * size * (size - 1) / 2;
    if inter_edges > cross_pairs {
        return Err(Error::validation(format!(
            "{inter_edges} bridges requested but only {cross_pairs} cross-cluster pairs exist"
        )));
    }

    let mut edges = Vec::with_capacity(clusters * size * (size - 1) / 2 + inter_edges);
    for c in 0..clusters {
        let base = c * size;
        for i in 0..size {
            for j in i + 1..size {
                edges.push((base + i, base + j, 1.0));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bridges: HashSet<(usize, usize)> = HashSet::with_capacity(inter_edges);
    let ring = if clusters > 2 { clusters } else { 1 };
    let structured = inter_edges.min(ring);
    for k in 0..structured {
        let (a, b) = (k, (k + 1) % clusters);
        loop {
            let u = a * size + rng.gen_range(0..size);
            let v = b * size + rng.gen_range(0..size);
            if bridges.insert((u.min(v), u.max(v))) {
                break;
            }
        }
    }

    let remaining = inter_edges - structured;
    if remaining > 0 {
        if 2 * inter_edges > cross_pairs {
            let mut pool: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|&(u, v)| u / size != v / size && !bridges.contains(&(u, v)))
                .collect();
            pool.shuffle(&mut rng);
            bridges.extend(pool.into_iter().take(remaining));
        } else {
            while bridges.len() < inter_edges {
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                if u / size != v / size {
                    bridges.insert((u.min(v), u.max(v)));
                }
            }
        }
    }
    edges.extend(bridges.into_iter().map(|(u, v)| (u, v, 1.0)));
    Graph::from_edges(n, edges)
}

/// Connected graph with `n` nodes and `m` unit-weight edges: a random
/// recursive tree plus `m - (n - 1)` distinct uniformly random extra edges.
pub fn generate_random_connected(n: usize, m: usize, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::validation("random graph needs at least one node"));
    }
    let max_edges = n * (n - 1) / 2;
    if m + 1 < n || m > max_edges {
        return Err(Error::validation(format!(
            "a connected simple graph on {n} nodes has between {} and {max_edges} edges, got {m}",
            n - 1
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut set: HashSet<(usize, usize)> = HashSet::with_capacity(m);
    for v in 1..n {
        let u = rng.gen_range(0..v);
        set.insert((u, v));
    }
    if 2 * m > max_edges {
        let mut pool: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|p| !set.contains(p))
            .collect();
        pool.shuffle(&mut rng);
        let need = m - set.len();
        set.extend(pool.into_iter().take(need));
    } else {
        while set.len() < m {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v {
                set.insert((u.min(v), u.max(v)));
            }
        }
    }
    Graph::from_edges(n, set.into_iter().map(|(u, v)| (u, v, 1.0)))
}
