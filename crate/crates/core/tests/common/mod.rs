#![allow(dead_code)]

use netsparse::Graph;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Erdős–Rényi style graph with edge probability `p`; may be disconnected.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((i, j, 1.0));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Random graph with integer weights in 1..=5.
pub fn random_weighted_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((i, j, rng.gen_range(1..=5) as f64));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn two_triangles_bridge() -> Graph {
    Graph::from_edges(
        6,
        [(0, 1, 1.), (0, 2, 1.), (1, 2, 1.), (3, 4, 1.), (3, 5, 1.), (4, 5, 1.), (2, 3, 1.)],
    )
    .unwrap()
}

pub fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n, 0.05f64..0.6, any::<u64>()).prop_map(|(n, p, seed)| random_graph(n, p, seed))
}

/// The same graph with node `i` renamed to `perm[i]`.
pub fn relabel(g: &Graph, perm: &[usize]) -> Graph {
    Graph::from_edges(g.n(), g.edges().map(|(u, v, w)| (perm[u], perm[v], w))).unwrap()
}

pub fn edge_set(g: &Graph) -> Vec<(usize, usize)> {
    g.edges().map(|(u, v, _)| (u, v)).collect()
}

pub fn is_subset(small: &Graph, big: &Graph) -> bool {
    small.n() == big.n()
        && small
            .edges()
            .all(|(u, v, w)| big.edge_index(u, v).map(|e| big.edge_weight(e)) == Some(w))
}
