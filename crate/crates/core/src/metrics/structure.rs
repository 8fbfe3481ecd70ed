use std::collections::VecDeque;

use rayon::prelude::*;

use crate::graph::Graph;
use crate::sparsify::sorted_intersection_count;

/// Graphs up to this many nodes get an all-sources BFS diameter.
pub const EXACT_DIAMETER_LIMIT: usize = 10_000;
const BOUNDING_BFS_CAP: usize = 2_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    /// `c_i = λ_i / τ_i`, zero for nodes of degree below two.
    pub local: Vec<f64>,
    /// Mean of `c_i` over nodes with degree above one; zero if there are none.
    pub global: f64,
}

pub fn clustering_coefficients(g: &Graph) -> Clustering {
    let local: Vec<f64> = (0..g.n())
        .into_par_iter()
        .with_min_len(256)
        .map(|i| {
            let d = g.degree(i);
            if d < 2 {
                return 0.0;
            }
            let nbrs = g.neighbors(i);
            let twice_triangles: usize = nbrs
                .iter()
                .map(|&j| sorted_intersection_count(nbrs, g.neighbors(j)))
                .sum();
            let tau = (d * (d - 1) / 2) as f64;
            (twice_triangles / 2) as f64 / tau
        })
        .collect();
    let eligible: Vec<f64> = (0..g.n()).filter(|&i| g.degree(i) > 1).map(|i| local[i]).collect();
    let global = if eligible.is_empty() {
        0.0
    } else {
        eligible.iter().sum::<f64>() / eligible.len() as f64
    };
    Clustering { local, global }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub count: usize,
    /// Component id per node; ids increase with each component's smallest node.
    pub labels: Vec<usize>,
}

pub fn connected_components(g: &Graph) -> Components {
    let mut labels = vec![usize::MAX; g.n()];
    let mut count = 0;
    let mut queue = VecDeque::new();
    for s in 0..g.n() {
        if labels[s] != usize::MAX {
            continue;
        }
        labels[s] = count;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                if labels[v] == usize::MAX {
                    labels[v] = count;
                    queue.push_back(v);
                }
            }
        }
        count += 1;
    }
    Components { count, labels }
}

/// Hop distances from `source`; `usize::MAX` marks unreachable nodes.
pub fn bfs_distances(g: &Graph, source: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.n()];
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

fn eccentricity(dist: &[usize]) -> usize {
    dist.iter().filter(|&&d| d != usize::MAX).copied().max().unwrap_or(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Diameter {
    pub value: usize,
    /// False when the bounding search hit its BFS cap and `value` is only a
    /// lower bound.
    pub exact: bool,
}

/// Largest finite shortest-path length, ignoring weights.
pub fn diameter(g: &Graph) -> Diameter {
    if g.n() <= EXACT_DIAMETER_LIMIT {
        Diameter { value: diameter_all_sources(g), exact: true }
    } else {
        diameter_bounding(g, BOUNDING_BFS_CAP)
    }
}

pub fn diameter_all_sources(g: &Graph) -> usize {
    (0..g.n())
        .into_par_iter()
        .map(|s| eccentricity(&bfs_distances(g, s)))
        .max()
        .unwrap_or(0)
}

/// Eccentricity-bounding diameter search, run per component.
///
/// Every BFS from `v` tightens `max(ecc(v) - d, d) <= ecc(w) <= ecc(v) + d`
/// for all `w` in the component; nodes whose bounds can no longer change the
/// answer are dropped from the candidate set. Sources alternate between the
/// candidate with the largest upper bound and the one with the smallest lower
/// bound. Exact unless `max_bfs` searches are exhausted first.
pub fn diameter_bounding(g: &Graph, max_bfs: usize) -> Diameter {
    let comps = connected_components(g);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); comps.count];
    for (v, &c) in comps.labels.iter().enumerate() {
        members[c].push(v);
    }
    let mut lower = vec![0usize; g.n()];
    let mut upper = vec![usize::MAX; g.n()];
    let mut best = 0;
    let mut exact = true;
    let mut budget = max_bfs;

    for nodes in members.into_iter().filter(|c| c.len() > 1) {
        let mut candidates = nodes.clone();
        let (mut d_low, mut d_up) = (0usize, usize::MAX);
        let mut pick_high = true;
        while d_low < d_up && !candidates.is_empty() {
            if budget == 0 {
                exact = false;
                break;
            }
            budget -= 1;
            let key = |&v: &usize| (g.degree(v), std::cmp::Reverse(v));
            let v = if pick_high {
                *candidates.iter().max_by_key(|&&w| (upper[w], key(&w))).unwrap()
            } else {
                *candidates.iter().min_by_key(|&&w| (lower[w], std::cmp::Reverse(key(&w)))).unwrap()
            };
            pick_high = !pick_high;

            let dist = bfs_distances(g, v);
            let ecc = eccentricity(&dist);
            lower[v] = ecc;
            upper[v] = ecc;
            for &w in &nodes {
                let d = dist[w];
                lower[w] = lower[w].max(ecc.saturating_sub(d)).max(d);
                upper[w] = upper[w].min(ecc + d);
            }
            d_low = nodes.iter().map(|&w| lower[w]).max().unwrap();
            d_up = nodes.iter().map(|&w| upper[w]).max().unwrap();
            candidates.retain(|&w| {
                let settled = lower[w] == upper[w];
                let irrelevant = upper[w] <= d_low && 2 * lower[w] >= d_up;
                !(settled || irrelevant)
            });
        }
        best = best.max(d_low);
    }
    Diameter { value: best, exact }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_planted_partition, generate_random_connected};

    fn two_triangles_bridge() -> Graph {
        Graph::from_edges(
            6,
            [(0, 1, 1.), (0, 2, 1.), (1, 2, 1.), (3, 4, 1.), (3, 5, 1.), (4, 5, 1.), (2, 3, 1.)],
        )
        .unwrap()
    }

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i, 1.0))).unwrap()
    }

    #[test]
    fn clustering_small_graphs() {
        let k3 = Graph::from_edges(3, [(0, 1, 1.), (0, 2, 1.), (1, 2, 1.)]).unwrap();
        let c = clustering_coefficients(&k3);
        assert_eq!(c.local, vec![1.0; 3]);
        assert_eq!(c.global, 1.0);

        let star = Graph::from_edges(6, (1..6).map(|l| (0, l, 1.0))).unwrap();
        assert_eq!(clustering_coefficients(&star).global, 0.0);

        let c = clustering_coefficients(&two_triangles_bridge());
        assert!((c.local[2] - 1.0 / 3.0).abs() < 1e-15);
        assert!((c.global - 7.0 / 9.0).abs() < 1e-15);
        assert_eq!(clustering_coefficients(&Graph::edgeless(4)).global, 0.0);
    }

    #[test]
    fn components_small_graphs() {
        assert_eq!(connected_components(&Graph::edgeless(5)).count, 5);
        assert_eq!(connected_components(&path(6)).count, 1);
        let g = Graph::from_edges(5, [(3, 4, 1.), (0, 2, 1.)]).unwrap();
        let c = connected_components(&g);
        assert_eq!(c.count, 3);
        assert_eq!(c.labels, vec![0, 1, 0, 2, 2]);
    }

    #[test]
    fn diameter_small_graphs() {
        assert_eq!(diameter(&path(4)).value, 3);
        let k5 = Graph::from_edges(5, (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j, 1.0)))).unwrap();
        assert_eq!(diameter(&k5).value, 1);
        assert_eq!(diameter(&Graph::edgeless(0)).value, 0);
        assert_eq!(diameter(&Graph::edgeless(3)).value, 0);
        // Largest over components.
        let g = Graph::from_edges(7, [(0, 1, 1.), (2, 3, 1.), (3, 4, 1.), (4, 5, 1.)]).unwrap();
        assert_eq!(diameter(&g).value, 3);
    }

    #[test]
    fn planted_partition_ring_has_diameter_three() {
        for seed in 0..5 {
            let g = generate_planted_partition(3, 10, 3, seed).unwrap();
            // Brute-force eccentricities.
            let oracle = (0..g.n()).map(|s| eccentricity(&bfs_distances(&g, s))).max().unwrap();
            assert_eq!(oracle, 3);
            assert_eq!(diameter(&g).value, 3);
        }
    }

    #[test]
    fn bounding_agrees_with_all_sources() {
        for seed in 0..25 {
            let n = 20 + (seed as usize * 19) % 480;
            let g = generate_random_connected(n, n + n / 3, seed).unwrap();
            let exact = diameter_all_sources(&g);
            let bounded = diameter_bounding(&g, usize::MAX);
            assert!(bounded.exact);
            assert_eq!(bounded.value, exact, "seed {seed}");
        }
        let g = Graph::from_edges(9, [(0, 1, 1.), (1, 2, 1.), (4, 5, 1.), (6, 7, 1.), (7, 8, 1.), (5, 6, 1.)]).unwrap();
        assert_eq!(diameter_bounding(&g, usize::MAX).value, 4);
    }

    #[test]
    fn bounding_cap_reports_estimate() {
        let g = path(50);
        let d = diameter_bounding(&g, 1);
        assert!(!d.exact);
        assert!(d.value <= 49);
    }
}
