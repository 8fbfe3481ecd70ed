use rand::seq::SliceRandom;

use crate::graph::Graph;
use crate::seeding::stream_rng;

const MAX_SWEEPS: usize = 200;
const MIN_GAIN: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    /// Community per node, numbered by each community's smallest node.
    pub labels: Vec<usize>,
    pub count: usize,
    pub modularity: f64,
}

/// Modularity `Σ_c [L_c/m - (D_c/2m)^2]` of `labels` on the unweighted graph.
pub fn modularity(g: &Graph, labels: &[usize]) -> f64 {
    let m = g.m() as f64;
    if g.m() == 0 {
        return 0.0;
    }
    let k = labels.iter().copied().max().map_or(0, |c| c + 1);
    let mut internal = vec![0.0; k];
    let mut degree = vec![0.0; k];
    for (u, v, _) in g.edges() {
        if labels[u] == labels[v] {
            internal[labels[u]] += 1.0;
        }
    }
    for (i, &c) in labels.iter().enumerate() {
        degree[c] += g.degree(i) as f64;
    }
    internal
        .iter()
        .zip(&degree)
        .map(|(l, d)| l / m - (d / (2.0 * m)) * (d / (2.0 * m)))
        .sum()
}

/// Weighted graph with self-loops, the working form of an aggregation level.
struct Level {
    adj: Vec<Vec<(usize, f64)>>,
    loops: Vec<f64>,
}

impl Level {
    fn strength(&self, i: usize) -> f64 {
        self.adj[i].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * self.loops[i]
    }
}

/// Two-phase Louvain on the unweighted graph: greedy local moves until no
/// positive gain remains, then aggregation, repeated until a level makes no
/// move. Sweep order is a seeded permutation per level.
pub fn modularity_louvain(g: &Graph, seed: u64) -> Partition {
    let n = g.n();
    if g.m() == 0 {
        return Partition { labels: (0..n).collect(), count: n, modularity: 0.0 };
    }
    let mut level = Level {
        adj: (0..n)
            .map(|i| g.neighbors(i).iter().map(|&j| (j, 1.0)).collect())
            .collect(),
        loops: vec![0.0; n],
    };
    let two_m = 2.0 * g.m() as f64;
    let mut membership: Vec<usize> = (0..n).collect();

    for depth in 0.. {
        let size = level.adj.len();
        let strength: Vec<f64> = (0..size).map(|i| level.strength(i)).collect();
        let mut comm: Vec<usize> = (0..size).collect();
        let mut total = strength.clone();
        let mut order: Vec<usize> = (0..size).collect();
        order.shuffle(&mut stream_rng(seed, depth as u64));

        let mut moved_any = false;
        let mut link = vec![0.0; size];
        let mut seen = vec![false; size];
        let mut touched: Vec<usize> = Vec::new();
        for _ in 0..MAX_SWEEPS {
            let mut moved = false;
            for &i in &order {
                let own = comm[i];
                for &(j, w) in &level.adj[i] {
                    let c = comm[j];
                    if !seen[c] {
                        seen[c] = true;
                        touched.push(c);
                    }
                    link[c] += w;
                }
                total[own] -= strength[i];
                let gain = |c: usize, link: &[f64]| link[c] - total[c] * strength[i] / two_m;
                let mut best = own;
                let mut best_gain = gain(own, &link);
                for &c in &touched {
                    let gc = gain(c, &link);
                    if gc > best_gain + MIN_GAIN {
                        best = c;
                        best_gain = gc;
                    }
                }
                total[best] += strength[i];
                if best != own {
                    comm[i] = best;
                    moved = true;
                }
                for &c in &touched {
                    link[c] = 0.0;
                    seen[c] = false;
                }
                touched.clear();
            }
            if !moved {
                break;
            }
            moved_any = true;
        }
        if !moved_any {
            break;
        }

        // Renumber and aggregate.
        let mut index = vec![usize::MAX; size];
        let mut next = 0;
        for c in comm.iter_mut() {
            if index[*c] == usize::MAX {
                index[*c] = next;
                next += 1;
            }
            *c = index[*c];
        }
        for m in membership.iter_mut() {
            *m = comm[*m];
        }
        let mut adj: Vec<std::collections::BTreeMap<usize, f64>> = vec![Default::default(); next];
        let mut loops = vec![0.0; next];
        for i in 0..size {
            loops[comm[i]] += level.loops[i];
            for &(j, w) in &level.adj[i] {
                let (a, b) = (comm[i], comm[j]);
                if a == b {
                    // Each internal edge is seen from both ends.
                    loops[a] += w / 2.0;
                } else {
                    *adj[a].entry(b).or_insert(0.0) += w;
                }
            }
        }
        level = Level {
            adj: adj.into_iter().map(|m| m.into_iter().collect()).collect(),
            loops,
        };
        if next == size {
            break;
        }
    }

    let mut index = vec![usize::MAX; n];
    let mut count = 0;
    let labels: Vec<usize> = membership
        .iter()
        .map(|&c| {
            if index[c] == usize::MAX {
                index[c] = count;
                count += 1;
            }
            index[c]
        })
        .collect();
    let q = modularity(g, &labels);
    Partition { labels, count, modularity: q }
}
