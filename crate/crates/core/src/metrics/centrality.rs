use std::collections::VecDeque;

use rand::seq::index::sample;
use rayon::prelude::*;

use crate::graph::Graph;
use crate::seeding::stream_rng;

const MAX_PAGERANK_ITERS: usize = 10_000;
const SOURCE_CHUNK: usize = 16;

/// PageRank of the unweighted random walk on `g`.
///
/// Iterates until the L1 change drops below `tol`. Isolated nodes spread
/// their mass uniformly.
pub fn pagerank(g: &Graph, damping: f64, tol: f64) -> Vec<f64> {
    let n = g.n();
    if n == 0 {
        return Vec::new();
    }
    let nf = n as f64;
    let mut rank = vec![1.0 / nf; n];
    let mut share = vec![0.0; n];
    for _ in 0..MAX_PAGERANK_ITERS {
        let mut dangling = 0.0;
        for i in 0..n {
            let d = g.degree(i);
            if d == 0 {
                dangling += rank[i];
                share[i] = 0.0;
            } else {
                share[i] = rank[i] / d as f64;
            }
        }
        let base = (1.0 - damping) / nf + damping * dangling / nf;
        let next: Vec<f64> = (0..n)
            .into_par_iter()
            .with_min_len(1024)
            .map(|i| base + damping * g.neighbors(i).iter().map(|&j| share[j]).sum::<f64>())
            .collect();
        let change: f64 = next.iter().zip(&rank).map(|(a, b)| (a - b).abs()).sum();
        rank = next;
        if change < tol {
            break;
        }
    }
    let total: f64 = rank.iter().sum();
    rank.iter_mut().for_each(|r| *r /= total);
    rank
}

/// Betweenness estimated from `pivots` distinct random sources and scaled by
/// `n / pivots`. With `pivots >= n` every node is a source and the result is
/// the exact undirected betweenness (each unordered pair counted once).
pub fn betweenness_approx(g: &Graph, pivots: usize, seed: u64) -> Vec<f64> {
    let n = g.n();
    if n == 0 {
        return Vec::new();
    }
    let k = pivots.clamp(1, n);
    let mut sources: Vec<usize> = if k == n {
        (0..n).collect()
    } else {
        sample(&mut stream_rng(seed, 0), n, k).into_vec()
    };
    sources.sort_unstable();

    // Fixed-size chunks summed in order keep the float reduction deterministic.
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut acc = vec![0.0; n];
            let mut work = BrandesWork::new(n);
            for &s in chunk {
                work.accumulate(g, s, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; n];
    for p in partials {
        for (t, v) in total.iter_mut().zip(p) {
            *t += v;
        }
    }
    let scale = n as f64 / k as f64 / 2.0;
    total.iter_mut().for_each(|v| *v *= scale);
    total
}

struct BrandesWork {
    dist: Vec<usize>,
    sigma: Vec<f64>,
    delta: Vec<f64>,
    order: Vec<usize>,
    queue: VecDeque<usize>,
}

impl BrandesWork {
    fn new(n: usize) -> Self {
        BrandesWork {
            dist: vec![usize::MAX; n],
            sigma: vec![0.0; n],
            delta: vec![0.0; n],
            order: Vec::with_capacity(n),
            queue: VecDeque::new(),
        }
    }

    /// Adds the single-source dependencies of `s` to `acc`.
    fn accumulate(&mut self, g: &Graph, s: usize, acc: &mut [f64]) {
        for &v in &self.order {
            self.dist[v] = usize::MAX;
            self.sigma[v] = 0.0;
            self.delta[v] = 0.0;
        }
        self.order.clear();
        self.dist[s] = 0;
        self.sigma[s] = 1.0;
        self.queue.push_back(s);
        while let Some(u) = self.queue.pop_front() {
            self.order.push(u);
            for &v in g.neighbors(u) {
                if self.dist[v] == usize::MAX {
                    self.dist[v] = self.dist[u] + 1;
                    self.queue.push_back(v);
                }
                if self.dist[v] == self.dist[u] + 1 {
                    self.sigma[v] += self.sigma[u];
                }
            }
        }
        for &w in self.order.iter().rev() {
            for &v in g.neighbors(w) {
                if self.dist[v] != usize::MAX && self.dist[v] + 1 == self.dist[w] {
                    self.delta[v] += self.sigma[v] / self.sigma[w] * (1.0 + self.delta[w]);
                }
            }
            if w != s {
                acc[w] += self.delta[w];
            }
        }
    }
}
