//! Structural properties and original-versus-sparse comparison.
//!
//! All metrics treat graphs as unweighted.

mod centrality;
mod louvain;
mod spearman;
mod structure;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::seeding::derive;

pub use centrality::{betweenness_approx, pagerank};
pub use louvain::{modularity, modularity_louvain, Partition};
pub use spearman::{average_ranks, pearson, spearman};
pub use structure::{
    bfs_distances, clustering_coefficients, connected_components, diameter, diameter_all_sources,
    diameter_bounding, Clustering, Components, Diameter, EXACT_DIAMETER_LIMIT,
};

#[derive(Debug, Clone, PartialEq)]
pub struct CompareOptions {
    pub seed: u64,
    /// Betweenness sources per repetition; defaults to `max(100, sqrt(n))`.
    pub pivots: Option<usize>,
    /// Betweenness repetitions whose rank positions are averaged.
    pub repetitions: usize,
    pub damping: f64,
    pub tolerance: f64,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions {
            seed: 0,
            pivots: None,
            repetitions: 10,
            damping: 0.85,
            tolerance: 1e-10,
        }
    }
}

/// Scalar properties of one graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphProperties {
    pub nodes: usize,
    pub edges: usize,
    pub clustering: f64,
    pub diameter: usize,
    pub diameter_exact: bool,
    pub modularity: f64,
    pub components: usize,
}

/// Original-versus-sparse comparison. Undefined correlations and ratios are
/// NaN (serialized as `null`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub edge_ratio: f64,
    /// Original diameter over sparse diameter.
    pub diameter_ratio: f64,
    /// Sparse component count over original component count.
    pub components_ratio: f64,
    /// Sparse modularity over original modularity.
    pub modularity_ratio: f64,
    pub rho_betweenness: f64,
    pub rho_pagerank: f64,
    pub rho_degree: f64,
    pub rho_clustering: f64,
    pub original: GraphProperties,
    pub sparse: GraphProperties,
}

impl ComparisonReport {
    /// Names of correlations that could not be computed.
    pub fn undefined(&self) -> Vec<&'static str> {
        [
            ("rho_betweenness", self.rho_betweenness),
            ("rho_pagerank", self.rho_pagerank),
            ("rho_degree", self.rho_degree),
            ("rho_clustering", self.rho_clustering),
        ]
        .into_iter()
        .filter(|(_, v)| v.is_nan())
        .map(|(k, _)| k)
        .collect()
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        if num == 0.0 { 1.0 } else { f64::NAN }
    } else {
        num / den
    }
}

pub fn default_pivots(n: usize) -> usize {
    100usize.max((n as f64).sqrt().ceil() as usize).min(n.max(1))
}

/// Betweenness rank positions averaged over repetitions with distinct seeds.
fn averaged_betweenness_ranks(g: &Graph, pivots: usize, seed: u64, repetitions: usize) -> Vec<f64> {
    let mut mean = vec![0.0; g.n()];
    for r in 0..repetitions.max(1) {
        let ranks = average_ranks(&betweenness_approx(g, pivots, derive(seed, r, 7)));
        for (m, x) in mean.iter_mut().zip(ranks) {
            *m += x;
        }
    }
    mean.iter_mut().for_each(|m| *m /= repetitions.max(1) as f64);
    mean
}

pub fn properties(g: &Graph, seed: u64) -> GraphProperties {
    let d = diameter(g);
    GraphProperties {
        nodes: g.n(),
        edges: g.m(),
        clustering: clustering_coefficients(g).global,
        diameter: d.value,
        diameter_exact: d.exact,
        modularity: modularity_louvain(g, seed).modularity,
        components: connected_components(g).count,
    }
}

/// Compares a sparsified graph against the original on the same node set.
pub fn compare(original: &Graph, sparse: &Graph, opts: &CompareOptions) -> Result<ComparisonReport> {
    if original.n() != sparse.n() {
        return Err(Error::validation(format!(
            "graphs differ in node count ({} vs {})",
            original.n(),
            sparse.n()
        )));
    }
    let n = original.n();
    let pivots = opts.pivots.unwrap_or_else(|| default_pivots(n));
    let po = properties(original, opts.seed);
    let ps = properties(sparse, opts.seed);

    let bc_o = averaged_betweenness_ranks(original, pivots, opts.seed, opts.repetitions);
    let bc_s = averaged_betweenness_ranks(sparse, pivots, opts.seed, opts.repetitions);
    let pr_o = pagerank(original, opts.damping, opts.tolerance);
    let pr_s = pagerank(sparse, opts.damping, opts.tolerance);
    let deg = |g: &Graph| g.degrees().into_iter().map(|d| d as f64).collect::<Vec<_>>();
    let cc_o = clustering_coefficients(original).local;
    let cc_s = clustering_coefficients(sparse).local;

    Ok(ComparisonReport {
        edge_ratio: ratio(ps.edges as f64, po.edges as f64),
        diameter_ratio: ratio(po.diameter as f64, ps.diameter as f64),
        components_ratio: ratio(ps.components as f64, po.components as f64),
        modularity_ratio: ratio(ps.modularity, po.modularity),
        rho_betweenness: spearman(&bc_o, &bc_s),
        rho_pagerank: spearman(&pr_o, &pr_s),
        rho_degree: spearman(&deg(original), &deg(sparse)),
        rho_clustering: spearman(&cc_o, &cc_s),
        original: po,
        sparse: ps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate_planted_partition;

    #[test]
    fn self_comparison_is_all_ones() {
        let g = generate_planted_partition(3, 10, 3, 2).unwrap();
        let r = compare(&g, &g, &CompareOptions::default()).unwrap();
        for v in [
            r.edge_ratio,
            r.diameter_ratio,
            r.components_ratio,
            r.modularity_ratio,
            r.rho_betweenness,
            r.rho_pagerank,
            r.rho_degree,
            r.rho_clustering,
        ] {
            assert!((v - 1.0).abs() < 1e-12, "{r:?}");
        }
        assert!(r.undefined().is_empty());
    }

    #[test]
    fn against_edgeless() {
        let g = generate_planted_partition(3, 10, 3, 2).unwrap();
        let r = compare(&g, &Graph::edgeless(30), &CompareOptions::default()).unwrap();
        assert_eq!(r.components_ratio, 30.0);
        assert!(r.rho_degree.is_nan());
        assert!(r.undefined().contains(&"rho_degree"));
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"rho_degree\":null"));
    }

    #[test]
    fn node_mismatch_rejected() {
        let g = generate_planted_partition(3, 10, 3, 2).unwrap();
        assert!(compare(&g, &Graph::edgeless(5), &CompareOptions::default()).is_err());
    }
}
