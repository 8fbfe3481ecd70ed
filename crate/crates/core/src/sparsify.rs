//! Single-level sparsification.
//!
//! Every node nominates `t_i = ceil(d_i^e)` of its incident edges and an edge
//! survives when either endpoint nominates it, so no node that had an edge
//! loses all of them. Nominations are ranked by a score: algebraic distance
//! (keep the δ-strongest or δ-weakest), a per-node histogram of δ sampled
//! across bins (mixture), or one of the local baselines.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::algdist::{compute_algdist, AlgDistParams};
use crate::error::{Error, Result};
use crate::graph::{EdgeAttr, Graph};
use crate::scores::EdgeScores;
use crate::seeding::stream_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Keep the highest-scoring edges per node (local structure).
    KeepStrong,
    /// Keep the lowest-scoring edges per node (long-range structure).
    KeepWeak,
    /// Sample across a histogram of the node's scores.
    Mixture,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Scorer {
    AlgDist(AlgDistParams),
    /// Rank a neighbor by its degree.
    LocalDegree,
    /// Open-neighborhood Jaccard similarity.
    Jaccard,
    /// Uniform random scores.
    Random,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparsifyPlan {
    pub exponent: f64,
    pub mode: Mode,
    pub scorer: Scorer,
    pub seed: u64,
}

impl SparsifyPlan {
    pub fn new(exponent: f64, mode: Mode) -> Self {
        SparsifyPlan {
            exponent,
            mode,
            scorer: Scorer::AlgDist(AlgDistParams::default()),
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.exponent) {
            return Err(Error::validation(format!(
                "sparsification exponent must lie in [0, 1], got {}",
                self.exponent
            )));
        }
        if let Scorer::AlgDist(p) = &self.scorer {
            p.validate()?;
        }
        Ok(())
    }
}

/// Number of edges node of degree `degree` nominates: `ceil(d^e)` clamped to `[1, d]`.
pub fn retention_budget(degree: usize, exponent: f64) -> usize {
    if degree == 0 {
        return 0;
    }
    let raw = (degree as f64).powf(exponent);
    // Absorb powf rounding so exact powers (4^0.5) do not round up.
    let t = (raw - 1e-9).ceil() as usize;
    t.clamp(1, degree)
}

/// Histogram layout for one node's scores.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinSpec {
    pub width: f64,
    pub count: usize,
    pub min: f64,
}

impl BinSpec {
    /// Width `h = 3.5 σ / cbrt(d)` with σ the population standard deviation.
    /// `None` when binning is meaningless (fewer than two values or σ = 0).
    pub fn for_values(values: &[f64]) -> Option<BinSpec> {
        let d = values.len();
        if d <= 1 {
            return None;
        }
        let mean = values.iter().sum::<f64>() / d as f64;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / d as f64;
        let sigma = var.sqrt();
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(sigma > 0.0) {
            return None;
        }
        let width = 3.5 * sigma / (d as f64).cbrt();
        let (min, max) = values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        let count = (((max - min) / width).ceil() as usize).max(1);
        Some(BinSpec { width, count, min })
    }

    pub fn bin_of(&self, value: f64) -> usize {
        (((value - self.min) / self.width).floor() as usize).min(self.count - 1)
    }
}

/// Scores edges according to `plan.scorer`.
pub fn score(g: &Graph, plan: &SparsifyPlan) -> Result<EdgeScores> {
    Ok(match &plan.scorer {
        Scorer::AlgDist(p) => compute_algdist(g, p)?,
        Scorer::LocalDegree => score_local_degree(g),
        Scorer::Jaccard => score_jaccard(g),
        Scorer::Random => score_random(g, plan.seed),
    })
}

/// Scores and filters in one call, dispatching on `plan.mode`.
pub fn sparsify(g: &Graph, plan: &SparsifyPlan) -> Result<Graph> {
    plan.validate()?;
    let scores = score(g, plan)?;
    match plan.mode {
        Mode::Mixture => sparsify_binned(g, &scores, plan),
        _ => sparsify_single(g, &scores, plan),
    }
}

/// Ranking sparsifier: each node nominates its top `t_i` neighbors.
pub fn sparsify_single(g: &Graph, scores: &EdgeScores, plan: &SparsifyPlan) -> Result<Graph> {
    Ok(g.filter_edges(&select_single(g, scores, plan)?))
}

pub fn select_single(g: &Graph, scores: &EdgeScores, plan: &SparsifyPlan) -> Result<EdgeAttr<bool>> {
    plan.validate()?;
    scores.check_matches(g)?;
    let descending = match plan.mode {
        Mode::KeepStrong => true,
        Mode::KeepWeak => false,
        Mode::Mixture => {
            return Err(Error::validation("mixture mode uses the binned sparsifier"));
        }
    };
    let e = plan.exponent;
    Ok(union_of_nominations(g, |i| {
        let t = retention_budget(g.degree(i), e);
        let mut slots: Vec<usize> = g.slots(i).collect();
        let key = |s: usize| scores.at(s, g.slot_edge(s));
        // Slots are already in ascending neighbor id order, so a stable sort
        // breaks score ties toward the smaller neighbor.
        slots.sort_by(|&a, &b| {
            let ord = key(a).total_cmp(&key(b));
            if descending { ord.reverse() } else { ord }
        });
        slots.truncate(t);
        slots.into_iter().map(|s| g.slot_edge(s)).collect()
    }))
}

/// Histogram sparsifier: each node spreads its `t_i` nominations over the
/// bins of its score distribution.
pub fn sparsify_binned(g: &Graph, scores: &EdgeScores, plan: &SparsifyPlan) -> Result<Graph> {
    Ok(g.filter_edges(&select_binned(g, scores, plan)?))
}

pub fn select_binned(g: &Graph, scores: &EdgeScores, plan: &SparsifyPlan) -> Result<EdgeAttr<bool>> {
    plan.validate()?;
    scores.check_matches(g)?;
    let e = plan.exponent;
    Ok(union_of_nominations(g, |i| {
        let t = retention_budget(g.degree(i), e);
        binned_order(g, scores, i, plan.seed, t)
    }))
}

/// The first `t` edges of node `i`'s random bin-interleaved order.
///
/// Bins are visited round-robin in a random order and each visit takes one
/// random remaining edge, so the nominations for a smaller `t` are always a
/// prefix of those for a larger one.
fn binned_order(g: &Graph, scores: &EdgeScores, i: usize, seed: u64, t: usize) -> Vec<usize> {
    let slots = g.slots(i);
    let edges = g.neighbor_edges(i);
    let mut rng = stream_rng(seed, i as u64);
    let values: Vec<f64> = slots.clone().map(|s| scores.at(s, g.slot_edge(s))).collect();

    let Some(spec) = BinSpec::for_values(&values) else {
        let mut pick = edges.to_vec();
        let (chosen, _) = pick.partial_shuffle(&mut rng, t);
        return chosen.to_vec();
    };
    let mut bins: Vec<Vec<usize>> = vec![Vec::new(); spec.count];
    for (k, &v) in values.iter().enumerate() {
        bins[spec.bin_of(v)].push(edges[k]);
    }
    let mut order: Vec<usize> = (0..spec.count).filter(|&b| !bins[b].is_empty()).collect();
    order.shuffle(&mut rng);

    let mut chosen = Vec::with_capacity(t);
    while chosen.len() < t {
        for &b in &order {
            if chosen.len() == t {
                break;
            }
            let bin = &mut bins[b];
            if !bin.is_empty() {
                let k = rng.gen_range(0..bin.len());
                chosen.push(bin.swap_remove(k));
            }
        }
    }
    chosen
}

fn union_of_nominations<F>(g: &Graph, nominate: F) -> EdgeAttr<bool>
where
    F: Fn(usize) -> Vec<usize> + Sync,
{
    let picks: Vec<Vec<usize>> = (0..g.n())
        .into_par_iter()
        .with_min_len(256)
        .map(&nominate)
        .collect();
    let mut keep = EdgeAttr::filled(g, false);
    for e in picks.into_iter().flatten() {
        keep[e] = true;
    }
    keep
}

/// Per-slot score `d_j`: the local-degree baseline ranks neighbors by degree.
pub fn score_local_degree(g: &Graph) -> EdgeScores {
    let values = (0..g.n())
        .flat_map(|i| g.neighbors(i).iter().map(|&j| g.degree(j) as f64))
        .collect();
    EdgeScores::per_slot(g, values).expect("one value per slot")
}

/// `|N_i ∩ N_j| / |N_i ∪ N_j|` over open neighborhoods.
pub fn score_jaccard(g: &Graph) -> EdgeScores {
    let values: Vec<f64> = (0..g.m())
        .into_par_iter()
        .with_min_len(1024)
        .map(|e| {
            let (i, j) = g.edge(e);
            let common = sorted_intersection_count(g.neighbors(i), g.neighbors(j));
            let union = g.degree(i) + g.degree(j) - common;
            common as f64 / union as f64
        })
        .collect();
    EdgeScores::symmetric(EdgeAttr::from_vec(g, values).expect("one value per edge"), false)
}

pub(crate) fn sorted_intersection_count(a: &[usize], b: &[usize]) -> usize {
    let (mut x, mut y, mut count) = (0, 0, 0);
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            Ordering::Less => x += 1,
            Ordering::Greater => y += 1,
            Ordering::Equal => {
                count += 1;
                x += 1;
                y += 1;
            }
        }
    }
    count
}

pub fn score_random(g: &Graph, seed: u64) -> EdgeScores {
    let mut rng = stream_rng(seed, u64::MAX);
    let values = (0..g.m()).map(|_| rng.gen::<f64>()).collect();
    EdgeScores::symmetric(EdgeAttr::from_vec(g, values).expect("one value per edge"), false)
}

/// Sparsifies at each exponent in order, stopping once the result has fewer
/// edges than nodes (that result is not returned).
pub fn sweep(g: &Graph, scores: &EdgeScores, plan: &SparsifyPlan, exponents: &[f64]) -> Result<Vec<(f64, Graph)>> {
    let mut out = Vec::new();
    for &e in exponents {
        let p = SparsifyPlan { exponent: e, ..plan.clone() };
        let sparse = match p.mode {
            Mode::Mixture => sparsify_binned(g, scores, &p)?,
            _ => sparsify_single(g, scores, &p)?,
        };
        if sparse.m() < g.n() {
            break;
        }
        out.push((e, sparse));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_planted_partition, generate_random_connected};
    use crate::metrics::connected_components;

    fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|l| (0, l, 1.0))).unwrap()
    }

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j, 1.0)))).unwrap()
    }

    fn is_bridge(u: usize, v: usize) -> bool {
        u / 10 != v / 10
    }

    #[test]
    fn budget_rounding() {
        assert_eq!(retention_budget(4, 0.5), 2);
        assert_eq!(retention_budget(10, 0.5), 4);
        assert_eq!(retention_budget(7, 1.0), 7);
        assert_eq!(retention_budget(7, 0.0), 1);
        assert_eq!(retention_budget(0, 0.3), 0);
        assert_eq!(retention_budget(9, 0.5), 3);
    }

    #[test]
    fn exponent_one_is_identity_and_zero_nominates_once() {
        let g = generate_random_connected(80, 300, 4).unwrap();
        let s = compute_algdist(&g, &AlgDistParams::default()).unwrap();
        for mode in [Mode::KeepStrong, Mode::KeepWeak] {
            assert_eq!(sparsify_single(&g, &s, &SparsifyPlan::new(1.0, mode)).unwrap(), g);
            let h = sparsify_single(&g, &s, &SparsifyPlan::new(0.0, mode)).unwrap();
            assert!(h.m() >= g.n().div_ceil(2) && h.m() <= g.n());
        }
        assert_eq!(sparsify_binned(&g, &s, &SparsifyPlan::new(1.0, Mode::Mixture)).unwrap(), g);
    }

    #[test]
    fn mixture_rejected_by_ranking_sparsifier() {
        let g = complete(4);
        let s = score_jaccard(&g);
        assert!(select_single(&g, &s, &SparsifyPlan::new(0.5, Mode::Mixture)).is_err());
        assert!(select_single(&g, &s, &SparsifyPlan::new(1.5, Mode::KeepWeak)).is_err());
    }

    #[test]
    fn mismatched_scores_rejected() {
        let g = complete(4);
        let other = score_jaccard(&complete(5));
        assert!(sparsify_single(&g, &other, &SparsifyPlan::new(0.5, Mode::KeepStrong)).is_err());
        assert!(sparsify_binned(&g, &other, &SparsifyPlan::new(0.5, Mode::Mixture)).is_err());
    }

    #[test]
    fn figure_one_separation() {
        let (mut strong_ok, mut weak_ok) = (0, 0);
        for seed in 0..10 {
            let g = generate_planted_partition(3, 10, 3, seed).unwrap();
            let s = compute_algdist(&g, &AlgDistParams::default().with_seed(seed)).unwrap();
            let strong = sparsify_single(&g, &s, &SparsifyPlan::new(0.5, Mode::KeepStrong)).unwrap();
            let weak = sparsify_single(&g, &s, &SparsifyPlan::new(0.5, Mode::KeepWeak)).unwrap();
            if connected_components(&strong).count >= 3 {
                strong_ok += 1;
            }
            let bridges = weak.edges().filter(|&(u, v, _)| is_bridge(u, v)).count();
            if connected_components(&weak).count == 1 && bridges == 3 {
                weak_ok += 1;
            }
        }
        assert!(strong_ok >= 9 && weak_ok >= 9, "strong {strong_ok} weak {weak_ok}");
    }

    #[test]
    fn mixture_keeps_both_ranges() {
        let mut ok = 0;
        for seed in 0..10 {
            let g = generate_planted_partition(3, 10, 3, seed).unwrap();
            let s = compute_algdist(&g, &AlgDistParams::default().with_seed(seed)).unwrap();
            let plan = SparsifyPlan { seed, ..SparsifyPlan::new(0.5, Mode::Mixture) };
            let h = sparsify_binned(&g, &s, &plan).unwrap();
            let bridges = h.edges().filter(|&(u, v, _)| is_bridge(u, v)).count();
            let clusters_with_intra = (0..3)
                .filter(|&c| h.edges().any(|(u, v, _)| u / 10 == c && v / 10 == c))
                .count();
            if bridges >= 1 && clusters_with_intra == 3 {
                ok += 1;
            }
        }
        assert!(ok >= 9, "mixture preserved both ranges in {ok}/10");
    }

    #[test]
    fn equal_scores_fall_back_to_uniform_pick() {
        let g = star(5);
        let flat = EdgeScores::symmetric(EdgeAttr::filled(&g, 2.0), false);
        let mut hits = [0usize; 6];
        for seed in 0..300 {
            let plan = SparsifyPlan { seed, ..SparsifyPlan::new(0.0, Mode::Mixture) };
            let picks = binned_order(&g, &flat, 0, plan.seed, 1);
            assert_eq!(picks.len(), 1);
            hits[g.edge(picks[0]).1] += 1;
        }
        // Every leaf gets picked by the hub a fair share of the time.
        assert!(hits[1..].iter().all(|&h| h > 30), "{hits:?}");
    }

    #[test]
    fn bin_spec_matches_formula() {
        let v = [1.0, 2.0, 3.0, 4.0, 10.0, 11.0, 12.0, 13.0];
        let spec = BinSpec::for_values(&v).unwrap();
        let mean = 7.0;
        let sigma = (v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / 8.0).sqrt();
        assert!((spec.width - 3.5 * sigma / 2.0).abs() < 1e-12);
        assert_eq!(spec.count, (12.0 / spec.width).ceil() as usize);
        assert_eq!(spec.bin_of(13.0), spec.count - 1);
        assert_eq!(spec.bin_of(1.0), 0);
        assert!(BinSpec::for_values(&[3.0, 3.0]).is_none());
        assert!(BinSpec::for_values(&[3.0]).is_none());
    }

    #[test]
    fn local_degree_star_keeps_everything() {
        let g = star(5);
        let s = score_local_degree(&g);
        let h = sparsify_single(&g, &s, &SparsifyPlan::new(0.0, Mode::KeepStrong)).unwrap();
        assert_eq!(h.m(), 5);
    }

    #[test]
    fn local_degree_ranking_on_path() {
        let g = Graph::from_edges(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap();
        let s = score_local_degree(&g);
        assert_eq!(s.between(&g, 1, 2), Some(2.0));
        assert_eq!(s.between(&g, 1, 0), Some(1.0));
        let h = sparsify_single(&g, &s, &SparsifyPlan::new(0.0, Mode::KeepStrong)).unwrap();
        // Node 1 prefers 2, node 2 prefers 1, leaves keep their only edge.
        assert_eq!(h.m(), 3);
    }

    #[test]
    fn local_degree_matches_reference() {
        let g = generate_random_connected(20, 60, 17).unwrap();
        let s = score_local_degree(&g);
        let h = sparsify_single(&g, &s, &SparsifyPlan::new(0.5, Mode::KeepStrong)).unwrap();

        // Reference: per node, sort (degree desc, id asc) and keep the first ceil(sqrt(d)).
        let mut expected = std::collections::BTreeSet::new();
        for i in 0..g.n() {
            let mut nb: Vec<usize> = g.neighbors(i).to_vec();
            nb.sort_by_key(|&j| (std::cmp::Reverse(g.degree(j)), j));
            let t = (1..).find(|t| t * t >= g.degree(i)).unwrap();
            for &j in nb.iter().take(t) {
                expected.insert((i.min(j), i.max(j)));
            }
        }
        let got: std::collections::BTreeSet<_> = h.edges().map(|(u, v, _)| (u, v)).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn jaccard_small_cases() {
        let k3 = complete(3);
        let s = score_jaccard(&k3);
        assert!(s.edge_values().unwrap().iter().all(|&v| (v - 1.0 / 3.0).abs() < 1e-15));
        let k4 = complete(4);
        assert!(score_jaccard(&k4).edge_values().unwrap().iter().all(|&v| v == 0.5));
        let g = generate_planted_partition(2, 4, 1, 0).unwrap();
        let s = score_jaccard(&g);
        let bridge = g.edges().position(|(u, v, _)| u / 4 != v / 4).unwrap();
        assert_eq!(s.edge_values().unwrap()[bridge], 0.0);
    }

    #[test]
    fn sweep_stops_below_node_count() {
        let g = generate_random_connected(100, 400, 8).unwrap();
        let s = compute_algdist(&g, &AlgDistParams::default()).unwrap();
        let es = [0.9, 0.7, 0.5, 0.3, 0.1, 0.0];
        let runs = sweep(&g, &s, &SparsifyPlan::new(0.0, Mode::KeepStrong), &es).unwrap();
        assert!(!runs.is_empty() && runs.len() < es.len());
        assert!(runs.iter().all(|(_, h)| h.m() >= g.n()));
    }

    #[test]
    fn dispatching_entry_point() {
        let g = generate_random_connected(40, 120, 1).unwrap();
        for scorer in [Scorer::Jaccard, Scorer::LocalDegree, Scorer::Random] {
            let plan = SparsifyPlan { scorer, ..SparsifyPlan::new(0.5, Mode::KeepWeak) };
            let h = sparsify(&g, &plan).unwrap();
            assert!(h.m() <= g.m() && h.m() >= g.n() / 2);
        }
    }
}
