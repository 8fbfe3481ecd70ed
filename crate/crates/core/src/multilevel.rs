//! Multilevel sparsification.
//!
//! The graph is coarsened by aggregation: a dominating set of seeds becomes
//! the coarse nodes, every other node joins the seed neighbor it is most
//! strongly coupled to (interpolation order one), and the coarse graph is the
//! Galerkin product `P^T L P` without its diagonal. Sparsification then runs
//! from the coarsest level back to the finest. A coarse edge bundles all fine
//! edges between its two aggregates; removing it removes the whole bundle.
//! After inheriting the coarser decisions, algebraic distances are recomputed
//! on the partially sparsified graph and the level applies its own binned
//! sparsification when its configuration entry is not `-1`.
//!
//! Configuration vectors are ordered coarsest level first.

use std::fmt;

use crate::algdist::{compute_algdist, AlgDistParams};
use crate::error::{Error, Result};
use crate::graph::{EdgeAttr, Graph};
use crate::scores::EdgeScores;
use crate::seeding::derive;
use crate::sparsify::{select_binned, Mode, SparsifyPlan};

const SALT_RECOMPUTE: u64 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct CoarseningParams {
    /// Levels with at most this many nodes are not coarsened further.
    pub coarsest_size: usize,
    /// A node becomes a seed while its coupling to existing seeds is below this.
    pub coupling: f64,
    pub max_levels: usize,
}

impl Default for CoarseningParams {
    fn default() -> Self {
        CoarseningParams {
            coarsest_size: 100,
            coupling: 0.5,
            max_levels: 64,
        }
    }
}

impl CoarseningParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.coupling > 0.0 && self.coupling <= 1.0) {
            return Err(Error::validation("coupling threshold must lie in (0, 1]"));
        }
        if self.max_levels == 0 {
            return Err(Error::validation("max_levels must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MultilevelParams {
    pub algdist: AlgDistParams,
    pub coarsening: CoarseningParams,
    /// Seed of the per-level binned sparsification.
    pub seed: u64,
}

/// Seed set chosen by [`select_seeds`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seeds {
    is_seed: Vec<bool>,
}

impl Seeds {
    pub fn contains(&self, i: usize) -> bool {
        self.is_seed[i]
    }

    pub fn count(&self) -> usize {
        self.is_seed.iter().filter(|&&s| s).count()
    }

    /// Seeds in ascending node order.
    pub fn nodes(&self) -> Vec<usize> {
        (0..self.is_seed.len()).filter(|&i| self.is_seed[i]).collect()
    }
}

/// Node-to-aggregate assignment with exactly one aggregate per fine node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Restriction {
    assignment: Vec<usize>,
    seeds: Vec<usize>,
}

impl Restriction {
    /// Restriction from an explicit aggregate id per fine node. Ids must
    /// cover `0..k` without gaps; each aggregate's smallest member is its seed.
    pub fn from_assignment(assignment: Vec<usize>) -> Result<Self> {
        let k = assignment.iter().copied().max().map_or(0, |c| c + 1);
        let mut seeds = vec![usize::MAX; k];
        for (i, &c) in assignment.iter().enumerate() {
            if seeds[c] == usize::MAX {
                seeds[c] = i;
            }
        }
        if seeds.contains(&usize::MAX) {
            return Err(Error::validation("aggregate ids must be contiguous"));
        }
        Ok(Restriction { assignment, seeds })
    }

    /// Coarse node of fine node `i`.
    pub fn aggregate(&self, i: usize) -> usize {
        self.assignment[i]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Fine seed node behind each coarse node.
    pub fn seeds(&self) -> &[usize] {
        &self.seeds
    }

    pub fn fine_len(&self) -> usize {
        self.assignment.len()
    }

    pub fn coarse_len(&self) -> usize {
        self.seeds.len()
    }
}

fn coupling_order(g: &Graph, scores: &EdgeScores) -> Vec<usize> {
    let strength: Vec<f64> = (0..g.n())
        .map(|i| g.slots(i).map(|s| scores.at(s, g.slot_edge(s))).sum())
        .collect();
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by(|&a, &b| strength[b].total_cmp(&strength[a]).then(a.cmp(&b)));
    order
}

/// Greedy dominating seed set.
///
/// Nodes are visited by decreasing total incident score. A node becomes a
/// seed when the share of its score mass going to existing seeds is below
/// the coupling threshold, so every non-seed has a seed neighbor.
pub fn select_seeds(g: &Graph, scores: &EdgeScores, coupling: f64) -> Result<Seeds> {
    scores.check_matches(g)?;
    if !(coupling > 0.0 && coupling <= 1.0) {
        return Err(Error::validation("coupling threshold must lie in (0, 1]"));
    }
    let mut is_seed = vec![false; g.n()];
    for i in coupling_order(g, scores) {
        let (mut to_seeds, mut total) = (0.0, 0.0);
        for s in g.slots(i) {
            let v = scores.at(s, g.slot_edge(s));
            total += v;
            if is_seed[g.slot_target(s)] {
                to_seeds += v;
            }
        }
        let has_seed_neighbor = g.neighbors(i).iter().any(|&j| is_seed[j]);
        // A node without seed neighbors always qualifies, even when its scores are all zero.
        if !has_seed_neighbor || to_seeds < coupling * total {
            is_seed[i] = true;
        }
    }
    Ok(Seeds { is_seed })
}

/// Assigns every non-seed to the seed neighbor with the largest score.
/// Ties go to the smaller seed id.
pub fn build_restriction(g: &Graph, scores: &EdgeScores, seeds: &Seeds) -> Result<Restriction> {
    scores.check_matches(g)?;
    if seeds.is_seed.len() != g.n() {
        return Err(Error::validation("seed set does not match graph"));
    }
    let seed_nodes = seeds.nodes();
    let mut coarse_id = vec![usize::MAX; g.n()];
    for (k, &s) in seed_nodes.iter().enumerate() {
        coarse_id[s] = k;
    }
    let mut assignment = vec![0; g.n()];
    for i in 0..g.n() {
        if seeds.contains(i) {
            assignment[i] = coarse_id[i];
            continue;
        }
        let mut best: Option<(f64, usize)> = None;
        for s in g.slots(i) {
            let j = g.slot_target(s);
            if !seeds.contains(j) {
                continue;
            }
            let v = scores.at(s, g.slot_edge(s));
            // Neighbors ascend, so a strict comparison keeps the smaller id on ties.
            if best.is_none_or(|(bv, _)| v > bv) {
                best = Some((v, j));
            }
        }
        let (_, j) = best.ok_or_else(|| {
            Error::Invariant(format!("node {i} is neither a seed nor adjacent to one"))
        })?;
        assignment[i] = coarse_id[j];
    }
    Ok(Restriction { assignment, seeds: seed_nodes })
}

/// Coarse graph whose Laplacian is the off-diagonal part of `P^T L P`:
/// `w_IJ` sums the weights of all fine edges running between aggregates `I ≠ J`.
pub fn galerkin_coarsen(fine: &Graph, r: &Restriction) -> Result<Graph> {
    if r.fine_len() != fine.n() {
        return Err(Error::validation("restriction does not match graph"));
    }
    let mut cross: Vec<(usize, usize, f64)> = fine
        .edges()
        .filter_map(|(u, v, w)| {
            let (a, b) = (r.aggregate(u), r.aggregate(v));
            (a != b).then(|| (a.min(b), a.max(b), w))
        })
        .collect();
    cross.sort_by_key(|&(a, b, _)| (a, b));
    let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(cross.len());
    for (a, b, w) in cross {
        match merged.last_mut() {
            Some(last) if (last.0, last.1) == (a, b) => last.2 += w,
            _ => merged.push((a, b, w)),
        }
    }
    Graph::from_edges(r.coarse_len(), merged)
}

/// Fine-edge retention mask implied by a sparsified coarse graph.
///
/// A fine edge is dropped exactly when it runs between two aggregates whose
/// coarse edge is absent from `sparse_coarse`.
pub fn uncoarsen_decisions(fine: &Graph, r: &Restriction, sparse_coarse: &Graph) -> Result<EdgeAttr<bool>> {
    let coarse = galerkin_coarsen(fine, r)?;
    if sparse_coarse.n() != coarse.n() {
        return Err(Error::validation("sparse coarse graph has the wrong node count"));
    }
    let mut kept = EdgeAttr::filled(&coarse, false);
    for (a, b, _) in sparse_coarse.edges() {
        let e = coarse.edge_index(a, b).ok_or_else(|| {
            Error::validation(format!("coarse edge ({a}, {b}) does not exist at this level"))
        })?;
        kept[e] = true;
    }
    Ok(inherit(fine, r, &coarse, &kept))
}

fn inherit(fine: &Graph, r: &Restriction, coarse: &Graph, coarse_kept: &EdgeAttr<bool>) -> EdgeAttr<bool> {
    let keep = fine
        .edges()
        .map(|(u, v, _)| {
            let (a, b) = (r.aggregate(u), r.aggregate(v));
            a == b || coarse_kept[coarse.edge_index(a, b).expect("cross edge has a coarse image")]
        })
        .collect();
    EdgeAttr::from_vec(fine, keep).expect("one entry per fine edge")
}

#[derive(Debug, Clone)]
pub struct Level {
    pub graph: Graph,
    /// Algebraic distances used to coarsen this level.
    pub scores: EdgeScores,
    /// Map to the next coarser level; `None` on the coarsest.
    pub restriction: Option<Restriction>,
}

/// Levels from the input graph (index 0) to the coarsest.
#[derive(Debug, Clone)]
pub struct Hierarchy {
    pub levels: Vec<Level>,
    pub params: CoarseningParams,
}

impl Hierarchy {
    pub fn build(g: &Graph, algdist: &AlgDistParams, params: &CoarseningParams) -> Result<Self> {
        params.validate()?;
        algdist.validate()?;
        let mut levels = Vec::new();
        let mut current = g.clone();
        loop {
            let depth = levels.len();
            let p = AlgDistParams { seed: derive(algdist.seed, depth, 0), ..algdist.clone() };
            let scores = compute_algdist(&current, &p)?;
            if current.n() <= params.coarsest_size || depth + 1 >= params.max_levels {
                levels.push(Level { graph: current, scores, restriction: None });
                break;
            }
            let seeds = select_seeds(&current, &scores, params.coupling)?;
            if seeds.count() == current.n() {
                levels.push(Level { graph: current, scores, restriction: None });
                break;
            }
            let r = build_restriction(&current, &scores, &seeds)?;
            let coarse = galerkin_coarsen(&current, &r)?;
            levels.push(Level { graph: current, scores, restriction: Some(r) });
            current = coarse;
        }
        Ok(Hierarchy { levels, params: params.clone() })
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// One `level n m seeds` line per level, finest first; the coarsest
    /// level reports `-` for its seed count.
    pub fn summary(&self) -> Vec<LevelSummary> {
        self.levels
            .iter()
            .enumerate()
            .map(|(k, l)| LevelSummary {
                level: k,
                nodes: l.graph.n(),
                edges: l.graph.m(),
                seeds: l.restriction.as_ref().map(|r| r.coarse_len()),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct LevelSummary {
    pub level: usize,
    pub nodes: usize,
    pub edges: usize,
    pub seeds: Option<usize>,
}

impl fmt::Display for LevelSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.seeds {
            Some(c) => write!(f, "{} {} {} {}", self.level, self.nodes, self.edges, c),
            None => write!(f, "{} {} {} -", self.level, self.nodes, self.edges),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Coarsest,
    Middle,
    Finest,
}

/// Per-level exponents, coarsest level first; `-1` skips a level.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelConfig {
    pub ratios: Vec<f64>,
}

impl LevelConfig {
    pub fn new(ratios: Vec<f64>) -> Result<Self> {
        for &r in &ratios {
            if !(r == -1.0 || (0.0..=1.0).contains(&r)) {
                return Err(Error::validation(format!("level setting {r} is neither -1 nor in [0, 1]")));
            }
        }
        Ok(LevelConfig { ratios })
    }

    /// Parses a comma separated list such as `0.3,0.3,-1,-1`.
    pub fn parse(text: &str) -> Result<Self> {
        let ratios = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::validation(format!("bad level setting {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if ratios.is_empty() {
            return Err(Error::validation("empty level configuration"));
        }
        Self::new(ratios)
    }

    /// Levels split into three equal segments; `span` levels of the chosen
    /// segment are sparsified with `exponent`.
    pub fn preset(depth: usize, preset: Preset, span: usize, exponent: f64) -> Result<Self> {
        if depth == 0 || span == 0 {
            return Err(Error::validation("preset needs a positive depth and span"));
        }
        let bound = |k: usize| (k * depth) / 3;
        let segment = match preset {
            Preset::Coarsest => 0,
            Preset::Middle => 1,
            Preset::Finest => 2,
        };
        let start = bound(segment).min(depth - 1);
        let end = bound(segment + 1).clamp(start + 1, depth);
        let len = span.min(end - start);
        let active = match preset {
            Preset::Finest => end - len..end,
            _ => start..start + len,
        };
        let ratios = (0..depth)
            .map(|k| if active.contains(&k) { exponent } else { -1.0 })
            .collect();
        Self::new(ratios)
    }

    pub fn is_active(&self) -> bool {
        self.ratios.iter().any(|&r| r >= 0.0)
    }

    /// Same active levels with a new shared exponent.
    pub fn with_exponent(&self, exponent: f64) -> Self {
        LevelConfig {
            ratios: self
                .ratios
                .iter()
                .map(|&r| if r >= 0.0 { exponent } else { -1.0 })
                .collect(),
        }
    }

    /// Exponent for hierarchy level `level` (0 = finest) of a `depth`-level
    /// hierarchy. Short configurations are padded with `-1` on the fine end.
    fn resolve(&self, depth: usize) -> Result<Vec<Option<f64>>> {
        if self.ratios.len() > depth && self.ratios[depth..].iter().any(|&r| r >= 0.0) {
            return Err(Error::validation(format!(
                "configuration sparsifies {} levels but the hierarchy has {depth}",
                self.ratios.len()
            )));
        }
        Ok((0..depth)
            .map(|level| {
                let idx = depth - 1 - level;
                self.ratios.get(idx).copied().filter(|&r| r >= 0.0)
            })
            .collect())
    }
}

impl fmt::Display for LevelConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ratios.iter().map(|r| r.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Result of a multilevel run.
#[derive(Debug, Clone)]
pub struct MlOutcome {
    pub sparse: Graph,
    /// Hierarchy level (0 = finest) whose decision removed each input edge.
    pub removed_at: Vec<Option<usize>>,
    /// Edges remaining at each level after its own sparsification step.
    pub kept_per_level: Vec<usize>,
}

impl MlOutcome {
    pub fn ratio(&self, original: &Graph) -> f64 {
        if original.m() == 0 {
            1.0
        } else {
            self.sparse.m() as f64 / original.m() as f64
        }
    }
}

/// Builds the hierarchy of `g` and runs one sparsification V-cycle.
pub fn ml_sparsify(g: &Graph, cfg: &LevelConfig, params: &MultilevelParams) -> Result<MlOutcome> {
    let h = Hierarchy::build(g, &params.algdist, &params.coarsening)?;
    ml_sparsify_on(&h, cfg, params)
}

/// Runs the coarse-to-fine sparsification pass on a prebuilt hierarchy.
pub fn ml_sparsify_on(h: &Hierarchy, cfg: &LevelConfig, params: &MultilevelParams) -> Result<MlOutcome> {
    let depth = h.depth();
    let settings = cfg.resolve(depth)?;
    let mut kept_per_level = vec![0; depth];

    // removed[e] on the current level's full edge set.
    let mut removed: Vec<Option<usize>> = Vec::new();
    for level in (0..depth).rev() {
        let lv = &h.levels[level];
        let g = &lv.graph;
        removed = if level == depth - 1 {
            vec![None; g.m()]
        } else {
            let r = lv.restriction.as_ref().expect("non-coarsest level has a restriction");
            let coarse = &h.levels[level + 1].graph;
            g.edges()
                .map(|(u, v, _)| {
                    let (a, b) = (r.aggregate(u), r.aggregate(v));
                    if a == b {
                        None
                    } else {
                        removed[coarse.edge_index(a, b).expect("cross edge has a coarse image")]
                    }
                })
                .collect()
        };

        if let Some(exponent) = settings[level] {
            let mask = EdgeAttr::from_vec(g, removed.iter().map(Option::is_none).collect())?;
            let current = g.filter_edges(&mask);
            let scores = if level == depth - 1 {
                lv.scores.clone()
            } else {
                let p = AlgDistParams {
                    seed: derive(params.algdist.seed, level, SALT_RECOMPUTE),
                    ..params.algdist.clone()
                };
                compute_algdist(&current, &p)?
            };
            let plan = SparsifyPlan {
                exponent,
                mode: Mode::Mixture,
                scorer: crate::sparsify::Scorer::AlgDist(params.algdist.clone()),
                seed: derive(params.seed, level, 0),
            };
            let keep = select_binned(&current, &scores, &plan)?;
            for (e, (u, v, _)) in current.edges().enumerate() {
                if !keep[e] {
                    let idx = g.edge_index(u, v).expect("sparse edge exists in level graph");
                    removed[idx] = Some(level);
                }
            }
        }
        kept_per_level[level] = removed.iter().filter(|r| r.is_none()).count();
    }

    let g0 = &h.levels[0].graph;
    let mask = EdgeAttr::from_vec(g0, removed.iter().map(Option::is_none).collect())?;
    Ok(MlOutcome {
        sparse: g0.filter_edges(&mask),
        removed_at: removed,
        kept_per_level,
    })
}

#[derive(Debug, Clone)]
pub struct FitResult {
    pub config: LevelConfig,
    pub exponent: f64,
    pub ratio: f64,
    pub within_target: bool,
    pub evaluations: usize,
    /// Set when the target interval could not be reached.
    pub diagnostic: Option<String>,
    pub outcome: MlOutcome,
}

/// Binary search for one exponent shared by all active levels of `mask` so
/// that the realized edge ratio falls inside `[lo, hi]`.
pub fn fit_ratio(h: &Hierarchy, mask: &LevelConfig, target: (f64, f64), params: &MultilevelParams) -> Result<FitResult> {
    let (lo, hi) = target;
    if !(lo > 0.0 && lo <= hi && hi <= 1.0) {
        return Err(Error::validation(format!("target interval [{lo}, {hi}] must lie in (0, 1]")));
    }
    if !mask.is_active() {
        return Err(Error::validation("no level is marked for sparsification"));
    }
    let original = &h.levels[0].graph;
    let distance = |r: f64| if r < lo { lo - r } else if r > hi { r - hi } else { 0.0 };
    let mut evaluations = 0;
    let mut eval = |e: f64| -> Result<(f64, MlOutcome)> {
        evaluations += 1;
        let out = ml_sparsify_on(h, &mask.with_exponent(e), params)?;
        Ok((out.ratio(original), out))
    };

    let mut best: Option<(f64, f64, MlOutcome)> = None;
    let consider = |e: f64, r: f64, out: MlOutcome, best: &mut Option<(f64, f64, MlOutcome)>| {
        if best.as_ref().is_none_or(|(_, br, _)| distance(r) < distance(*br)) {
            *best = Some((e, r, out));
        }
    };

    let (r1, out1) = eval(1.0)?;
    let unreachable_high = r1 < lo;
    consider(1.0, r1, out1, &mut best);
    let mut found = distance(r1) == 0.0;
    if !found && !unreachable_high {
        let (r0, out0) = eval(0.0)?;
        let unreachable_low = r0 > hi;
        consider(0.0, r0, out0, &mut best);
        found = distance(r0) == 0.0;
        if !found && !unreachable_low {
            let (mut a, mut b) = (0.0, 1.0);
            for _ in 0..30 {
                let mid = 0.5 * (a + b);
                let (r, out) = eval(mid)?;
                consider(mid, r, out, &mut best);
                if distance(r) == 0.0 {
                    found = true;
                    break;
                }
                if r < lo {
                    a = mid;
                } else {
                    b = mid;
                }
            }
        }
    }
    let (exponent, ratio, outcome) = best.expect("at least one evaluation");
    let diagnostic = (!found).then(|| {
        format!("edge ratio {ratio:.4} at e = {exponent} is the closest reachable to [{lo}, {hi}]")
    });
    Ok(FitResult {
        config: mask.with_exponent(exponent),
        exponent,
        ratio,
        within_target: found,
        evaluations,
        diagnostic,
        outcome,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_planted_partition, generate_random_connected};
    use crate::sparsify::sparsify_binned;

    fn two_triangles_bridge() -> Graph {
        Graph::from_edges(
            6,
            [(0, 1, 1.), (0, 2, 1.), (1, 2, 1.), (3, 4, 1.), (3, 5, 1.), (4, 5, 1.), (2, 3, 1.)],
        )
        .unwrap()
    }

    fn unit_scores(g: &Graph) -> EdgeScores {
        EdgeScores::symmetric(EdgeAttr::filled(g, 1.0), false)
    }

    #[test]
    fn k2_has_one_seed_and_collapses() {
        let g = Graph::from_edges(2, [(0, 1, 1.0)]).unwrap();
        let s = compute_algdist(&g, &AlgDistParams::default()).unwrap();
        let seeds = select_seeds(&g, &s, 0.5).unwrap();
        assert_eq!(seeds.count(), 1);
        let r = build_restriction(&g, &s, &seeds).unwrap();
        let c = galerkin_coarsen(&g, &r).unwrap();
        assert_eq!((c.n(), c.m()), (1, 0));
    }

    #[test]
    fn edgeless_graph_is_all_seeds() {
        let g = Graph::edgeless(7);
        let seeds = select_seeds(&g, &unit_scores(&g), 0.5).unwrap();
        assert_eq!(seeds.count(), 7);
    }

    #[test]
    fn star_aggregates_into_hub() {
        let g = Graph::from_edges(6, (1..6).map(|l| (0, l, 1.0))).unwrap();
        let s = compute_algdist(&g, &AlgDistParams::default()).unwrap();
        let seeds = select_seeds(&g, &s, 0.5).unwrap();
        assert_eq!(seeds.nodes(), vec![0]);
        let r = build_restriction(&g, &s, &seeds).unwrap();
        assert!(r.assignment().iter().all(|&a| a == 0));
        assert_eq!(galerkin_coarsen(&g, &r).unwrap().n(), 1);
    }

    #[test]
    fn seeds_dominate_planted_partition() {
        let g = generate_planted_partition(3, 10, 3, 0).unwrap();
        let s = compute_algdist(&g, &AlgDistParams::default()).unwrap();
        let seeds = select_seeds(&g, &s, 0.5).unwrap();
        assert!(seeds.count() < 30);
        for i in 0..g.n() {
            assert!(seeds.contains(i) || g.neighbors(i).iter().any(|&j| seeds.contains(j)));
        }
    }

    #[test]
    fn restriction_without_seed_neighbor_is_an_invariant_error() {
        let g = Graph::from_edges(3, [(0, 1, 1.0)]).unwrap();
        let seeds = Seeds { is_seed: vec![true, false, false] };
        assert!(matches!(
            build_restriction(&g, &unit_scores(&g), &seeds),
            Err(Error::Invariant(_))
        ));
    }

    #[test]
    fn restriction_ties_go_to_smaller_seed() {
        // Node 1 sits between seeds 0 and 2 with equal scores.
        let g = Graph::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let seeds = Seeds { is_seed: vec![true, false, true] };
        let r = build_restriction(&g, &unit_scores(&g), &seeds).unwrap();
        assert_eq!(r.assignment(), &[0, 0, 1]);
    }

    fn triangle_restriction() -> Restriction {
        Restriction { assignment: vec![0, 0, 0, 1, 1, 1], seeds: vec![0, 3] }
    }

    #[test]
    fn triangles_coarsen_to_weighted_k2() {
        let g = two_triangles_bridge();
        let c = galerkin_coarsen(&g, &triangle_restriction()).unwrap();
        assert_eq!((c.n(), c.m()), (2, 1));
        assert_eq!(c.edge_weight(0), 1.0);
    }

    #[test]
    fn removing_coarse_edge_removes_only_the_bridge() {
        let g = two_triangles_bridge();
        let r = triangle_restriction();
        let full = galerkin_coarsen(&g, &r).unwrap();
        assert_eq!(uncoarsen_decisions(&g, &r, &full).unwrap().count_true(), 7);
        let mask = uncoarsen_decisions(&g, &r, &Graph::edgeless(2)).unwrap();
        let h = g.filter_edges(&mask);
        assert_eq!(h.m(), 6);
        assert!(!h.has_edge(2, 3));
    }

    #[test]
    fn uncoarsen_rejects_foreign_edges() {
        let g = two_triangles_bridge();
        let r = triangle_restriction();
        assert!(uncoarsen_decisions(&g, &r, &Graph::edgeless(3)).is_err());
        let r3 = Restriction { assignment: vec![0, 0, 1, 1, 2, 2], seeds: vec![0, 2, 4] };
        // Aggregates 0 and 2 are not adjacent.
        let bogus = Graph::from_edges(3, [(0, 2, 1.0)]).unwrap();
        assert!(uncoarsen_decisions(&g, &r3, &bogus).is_err());
    }

    #[test]
    fn level_config_parsing_and_presets() {
        let c = LevelConfig::parse("0.3, 0.3,-1,-1,-1,-1").unwrap();
        assert_eq!(c.ratios.len(), 6);
        assert!(LevelConfig::parse("0.3,abc").is_err());
        assert!(LevelConfig::parse("1.5").is_err());
        assert!(LevelConfig::parse("-0.5").is_err());

        let p = |preset, depth, span| LevelConfig::preset(depth, preset, span, 0.3).unwrap().ratios;
        assert_eq!(p(Preset::Coarsest, 6, 2), vec![0.3, 0.3, -1., -1., -1., -1.]);
        assert_eq!(p(Preset::Middle, 6, 2), vec![-1., -1., 0.3, 0.3, -1., -1.]);
        assert_eq!(p(Preset::Finest, 6, 2), vec![-1., -1., -1., -1., 0.3, 0.3]);
        assert_eq!(p(Preset::Coarsest, 9, 3), vec![0.3, 0.3, 0.3, -1., -1., -1., -1., -1., -1.]);
        for preset in [Preset::Coarsest, Preset::Middle, Preset::Finest] {
            assert_eq!(p(preset, 1, 3), vec![0.3]);
            for depth in 2..8 {
                assert!(LevelConfig::new(p(preset, depth, 3)).unwrap().is_active());
            }
        }
    }

    #[test]
    fn config_resolution_is_coarsest_first() {
        let c = LevelConfig::parse("0.2,-1").unwrap();
        assert_eq!(c.resolve(2).unwrap(), vec![None, Some(0.2)]);
        // Padding adds skipped fine levels.
        assert_eq!(c.resolve(3).unwrap(), vec![None, None, Some(0.2)]);
        assert!(LevelConfig::parse("0.2,0.1").unwrap().resolve(1).is_err());
        assert_eq!(LevelConfig::parse("0.2,-1").unwrap().resolve(1).unwrap(), vec![Some(0.2)]);
    }

    #[test]
    fn all_skipped_returns_input() {
        let g = generate_random_connected(300, 1200, 1).unwrap();
        let params = MultilevelParams::default();
        let h = Hierarchy::build(&g, &params.algdist, &params.coarsening).unwrap();
        assert!(h.depth() >= 2);
        let cfg = LevelConfig::new(vec![-1.0; h.depth()]).unwrap();
        let out = ml_sparsify_on(&h, &cfg, &params).unwrap();
        assert_eq!(out.sparse, g);
        assert!(out.removed_at.iter().all(Option::is_none));
    }

    #[test]
    fn single_level_matches_binned_sparsifier() {
        let g = generate_planted_partition(3, 10, 3, 5).unwrap();
        let params = MultilevelParams {
            algdist: AlgDistParams::default().with_seed(5),
            seed: 5,
            ..Default::default()
        };
        let out = ml_sparsify(&g, &LevelConfig::parse("0.3").unwrap(), &params).unwrap();
        let s = compute_algdist(&g, &params.algdist).unwrap();
        let plan = SparsifyPlan { seed: 5, ..SparsifyPlan::new(0.3, Mode::Mixture) };
        assert_eq!(out.sparse, sparsify_binned(&g, &s, &plan).unwrap());
    }

    #[test]
    fn hierarchy_shrinks_and_terminates() {
        let g = generate_random_connected(2000, 8000, 3).unwrap();
        let h = Hierarchy::build(&g, &AlgDistParams::default(), &CoarseningParams::default()).unwrap();
        assert_eq!(h.levels[0].graph, g);
        for w in h.levels.windows(2) {
            assert!(w[1].graph.n() < w[0].graph.n());
        }
        let summary = h.summary();
        assert_eq!(summary.len(), h.depth());
        assert!(summary.last().unwrap().seeds.is_none());
        assert_eq!(summary[0].to_string(), format!("0 2000 8000 {}", summary[1].nodes));
    }

    #[test]
    fn output_is_a_subgraph() {
        let g = generate_random_connected(500, 2500, 9).unwrap();
        let params = MultilevelParams::default();
        let h = Hierarchy::build(&g, &params.algdist, &params.coarsening).unwrap();
        let cfg = LevelConfig::new(vec![0.4; h.depth()]).unwrap();
        let out = ml_sparsify_on(&h, &cfg, &params).unwrap();
        assert_eq!(out.sparse.n(), g.n());
        assert!(out.sparse.m() < g.m());
        for (u, v, w) in out.sparse.edges() {
            assert_eq!(g.edge_index(u, v).map(|e| g.edge_weight(e)), Some(w));
        }
        let removed = out.removed_at.iter().filter(|r| r.is_some()).count();
        assert_eq!(g.m() - removed, out.sparse.m());
        assert_eq!(out.kept_per_level[0], out.sparse.m());
    }

    #[test]
    fn fit_ratio_trivial_and_errors() {
        let g = generate_random_connected(150, 700, 2).unwrap();
        let params = MultilevelParams::default();
        let h = Hierarchy::build(&g, &params.algdist, &params.coarsening).unwrap();
        let mask = LevelConfig::preset(h.depth(), Preset::Finest, 3, 1.0).unwrap();
        let fit = fit_ratio(&h, &mask, (1.0, 1.0), &params).unwrap();
        assert_eq!(fit.exponent, 1.0);
        assert!(fit.within_target);
        assert!(fit_ratio(&h, &LevelConfig::new(vec![-1.0; h.depth()]).unwrap(), (0.2, 0.4), &params).is_err());
        assert!(fit_ratio(&h, &mask, (0.5, 0.2), &params).is_err());
    }

    #[test]
    fn fit_ratio_reports_unreachable_targets() {
        // A tree cannot drop below n/2 nominations at e = 0.
        let g = Graph::from_edges(40, (1..40).map(|i| (i - 1, i, 1.0))).unwrap();
        let params = MultilevelParams::default();
        let h = Hierarchy::build(&g, &params.algdist, &params.coarsening).unwrap();
        let fit = fit_ratio(&h, &LevelConfig::parse("0").unwrap(), (0.05, 0.1), &params).unwrap();
        assert!(!fit.within_target);
        assert!(fit.diagnostic.is_some());
        assert_eq!(fit.exponent, 0.0);
    }
}
