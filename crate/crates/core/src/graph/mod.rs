//! Undirected weighted simple graphs in compressed adjacency form.
//!
//! Every graph is canonical: no self-loops, no parallel edges, symmetric
//! adjacency and neighbor lists sorted by id. Undirected edges `{i, j}` are
//! enumerated once with `i < j` in lexicographic order; that enumeration is
//! the edge index used by [`EdgeAttr`] and by every per-edge score.

mod generate;
mod io;

use std::ops::{Index, IndexMut, Range};

use crate::error::{Error, Result};

pub use generate::{generate_planted_partition, generate_random_connected};
pub use io::{load_graph, load_graph_file, write_graph, write_graph_file, write_edge_values, GraphFormat};

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
    slot_edge: Vec<usize>,
    edges: Vec<(usize, usize)>,
    edge_weights: Vec<f64>,
}

impl Graph {
    /// Graph with `n` nodes and no edges.
    pub fn edgeless(n: usize) -> Self {
        Graph {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
            weights: Vec::new(),
            slot_edge: Vec::new(),
            edges: Vec::new(),
            edge_weights: Vec::new(),
        }
    }

    /// Builds a canonical graph from arbitrary `(u, v, w)` triples.
    ///
    /// Self-loops are dropped and duplicate edges collapse to the largest
    /// weight. Weights must be finite and non-negative.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut list = Vec::new();
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::validation(format!(
                    "edge ({u}, {v}) references a node outside 0..{n}"
                )));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::validation(format!(
                    "edge ({u}, {v}) has weight {w}; weights must be finite and >= 0"
                )));
            }
            if u != v {
                list.push((u.min(v), u.max(v), w));
            }
        }
        list.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)).then(a.2.total_cmp(&b.2)));
        // After sorting, the last entry of each run carries the maximum weight.
        let mut dedup: Vec<(usize, usize, f64)> = Vec::with_capacity(list.len());
        for e in list {
            match dedup.last_mut() {
                Some(last) if last.0 == e.0 && last.1 == e.1 => last.2 = e.2,
                _ => dedup.push(e),
            }
        }
        Ok(Self::from_canonical(n, dedup))
    }

    /// `edges` must be sorted, unique and satisfy `u < v < n`.
    fn from_canonical(n: usize, edges: Vec<(usize, usize, f64)>) -> Self {
        let m = edges.len();
        let mut degree = vec![0usize; n];
        for &(u, v, _) in &edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut targets = vec![0; 2 * m];
        let mut weights = vec![0.0; 2 * m];
        let mut slot_edge = vec![0; 2 * m];
        // Lexicographic order fills every list in ascending neighbor order:
        // smaller neighbors arrive as (i, v) before any (v, j) with j > v.
        for (e, &(u, v, w)) in edges.iter().enumerate() {
            for (a, b) in [(u, v), (v, u)] {
                let s = cursor[a];
                targets[s] = b;
                weights[s] = w;
                slot_edge[s] = e;
                cursor[a] += 1;
            }
        }
        Graph {
            offsets,
            targets,
            weights,
            slot_edge,
            edge_weights: edges.iter().map(|e| e.2).collect(),
            edges: edges.into_iter().map(|(u, v, _)| (u, v)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|i| self.degree(i)).collect()
    }

    /// Range of adjacency slots owned by node `i`.
    pub fn slots(&self, i: usize) -> Range<usize> {
        self.offsets[i]..self.offsets[i + 1]
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.targets[self.slots(i)]
    }

    pub fn neighbor_weights(&self, i: usize) -> &[f64] {
        &self.weights[self.slots(i)]
    }

    /// Edge index of each adjacency slot of node `i`.
    pub fn neighbor_edges(&self, i: usize) -> &[usize] {
        &self.slot_edge[self.slots(i)]
    }

    pub fn slot_target(&self, slot: usize) -> usize {
        self.targets[slot]
    }

    pub fn slot_edge(&self, slot: usize) -> usize {
        self.slot_edge[slot]
    }

    /// Endpoints `(i, j)` with `i < j`.
    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edge_weight(&self, e: usize) -> f64 {
        self.edge_weights[e]
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = (usize, usize, f64)> + '_ {
        self.edges
            .iter()
            .zip(&self.edge_weights)
            .map(|(&(u, v), &w)| (u, v, w))
    }

    pub fn edge_index(&self, i: usize, j: usize) -> Option<usize> {
        if i >= self.n() || j >= self.n() {
            return None;
        }
        let (i, j) = if self.degree(i) <= self.degree(j) { (i, j) } else { (j, i) };
        let pos = self.neighbors(i).binary_search(&j).ok()?;
        Some(self.slot_edge[self.offsets[i] + pos])
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edge_index(i, j).is_some()
    }

    pub fn isolated_count(&self) -> usize {
        (0..self.n()).filter(|&i| self.degree(i) == 0).count()
    }

    /// Subgraph on the same node set keeping edges whose mask entry is true.
    pub fn filter_edges(&self, keep: &EdgeAttr<bool>) -> Graph {
        assert_eq!(keep.len(), self.m(), "edge mask length does not match graph");
        let edges = self
            .edges()
            .zip(keep.iter())
            .filter(|(_, &k)| k)
            .map(|(e, _)| e)
            .collect();
        Self::from_canonical(self.n(), edges)
    }

    /// Verifies symmetry, ordering and edge-index consistency.
    pub fn check_invariants(&self) -> Result<()> {
        let mut slot_total = 0;
        for i in 0..self.n() {
            let nbrs = self.neighbors(i);
            slot_total += nbrs.len();
            for (k, &j) in nbrs.iter().enumerate() {
                if j == i {
                    return Err(Error::Invariant(format!("self-loop at {i}")));
                }
                if k > 0 && nbrs[k - 1] >= j {
                    return Err(Error::Invariant(format!("neighbors of {i} not strictly sorted")));
                }
                let e = self.neighbor_edges(i)[k];
                let (a, b) = self.edges[e];
                if (a, b) != (i.min(j), i.max(j)) {
                    return Err(Error::Invariant(format!("slot of {i}->{j} maps to edge {e}")));
                }
                let w = self.neighbor_weights(i)[k];
                let back = self.neighbors(j).binary_search(&i).map_err(|_| {
                    Error::Invariant(format!("edge {i}->{j} has no reverse entry"))
                })?;
                if self.neighbor_weights(j)[back] != w || self.edge_weights[e] != w {
                    return Err(Error::Invariant(format!("asymmetric weight on {{{i}, {j}}}")));
                }
            }
        }
        if slot_total != 2 * self.m() {
            return Err(Error::Invariant("sum of degrees differs from 2m".into()));
        }
        if self.edges.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invariant("edge enumeration not lexicographic".into()));
        }
        Ok(())
    }
}

/// Dense per-edge storage indexed by the graph's edge enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeAttr<T> {
    values: Vec<T>,
}

impl<T: Clone> EdgeAttr<T> {
    pub fn filled(g: &Graph, value: T) -> Self {
        EdgeAttr {
            values: vec![value; g.m()],
        }
    }
}

impl<T> EdgeAttr<T> {
    pub fn from_vec(g: &Graph, values: Vec<T>) -> Result<Self> {
        if values.len() != g.m() {
            return Err(Error::validation(format!(
                "edge attribute has {} entries but graph has {} edges",
                values.len(),
                g.m()
            )));
        }
        Ok(EdgeAttr { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Slot for `{i, j}` regardless of orientation.
    pub fn get_pair(&self, g: &Graph, i: usize, j: usize) -> Option<&T> {
        g.edge_index(i, j).map(|e| &self.values[e])
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.values.iter()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<T> {
        self.values
    }
}

impl EdgeAttr<bool> {
    pub fn count_true(&self) -> usize {
        self.values.iter().filter(|&&b| b).count()
    }
}

impl<T> Index<usize> for EdgeAttr<T> {
    type Output = T;

    fn index(&self, e: usize) -> &T {
        &self.values[e]
    }
}

impl<T> IndexMut<usize> for EdgeAttr<T> {
    fn index_mut(&mut self, e: usize) -> &mut T {
        &mut self.values[e]
    }
}
