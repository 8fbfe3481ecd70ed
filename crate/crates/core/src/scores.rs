use crate::error::{Error, Result};
use crate::graph::{EdgeAttr, Graph};

/// Whether a score belongs to the undirected edge or to one endpoint's view of it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScoreLayout {
    /// One value per undirected edge, indexed by edge index.
    Edge,
    /// One value per adjacency slot: the score of `j` as ranked by `i`.
    Slot,
}

/// Per-edge ranking signal consumed by the sparsifiers and the coarsening.
///
/// Algebraic distances and Jaccard similarity are symmetric; the local-degree
/// baseline ranks a neighbor by its own degree and is therefore stored per slot.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeScores {
    values: Vec<f64>,
    layout: ScoreLayout,
    normalized: bool,
}

impl EdgeScores {
    pub fn symmetric(values: EdgeAttr<f64>, normalized: bool) -> Self {
        EdgeScores {
            values: values.into_vec(),
            layout: ScoreLayout::Edge,
            normalized,
        }
    }

    pub fn per_slot(g: &Graph, values: Vec<f64>) -> Result<Self> {
        if values.len() != 2 * g.m() {
            return Err(Error::validation("per-slot scores must have 2m entries"));
        }
        Ok(EdgeScores {
            values,
            layout: ScoreLayout::Slot,
            normalized: false,
        })
    }

    pub fn layout(&self) -> ScoreLayout {
        self.layout
    }

    /// True when the degree normalization `δ / sqrt(d_i d_j)` was applied.
    pub fn normalized(&self) -> bool {
        self.normalized
    }

    /// Score of the edge stored at adjacency `slot` whose edge index is `edge`.
    #[inline]
    pub fn at(&self, slot: usize, edge: usize) -> f64 {
        match self.layout {
            ScoreLayout::Edge => self.values[edge],
            ScoreLayout::Slot => self.values[slot],
        }
    }

    /// Per-edge values, available for symmetric scores only.
    pub fn edge_values(&self) -> Option<&[f64]> {
        match self.layout {
            ScoreLayout::Edge => Some(&self.values),
            ScoreLayout::Slot => None,
        }
    }

    /// Score of `{i, j}` as seen from `i`.
    pub fn between(&self, g: &Graph, i: usize, j: usize) -> Option<f64> {
        let pos = g.neighbors(i).binary_search(&j).ok()?;
        let slot = g.slots(i).start + pos;
        Some(self.at(slot, g.slot_edge(slot)))
    }

    /// Fails when the scores were computed for a graph of a different size.
    pub fn check_matches(&self, g: &Graph) -> Result<()> {
        let expected = match self.layout {
            ScoreLayout::Edge => g.m(),
            ScoreLayout::Slot => 2 * g.m(),
        };
        if self.values.len() != expected {
            return Err(Error::validation(format!(
                "scores cover {} entries but the graph needs {expected}",
                self.values.len()
            )));
        }
        Ok(())
    }
}
