//! Algebraic distance of edges.
//!
//! Each round draws a random test vector, smooths it with `k` synchronous
//! Jacobi over-relaxation sweeps, rescales it to `[-0.5, 0.5]` and adds
//! `(x_i - x_j)^2` to a per-edge accumulator `R_ij`. Endpoints that stay close
//! across rounds are strongly coupled, so the score `δ_ij = 1/sqrt(R_ij + ε)`
//! is large for edges inside dense regions and small for long-range edges.
//!
//! Everything is data-parallel over nodes or edges and every random value is
//! addressed by `(seed, round, node)`, so output is bitwise identical for any
//! worker count.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{EdgeAttr, Graph};
use crate::scores::EdgeScores;
use crate::seeding::stream_rng;

const NODE_CHUNK: usize = 4096;
const EDGE_CHUNK: usize = 8192;

#[derive(Debug, Clone, PartialEq)]
pub struct AlgDistParams {
    /// Relaxation weight kept on the node's own value, in `(0, 1)`.
    pub alpha: f64,
    /// Number of random test vectors `R`.
    pub sweeps: usize,
    /// JOR iterations per test vector.
    pub iters: usize,
    pub epsilon: f64,
    /// Divide each score by `sqrt(d_i d_j)`.
    pub normalized: bool,
    pub seed: u64,
}

impl Default for AlgDistParams {
    fn default() -> Self {
        AlgDistParams {
            alpha: 0.5,
            sweeps: 10,
            iters: 40,
            epsilon: 1e-12,
            normalized: false,
            seed: 0,
        }
    }
}

impl AlgDistParams {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::validation(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if self.sweeps == 0 {
            return Err(Error::validation("at least one test vector is required"));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::validation("epsilon must be positive and finite"));
        }
        Ok(())
    }
}

/// Computes `δ_ij` for every edge of `g`.
pub fn compute_algdist(g: &Graph, params: &AlgDistParams) -> Result<EdgeScores> {
    params.validate()?;
    let mut acc = vec![0.0f64; g.m()];
    accumulate(g, params, &mut acc);
    let eps = params.epsilon;
    let delta: Vec<f64> = acc
        .par_iter()
        .with_min_len(EDGE_CHUNK)
        .enumerate()
        .map(|(e, &r)| {
            let d = 1.0 / (r + eps).sqrt();
            if params.normalized {
                let (i, j) = g.edge(e);
                d / ((g.degree(i) * g.degree(j)) as f64).sqrt()
            } else {
                d
            }
        })
        .collect();
    Ok(EdgeScores::symmetric(EdgeAttr::from_vec(g, delta)?, params.normalized))
}

/// Adds `Σ_r (x_i - x_j)^2` over all rounds into `acc`.
fn accumulate(g: &Graph, params: &AlgDistParams, acc: &mut [f64]) {
    let weight_sums: Vec<f64> = (0..g.n())
        .into_par_iter()
        .with_min_len(NODE_CHUNK)
        .map(|i| g.neighbor_weights(i).iter().sum())
        .collect();
    let mut x = vec![0.0; g.n()];
    let mut next = vec![0.0; g.n()];
    for round in 0..params.sweeps {
        init_test_vector(params.seed, round as u64, &mut x);
        for _ in 0..params.iters {
            jor_sweep(g, &weight_sums, params.alpha, &x, &mut next);
            std::mem::swap(&mut x, &mut next);
        }
        rescale(&mut x);
        acc.par_iter_mut()
            .with_min_len(EDGE_CHUNK)
            .enumerate()
            .for_each(|(e, r)| {
                let (i, j) = g.edge(e);
                let d = x[i] - x[j];
                *r += d * d;
            });
    }
}

/// Fills `x` with Uniform[-0.5, 0.5) values; entry `i` depends only on
/// `(seed, round, i)`.
pub(crate) fn init_test_vector(seed: u64, round: u64, x: &mut [f64]) {
    x.par_chunks_mut(NODE_CHUNK).enumerate().for_each(|(c, chunk)| {
        let mut rng = stream_rng(seed, round);
        // Each f64 consumes two 32-bit words of the stream.
        rng.set_word_pos(2 * (c * NODE_CHUNK) as u128);
        for v in chunk {
            *v = rng.gen::<f64>() - 0.5;
        }
    });
}

/// One synchronous JOR step. Nodes without positive incident weight keep
/// only the `alpha` share of their value.
pub(crate) fn jor_sweep(g: &Graph, weight_sums: &[f64], alpha: f64, x: &[f64], out: &mut [f64]) {
    out.par_iter_mut()
        .with_min_len(NODE_CHUNK)
        .enumerate()
        .for_each(|(i, o)| {
            let wsum = weight_sums[i];
            *o = if wsum > 0.0 {
                let s: f64 = g
                    .neighbors(i)
                    .iter()
                    .zip(g.neighbor_weights(i))
                    .map(|(&j, &w)| w * x[j])
                    .sum();
                alpha * x[i] + (1.0 - alpha) * (s / wsum)
            } else {
                alpha * x[i]
            };
        });
}

/// Affine map onto `[-0.5, 0.5]`; constant vectors are left untouched.
pub(crate) fn rescale(x: &mut [f64]) {
    let (lo, hi) = x
        .par_iter()
        .with_min_len(NODE_CHUNK)
        .fold(
            || (f64::INFINITY, f64::NEG_INFINITY),
            |(lo, hi), &v| (lo.min(v), hi.max(v)),
        )
        .reduce(
            || (f64::INFINITY, f64::NEG_INFINITY),
            |a, b| (a.0.min(b.0), a.1.max(b.1)),
        );
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // also catches NaN
    if !(hi > lo) {
        return;
    }
    let span = hi - lo;
    x.par_iter_mut()
        .with_min_len(NODE_CHUNK)
        .for_each(|v| *v = (*v - lo) / span - 0.5);
}
