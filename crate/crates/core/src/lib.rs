//! Network sparsification driven by algebraic distance.
//!
//! Edges are scored by how strongly their endpoints are coupled under a few
//! sweeps of Jacobi over-relaxation on random test vectors ([`algdist`]).
//! The scores feed per-node filtering ([`sparsify`]), an aggregation-based
//! multilevel scheme that removes whole bundles of edges at coarse scales
//! ([`multilevel`]), and a set of structural metrics used to judge what a
//! sparsified graph preserved ([`metrics`]).

pub mod algdist;
pub mod error;
pub mod graph;
pub mod metrics;
pub mod multilevel;
pub mod scores;
pub mod sparsify;

mod seeding;

pub use algdist::{compute_algdist, AlgDistParams};
pub use error::{Error, Result};
pub use graph::{EdgeAttr, Graph, GraphFormat};
pub use metrics::{compare, CompareOptions, ComparisonReport};
pub use multilevel::{ml_sparsify, CoarseningParams, Hierarchy, LevelConfig, MultilevelParams};
pub use scores::EdgeScores;
pub use sparsify::{Mode, Scorer, SparsifyPlan};
