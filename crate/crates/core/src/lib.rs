//! Desk-scale tooling for signless Laplacian spectral extremal problems on
//! graphs that forbid trees.
//!
//! The crate builds the extremal constructions `S(n,k)` (a `k`-clique joined
//! to an independent set) and `S+(n,k)` (one extra edge in the independent
//! part), computes signless Laplacian spectral radii both numerically and in
//! closed form, enumerates free trees, decides tree containment, audits the
//! Perron-vector inequalities used in the structural argument, and searches
//! small graph spaces for spectral maximizers.

pub mod audit;
pub mod canon;
pub mod containment;
mod error;
pub mod graph;
pub mod graph6;
pub mod search;
pub mod spectra;
pub mod suites;
pub mod trees;

pub use audit::{AuditEntry, AuditReport, ThresholdConfig, ThresholdPartition};
pub use containment::{Embedding, MissingReport};
pub use error::{Error, Result};
pub use graph::{Graph, Lemma24Variant, VertexSet};
pub use search::{SearchMode, SearchReport};
pub use spectra::{BoundReport, SpectralResult};
pub use trees::CanonicalTree;

/// Default convergence tolerance for the power iteration.
pub const DEFAULT_TOL: f64 = 1e-10;
