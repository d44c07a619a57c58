//! Per-graph audits of the Perron-vector inequalities that force the
//! extremal structure.
//!
//! Every entry records whether the lemma's own hypothesis is met for the
//! given graph and whether the conclusion holds anyway. Entries outside their
//! hypothesis are informational; nothing here fails a run on its own.
//!
//! The hypotheses use `n ≥ 40k²/α² = 256000k⁸`. A slightly smaller constant,
//! `243360k⁸`, is also quoted for the extremal result; the audit uses the
//! larger one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::spectra::{self, SpectralResult};

/// Distance from a threshold below which a component is flagged.
pub const BOUNDARY_EPS: f64 = 1e-12;

/// Thresholds `α = 1/(80k³)` and `β = 2kα`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdConfig {
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
}

impl ThresholdConfig {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("thresholds need k ≥ 1".into()));
        }
        let kf = k as f64;
        let alpha = 1.0 / (80.0 * kf * kf * kf);
        Ok(ThresholdConfig {
            k,
            alpha,
            beta: 2.0 * kf * alpha,
        })
    }

    /// `40k²/α²`, the order from which the structural lemmas apply.
    pub fn order_threshold(&self) -> f64 {
        let kf = self.k as f64;
        40.0 * kf * kf / (self.alpha * self.alpha)
    }
}

/// `L`/`S` split at `α` and `L'`/`S'` split at `β`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdPartition {
    pub config: ThresholdConfig,
    pub large: VertexSet,
    pub small: VertexSet,
    pub large_prime: VertexSet,
    pub small_prime: VertexSet,
    /// Vertices whose component lies within [`BOUNDARY_EPS`] of `α` or `β`.
    pub boundary: Vec<usize>,
}

fn check_result(g: &Graph, r: &SpectralResult) -> Result<()> {
    if r.x.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: r.x.len(),
        });
    }
    if !r.is_converged() {
        return Err(Error::Unconverged {
            residual: r.residual,
            tol: r.tol,
        });
    }
    if r.x.iter().cloned().fold(f64::NEG_INFINITY, f64::max) != 1.0 {
        return Err(Error::Domain("Perron vector must have maximum component 1".into()));
    }
    Ok(())
}

pub fn partition(g: &Graph, r: &SpectralResult, k: usize) -> Result<ThresholdPartition> {
    check_result(g, r)?;
    let config = ThresholdConfig::new(k)?;
    let n = g.n();
    let split = |th: f64| -> Result<(VertexSet, VertexSet)> {
        Ok((
            VertexSet::new(n, (0..n).filter(|&v| r.x[v] >= th))?,
            VertexSet::new(n, (0..n).filter(|&v| r.x[v] < th))?,
        ))
    };
    let (large, small) = split(config.alpha)?;
    let (large_prime, small_prime) = split(config.beta)?;
    let boundary = (0..n)
        .filter(|&v| {
            (r.x[v] - config.alpha).abs() <= BOUNDARY_EPS || (r.x[v] - config.beta).abs() <= BOUNDARY_EPS
        })
        .collect();
    Ok(ThresholdPartition {
        config,
        large,
        small,
        large_prime,
        small_prime,
        boundary,
    })
}

/// One audited inequality.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub lemma: String,
    pub hypothesis_met: bool,
    pub inequality_holds: bool,
    /// Non-negative iff the inequality holds.
    pub slack: f64,
}

impl AuditEntry {
    fn new(lemma: &str, hypothesis_met: bool, slack: f64) -> Self {
        AuditEntry {
            lemma: lemma.to_string(),
            hypothesis_met,
            inequality_holds: slack >= 0.0,
            slack,
        }
    }

    /// Failed while its hypothesis was satisfied.
    pub fn is_violation(&self) -> bool {
        self.hypothesis_met && !self.inequality_holds
    }
}

/// Full audit for one graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub n: usize,
    pub k: usize,
    pub prime: bool,
    pub edges: usize,
    pub q: f64,
    pub residual: f64,
    pub alpha: f64,
    pub beta: f64,
    pub size_large: usize,
    pub size_large_prime: usize,
    pub boundary: Vec<usize>,
    pub entries: Vec<AuditEntry>,
}

impl AuditReport {
    pub fn entry(&self, lemma: &str) -> Option<&AuditEntry> {
        self.entries.iter().find(|e| e.lemma == lemma)
    }

    pub fn violations(&self) -> impl Iterator<Item = &AuditEntry> {
        self.entries.iter().filter(|e| e.is_violation())
    }
}

pub const EIGEN_IDENTITY: &str = "eigen-identity";
pub const NEIGHBOUR_SUM_BOUND: &str = "neighbour-sum-bound";
pub const DEGREE_WEIGHTED_BOUND: &str = "degree-weighted-bound";
pub const SECOND_NEIGHBOUR_BOUND: &str = "second-neighbour-bound";
pub const LARGE_SET_BOUND: &str = "large-set-bound";
pub const LPRIME_DEGREE: &str = "lprime-degree";
pub const LPRIME_SIZE: &str = "lprime-size";
pub const LPRIME_WEIGHT: &str = "lprime-weight";
pub const STRUCTURE: &str = "structure";

/// The identity `q²x = Q²x` passes when its residual is at most `100·tol·q²`.
pub fn audit_eigen_identity(g: &Graph, r: &SpectralResult) -> Result<AuditEntry> {
    let res = spectra::perron_identity_residual(g, r)?;
    Ok(AuditEntry::new(EIGEN_IDENTITY, true, 100.0 * r.tol * r.q * r.q - res))
}

/// `d_v Σ x_u ≤ |L| d_v + d_v² α` for every `v` (unconditional), and the
/// two `5kn` bounds, whose hypothesis is `e(G) ≤ (2k+1)n`.
pub fn audit_eigen_bounds(
    g: &Graph,
    r: &SpectralResult,
    k: usize,
    part: &ThresholdPartition,
) -> Result<Vec<AuditEntry>> {
    let n = g.n();
    let x = &r.x;
    let ax = spectra::a_apply(g, x)?;
    let dx: Vec<f64> = (0..n).map(|u| g.degree(u) as f64 * x[u]).collect();
    let adx = spectra::a_apply(g, &dx)?;
    let aax = spectra::a_apply(g, &ax)?;
    let l = part.large.len() as f64;
    let alpha = part.config.alpha;
    let six = (0..n)
        .map(|v| {
            let d = g.degree(v) as f64;
            l * d + d * d * alpha - d * ax[v]
        })
        .fold(f64::INFINITY, f64::min);
    let cap = 5.0 * k as f64 * n as f64;
    let sparse = g.edge_count() <= (2 * k + 1) * n;
    let seven = cap - adx.iter().cloned().fold(0.0, f64::max);
    let eight = cap - aax.iter().cloned().fold(0.0, f64::max);
    Ok(vec![
        AuditEntry::new(NEIGHBOUR_SUM_BOUND, true, six),
        AuditEntry::new(DEGREE_WEIGHTED_BOUND, sparse, seven),
        AuditEntry::new(SECOND_NEIGHBOUR_BOUND, sparse, eight),
    ])
}

/// `|L| ≤ 10k/α = 800k⁴`.
pub fn audit_l_bound(g: &Graph, k: usize, part: &ThresholdPartition) -> AuditEntry {
    let sparse = g.edge_count() <= (2 * k + 1) * g.n();
    let bound = 10.0 * k as f64 / part.config.alpha;
    AuditEntry::new(LARGE_SET_BOUND, sparse, bound - part.large.len() as f64)
}

/// Degrees, size and weights of `L'`.
pub fn audit_lprime(g: &Graph, r: &SpectralResult, k: usize, part: &ThresholdPartition) -> Vec<AuditEntry> {
    let n = g.n() as f64;
    let kf = k as f64;
    let big = n >= part.config.order_threshold();
    let lp = part.large_prime.members();
    let degree_slack = lp
        .iter()
        .map(|&v| g.degree(v) as f64 - (1.0 - 1.0 / (2.0 * kf)) * n)
        .fold(f64::INFINITY, f64::min);
    let size_slack = -(lp.len() as f64 - kf).abs();
    let weight_slack = lp
        .iter()
        .map(|&v| r.x[v] - (1.0 - 1.0 / kf))
        .fold(f64::INFINITY, f64::min);
    vec![
        AuditEntry::new(LPRIME_DEGREE, big, degree_slack),
        AuditEntry::new(LPRIME_SIZE, big, size_slack),
        AuditEntry::new(LPRIME_WEIGHT, big, weight_slack),
    ]
}

/// Common neighbourhood `R` of `L'`.
pub fn common_neighbourhood(g: &Graph, part: &ThresholdPartition) -> VertexSet {
    let n = g.n();
    let lp = part.large_prime.members();
    let members = (0..n).filter(|&u| lp.iter().all(|&v| g.has_edge(u, v)));
    VertexSet::new(n, members).expect("in range")
}

/// `|L'| = k`, `|R| = n − k`, and `R` spans no edge (at most one when
/// `prime`). The slack is the worst of the three.
pub fn audit_structure(g: &Graph, k: usize, part: &ThresholdPartition, prime: bool) -> AuditEntry {
    let r = common_neighbourhood(g, part);
    let allowed = usize::from(prime) as f64;
    let inner = g.induced_edge_count(&r) as f64;
    let lp_gap = -(part.large_prime.len() as f64 - k as f64).abs();
    let r_gap = -(r.len() as f64 - (g.n() as f64 - k as f64)).abs();
    let slack = lp_gap.min(r_gap).min(allowed - inner);
    AuditEntry::new(STRUCTURE, g.n() as f64 >= part.config.order_threshold(), slack)
}

/// Partition plus every audit entry.
pub fn audit_graph(g: &Graph, r: &SpectralResult, k: usize, prime: bool) -> Result<AuditReport> {
    let part = partition(g, r, k)?;
    let mut entries = vec![audit_eigen_identity(g, r)?];
    entries.extend(audit_eigen_bounds(g, r, k, &part)?);
    entries.push(audit_l_bound(g, k, &part));
    entries.extend(audit_lprime(g, r, k, &part));
    entries.push(audit_structure(g, k, &part, prime));
    Ok(AuditReport {
        n: g.n(),
        k,
        prime,
        edges: g.edge_count(),
        q: r.q,
        residual: r.residual,
        alpha: part.config.alpha,
        beta: part.config.beta,
        size_large: part.large.len(),
        size_large_prime: part.large_prime.len(),
        boundary: part.boundary.clone(),
        entries,
    })
}
