//! Signless Laplacian `Q = D + A`: matrix-free products, the spectral radius
//! by power iteration, and closed forms for `S(n,k)` and `S+(n,k)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Hard cap on power-iteration steps.
pub const MAX_ITERATIONS: usize = 1_000_000;

/// Output of [`spectral_radius`].
///
/// `x` is the Perron vector scaled so that its largest entry is exactly 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    pub q: f64,
    pub x: Vec<f64>,
    /// Max-norm of `Qx - qx`.
    pub residual: f64,
    pub iterations: usize,
    /// Tolerance the run was asked to meet.
    pub tol: f64,
}

impl SpectralResult {
    /// Lowest-index vertex attaining `x_v = 1`.
    pub fn argmax(&self) -> usize {
        self.x.iter().position(|&v| v == 1.0).unwrap_or(0)
    }

    pub fn is_converged(&self) -> bool {
        self.residual <= self.tol
    }

    /// Collatz–Wielandt bracket `min (Qx)_v / x_v ≤ q(G) ≤ max (Qx)_v / x_v`
    /// over the support of `x`. Only meaningful when `x > 0`.
    pub fn collatz_bracket(&self, g: &Graph) -> (f64, f64) {
        let y = q_apply_unchecked(g, &self.x);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (yv, xv) in y.iter().zip(&self.x) {
            if *xv > 0.0 {
                lo = lo.min(yv / xv);
                hi = hi.max(yv / xv);
            }
        }
        (lo, hi)
    }
}

/// Neumaier-compensated sum. Naive summation of a dense row loses about
/// `n·ε·q`, which exceeds the default tolerance once `n` is in the thousands.
fn compensated_sum(terms: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            carry += (sum - s) + t;
        } else {
            carry += (t - s) + sum;
        }
        sum = s;
    }
    sum + carry
}

fn q_apply_unchecked(g: &Graph, v: &[f64]) -> Vec<f64> {
    (0..g.n())
        .map(|u| {
            let nb = g.neighbors(u);
            compensated_sum(std::iter::once(nb.len() as f64 * v[u]).chain(nb.iter().map(|&w| v[w])))
        })
        .collect()
}

/// `Q(G) v` without materializing `Q`.
pub fn q_apply(g: &Graph, v: &[f64]) -> Result<Vec<f64>> {
    if v.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: v.len(),
        });
    }
    Ok(q_apply_unchecked(g, v))
}

/// `A(G) v`.
pub fn a_apply(g: &Graph, v: &[f64]) -> Result<Vec<f64>> {
    if v.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: v.len(),
        });
    }
    Ok((0..g.n())
        .map(|u| compensated_sum(g.neighbors(u).iter().map(|&w| v[w])))
        .collect())
}

/// Largest eigenvalue of `Q(G)` with its Perron vector.
///
/// Power iteration from the all-ones vector, renormalized to max entry 1 at
/// every step; the estimate is the Rayleigh quotient. Stops once
/// `‖Qx − qx‖∞ ≤ tol`.
pub fn spectral_radius(g: &Graph, tol: f64) -> Result<SpectralResult> {
    spectral_radius_capped(g, tol, MAX_ITERATIONS)
}

pub fn spectral_radius_capped(g: &Graph, tol: f64, max_iter: usize) -> Result<SpectralResult> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let n = g.n();
    let mut x = vec![1.0; n];
    let mut residual = f64::INFINITY;
    for it in 1..=max_iter {
        let y = q_apply_unchecked(g, &x);
        let xx = compensated_sum(x.iter().map(|a| a * a));
        let xy = compensated_sum(x.iter().zip(&y).map(|(a, b)| a * b));
        let q = xy / xx;
        residual = x
            .iter()
            .zip(&y)
            .map(|(a, b)| (b - q * a).abs())
            .fold(0.0, f64::max);
        if residual <= tol {
            return Ok(SpectralResult {
                q,
                x,
                residual,
                iterations: it,
                tol,
            });
        }
        let top = y.iter().cloned().fold(0.0, f64::max);
        if top <= 0.0 {
            // Q x = 0 with x ≠ 0 already gives residual 0, so this is unreachable
            // for finite input; bail out rather than divide by zero.
            return Err(Error::NonConvergence {
                iterations: it,
                residual,
            });
        }
        x = y.into_iter().map(|v| v / top).collect();
    }
    Err(Error::NonConvergence {
        iterations: max_iter,
        residual,
    })
}

fn check_s_domain(n: usize, k: usize) -> Result<()> {
    if k == 0 || n <= k {
        return Err(Error::Domain(format!("closed form for S(n,k) needs n > k ≥ 1, got n={n}, k={k}")));
    }
    Ok(())
}

/// `q(S(n,k)) = (n+2k−2 + sqrt((n+2k−2)² − 8(k²−k))) / 2`.
pub fn q_s_closed(n: usize, k: usize) -> Result<f64> {
    check_s_domain(n, k)?;
    let (n, k) = (n as f64, k as f64);
    let m = n + 2.0 * k - 2.0;
    Ok((m + (m * m - 8.0 * (k * k - k)).sqrt()) / 2.0)
}

/// Characteristic cubic of the three-class quotient of `Q(S+(n,k))`
/// (clique, the two endpoints of the extra edge, the remaining independent
/// vertices): `z³ − (n+3k)z² + ((k+2)n + 4k² − 4)z − 2k³ − 2k²`.
pub fn s_plus_cubic(n: usize, k: usize, z: f64) -> f64 {
    let (n, k) = (n as f64, k as f64);
    ((z - (n + 3.0 * k)) * z + ((k + 2.0) * n + 4.0 * k * k - 4.0)) * z - 2.0 * k * k * (k + 1.0)
}

fn check_s_plus_domain(n: usize, k: usize) -> Result<()> {
    if k < 2 || n < k + 2 {
        return Err(Error::Domain(format!(
            "closed form for S+(n,k) needs k ≥ 2 and n ≥ k+2, got n={n}, k={k}"
        )));
    }
    Ok(())
}

/// `q(S+(n,k))`: `2k+2` when `n = k+2`, otherwise the largest root of
/// [`s_plus_cubic`], bisected on `[q(S(n,k)), n+2k−2]`.
pub fn q_s_plus_closed(n: usize, k: usize) -> Result<f64> {
    check_s_plus_domain(n, k)?;
    if n == k + 2 {
        return Ok(2.0 * k as f64 + 2.0);
    }
    let mut lo = q_s_closed(n, k)?;
    let mut hi = (n + 2 * k - 2) as f64;
    let (flo, fhi) = (s_plus_cubic(n, k, lo), s_plus_cubic(n, k, hi));
    if !(flo < 0.0 && fhi > 0.0) {
        return Err(Error::Bracket { lo, hi });
    }
    while hi - lo > 1e-12 * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if s_plus_cubic(n, k, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The chain `n+2k−2−2k²/n < q(S) < q(S+) < n+2k−2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub lower: f64,
    pub q_s: f64,
    pub q_s_plus: f64,
    pub upper: f64,
    pub chain_holds: bool,
}

impl BoundReport {
    /// Smallest gap between consecutive terms of the chain.
    pub fn margin(&self) -> f64 {
        (self.q_s - self.lower)
            .min(self.q_s_plus - self.q_s)
            .min(self.upper - self.q_s_plus)
    }
}

pub fn bound_chain(n: usize, k: usize) -> Result<BoundReport> {
    check_s_plus_domain(n, k)?;
    let (nf, kf) = (n as f64, k as f64);
    let upper = nf + 2.0 * kf - 2.0;
    let lower = upper - 2.0 * kf * kf / nf;
    let q_s = q_s_closed(n, k)?;
    let q_s_plus = q_s_plus_closed(n, k)?;
    Ok(BoundReport {
        lower,
        q_s,
        q_s_plus,
        upper,
        chain_holds: lower < q_s && q_s < q_s_plus && q_s_plus < upper,
    })
}

/// `max_v |q² x_v − (d_v² x_v + d_v Σ_{u~v} x_u + Σ_{u~v} d_u x_u + Σ_{u~v} Σ_{w~u} x_w)|`.
pub fn perron_identity_residual(g: &Graph, r: &SpectralResult) -> Result<f64> {
    let x = &r.x;
    let ax = a_apply(g, x)?;
    let dx: Vec<f64> = x.iter().enumerate().map(|(u, xu)| g.degree(u) as f64 * xu).collect();
    let adx = a_apply(g, &dx)?;
    let aax = a_apply(g, &ax)?;
    let q2 = r.q * r.q;
    Ok((0..g.n())
        .map(|v| {
            let d = g.degree(v) as f64;
            let rhs = d * d * x[v] + d * ax[v] + adx[v] + aax[v];
            (q2 * x[v] - rhs).abs()
        })
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::*;

    #[test]
    fn q_apply_examples() {
        let k2 = make_complete(2).unwrap();
        assert_eq!(q_apply(&k2, &[1.0, 1.0]).unwrap(), vec![2.0, 2.0]);
        let e3 = Graph::empty(3).unwrap();
        assert_eq!(q_apply(&e3, &[1.0, -2.0, 5.0]).unwrap(), vec![0.0; 3]);
        let p3 = make_path(3).unwrap();
        assert_eq!(q_apply(&p3, &[1.0, 1.0, 1.0]).unwrap(), vec![2.0, 4.0, 2.0]);
        assert!(matches!(q_apply(&p3, &[1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn complete_graphs() {
        let r = spectral_radius(&make_complete(2).unwrap(), 1e-12).unwrap();
        assert!((r.q - 2.0).abs() < 1e-12);
        for n in 1..12 {
            let r = spectral_radius(&make_complete(n).unwrap(), 1e-12).unwrap();
            assert!((r.q - (2 * n - 2) as f64).abs() < 1e-10, "K_{n}: {}", r.q);
            assert!(r.x.iter().all(|&v| v == 1.0));
        }
    }

    #[test]
    fn empty_graph_has_zero_radius() {
        let r = spectral_radius(&Graph::empty(4).unwrap(), 1e-10).unwrap();
        assert_eq!(r.q, 0.0);
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn s10_2_closed_form() {
        let expect = 6.0 + 4.0 * 2f64.sqrt();
        assert!((q_s_closed(10, 2).unwrap() - expect).abs() < 1e-12);
        let r = spectral_radius(&make_s(10, 2).unwrap(), 1e-12).unwrap();
        assert!((r.q - expect).abs() < 1e-9);
        assert!((q_s_closed(10, 2).unwrap() - 11.656854249492).abs() < 1e-11);
    }

    #[test]
    fn q_s_closed_examples() {
        assert!((q_s_closed(4, 1).unwrap() - 4.0).abs() < 1e-12);
        assert!((q_s_closed(6, 5).unwrap() - 10.0).abs() < 1e-12);
        assert!(q_s_closed(5, 5).is_err());
        assert!(q_s_closed(5, 0).is_err());
    }

    #[test]
    fn q_s_plus_examples() {
        assert_eq!(q_s_plus_closed(4, 2).unwrap(), 6.0);
        let k4 = spectral_radius(&make_complete(4).unwrap(), 1e-12).unwrap();
        assert!((k4.q - 6.0).abs() < 1e-10);
        let v = q_s_plus_closed(10, 2).unwrap();
        assert!(v > 11.6568 && v < 12.0);
        let r = spectral_radius(&make_s_plus(10, 2).unwrap(), 1e-12).unwrap();
        assert!((r.q - v).abs() < 1e-9, "{} vs {}", r.q, v);
        assert!(q_s_plus_closed(4, 1).is_err());
        assert!(q_s_plus_closed(3, 2).is_err());
    }

    #[test]
    fn cubic_root_satisfies_polynomial() {
        for (n, k) in [(5, 2), (10, 2), (30, 3), (7, 4), (200, 5)] {
            let z = q_s_plus_closed(n, k).unwrap();
            let scale = z.powi(3);
            assert!(s_plus_cubic(n, k, z).abs() < 1e-9 * scale);
        }
        // At n = k+2 the cubic factors as (z−k)²(z−2k−2).
        for k in 2..7 {
            assert_eq!(s_plus_cubic(k + 2, k, 2.0 * k as f64 + 2.0), 0.0);
        }
    }

    #[test]
    fn bound_chain_examples() {
        let b = bound_chain(10, 2).unwrap();
        assert!((b.lower - 11.2).abs() < 1e-12);
        assert!(b.chain_holds);
        assert!(bound_chain(100, 3).unwrap().chain_holds);
        let b = bound_chain(6, 4).unwrap();
        assert_eq!(b.q_s_plus, 10.0);
        assert_eq!(b.upper, 12.0);
        assert!(b.chain_holds);
        assert!(bound_chain(5, 1).is_err());
        // S+(4,2) = K4 meets the upper bound exactly.
        let b = bound_chain(4, 2).unwrap();
        assert_eq!((b.q_s_plus, b.upper), (6.0, 6.0));
        assert!(!b.chain_holds);
    }

    #[test]
    fn identity_residual_small() {
        let g = make_complete(4).unwrap();
        let r = spectral_radius(&g, 1e-12).unwrap();
        assert!(perron_identity_residual(&g, &r).unwrap() < 1e-12);
        let g = make_s(30, 2).unwrap();
        let r = spectral_radius(&g, 1e-12).unwrap();
        assert!(perron_identity_residual(&g, &r).unwrap() <= 1e-6 * r.q * r.q);
    }

    #[test]
    fn disconnected_takes_max_component() {
        let g = disjoint_union(&make_complete(4).unwrap(), &make_s(9, 2).unwrap());
        let r = spectral_radius(&g, 1e-11).unwrap();
        assert!((r.q - q_s_closed(9, 2).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_tolerance() {
        let g = make_complete(3).unwrap();
        assert!(spectral_radius(&g, 0.0).is_err());
        assert!(spectral_radius(&g, f64::NAN).is_err());
    }

    #[test]
    fn cap_reports_nonconvergence() {
        let g = make_path(30).unwrap();
        match spectral_radius_capped(&g, 1e-14, 3) {
            Err(Error::NonConvergence { iterations: 3, residual }) => assert!(residual > 0.0),
            other => panic!("unexpected {other:?}"),
        }
    }
}
