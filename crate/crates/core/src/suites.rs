//! Named verification suites driven by the CLI `verify` subcommand.

use serde::Serialize;

use crate::audit;
use crate::containment;
use crate::error::Result;
use crate::graph;
use crate::spectra;
use crate::trees;

/// One verified claim.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

pub const SUITES: &[&str] = &["lemma2", "trees", "spectra", "audit"];

pub fn run_suite(name: &str) -> Result<Vec<Check>> {
    match name {
        "lemma2" => lemma2(),
        "trees" => tree_suite(),
        "spectra" => spectra_suite(),
        "audit" => audit_suite(),
        "all" => {
            let mut out = Vec::new();
            for s in SUITES {
                out.extend(run_suite(s)?);
            }
            Ok(out)
        }
        other => Err(crate::Error::Domain(format!(
            "unknown suite '{other}' (expected one of {}, all)",
            SUITES.join(", ")
        ))),
    }
}

/// Closed forms, bound chain, edge bound, bipartite and construction hosts.
fn lemma2() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let (mut worst, mut chain_ok, mut min_margin) = (0.0f64, true, f64::INFINITY);
    for k in 2..=5 {
        for n in k + 2..=60 {
            let b = spectra::bound_chain(n, k)?;
            // At (4,2) S+ is K4 and q(S+) = 6 = n+2k−2, so the top inequality
            // is an equality; checked separately below.
            if (n, k) != (4, 2) {
                chain_ok &= b.chain_holds;
                min_margin = min_margin.min(b.margin());
            }
            let s = spectra::spectral_radius(&graph::make_s(n, k)?, crate::DEFAULT_TOL)?.q;
            let sp = spectra::spectral_radius(&graph::make_s_plus(n, k)?, crate::DEFAULT_TOL)?.q;
            worst = worst.max((s - b.q_s).abs() / n as f64).max((sp - b.q_s_plus).abs() / n as f64);
        }
    }
    out.push(Check::new("closed-forms", worst <= 1e-9, format!("max |numeric − closed| / n = {worst:.3e}")));
    out.push(Check::new(
        "bound-chain",
        chain_ok && min_margin > 1e-9,
        format!("min margin {min_margin:.6e} excluding (n,k)=(4,2)"),
    ));
    let b = spectra::bound_chain(4, 2)?;
    out.push(Check::new(
        "bound-chain (4,2) equality",
        b.q_s_plus == 6.0 && b.upper == 6.0 && !b.chain_holds,
        format!("q(S+) = {} = n+2k−2 = {}", b.q_s_plus, b.upper),
    ));
    for t in 2..=10 {
        out.push(Check::new(format!("bipartite-host t={t}"), containment::verify_bipartite_lemma(t)?, ""));
    }
    for k in 1..=3 {
        out.push(Check::new(format!("construction-hosts k={k}"), containment::verify_constructions_lemma(k)?, ""));
    }
    for (g, k, label) in [
        (graph::make_complete(10)?, 2, "K10"),
        (graph::make_complete(15)?, 3, "K15"),
        (graph::make_s(20, 2)?, 2, "S(20,2)"),
    ] {
        let e = containment::edge_bound_audit(&g, k, false)?;
        out.push(Check::new(format!("edge-bound {label} k={k}"), e.pass, format!("slack {}", e.slack)));
    }
    Ok(out)
}

fn tree_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for t in 2..=8 {
        let count = trees::all_trees(t)?.len();
        let oracle = trees::prufer_count_oracle(t)?;
        out.push(Check::new(format!("tree-count t={t}"), count == oracle, format!("{count} vs oracle {oracle}")));
    }
    Ok(out)
}

fn spectra_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for k in 2..=6 {
        let ok = spectra::q_s_plus_closed(k + 2, k)? == 2.0 * k as f64 + 2.0;
        let num = spectra::spectral_radius(&graph::make_s_plus(k + 2, k)?, 1e-12)?.q;
        let close = (num - (2 * k + 2) as f64).abs() <= 1e-9;
        out.push(Check::new(format!("s-plus-special k={k}"), ok && close, format!("numeric {num:.11e}")));
    }
    Ok(out)
}

fn audit_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for k in [2usize, 3] {
        let n = 80 * k.pow(3);
        for (prime, g) in [(false, graph::make_s(n, k)?), (true, graph::make_s_plus(n, k)?)] {
            let r = spectra::spectral_radius(&g, crate::DEFAULT_TOL)?;
            let rep = audit::audit_graph(&g, &r, k, prime)?;
            let ok = rep.entries.iter().all(|e| e.inequality_holds);
            let name = format!("audit {}({n},{k})", if prime { "S+" } else { "S" });
            out.push(Check::new(name, ok, format!("|L'| = {}", rep.size_large_prime)));
        }
    }
    Ok(out)
}
