//! Searching for signless Laplacian maximizers among graphs that miss at
//! least one tree of a given order.
//!
//! Three explorers share one report type: exhaustive enumeration of every
//! isomorphism class (n ≤ 7), a scan of the family `K_k ∨ H` over sparse
//! patterns `H`, and restarted hill climbing by single-edge additions. Only
//! exhaustive mode claims a global maximum.

use std::collections::{BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon;
use crate::containment::{self, Host};
use crate::error::{Error, Result};
use crate::graph::{self, Graph};
use crate::graph6;
use crate::spectra::spectral_radius;
use crate::trees::{self, CanonicalTree};
use crate::DEFAULT_TOL;

pub const MAX_EXHAUSTIVE_ORDER: usize = 7;
pub const MAX_FAMILY_ORDER: usize = 60;
pub const MAX_FAMILY_INNER_EDGES: usize = 3;
pub const MAX_HILL_CLIMB_ORDER: usize = 200;

/// Relative gap under which two spectral radii count as tied.
const TIE_EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Exhaustive,
    Family,
    Hillclimb,
}

/// A scanned member of the `K_k ∨ H` family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyCandidate {
    /// graph6 of `H` without isolated vertices; empty for `H = ∅`.
    pub pattern: String,
    pub inner_edges: usize,
    pub member: bool,
    pub q: f64,
    pub missing: Option<CanonicalTree>,
}

/// An accepted hill-climbing move.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub restart: usize,
    pub step: usize,
    pub u: usize,
    pub v: usize,
    pub q: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub mode: SearchMode,
    pub n: usize,
    pub k: usize,
    pub prime: bool,
    /// Order of the forbidden trees, `2k+2` or `2k+3`.
    pub t: usize,
    pub best_graph: String,
    pub best_q: f64,
    /// `q(S(n,k))`, when the construction exists at this order.
    pub q_of_s: Option<f64>,
    /// `q(S+(n,k))`, when the construction exists at this order.
    pub q_of_s_plus: Option<f64>,
    pub candidates_examined: u64,
    pub seed: Option<u64>,
    pub missing_tree_witness: CanonicalTree,
    /// `best_graph` re-checked to miss `missing_tree_witness`.
    pub certified: bool,
    /// Best graph is isomorphic to `S(n,k)` (`S+(n,k)` when `prime`).
    pub isomorphic_to_reference: bool,
    pub finding: Option<String>,
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub family: Vec<FamilyCandidate>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<TraceStep>,
}

fn tree_order(k: usize, prime: bool) -> usize {
    2 * k + 2 + usize::from(prime)
}

fn reference(n: usize, k: usize, prime: bool) -> Option<Graph> {
    if prime {
        graph::make_s_plus(n, k).ok()
    } else {
        graph::make_s(n, k).ok()
    }
}

fn radius(g: &Graph) -> Result<f64> {
    Ok(spectral_radius(g, DEFAULT_TOL)?.q)
}

/// First tree of `trees` (after `hint`) that does not embed in `g`.
fn missing_tree(g: &Graph, trees: &[CanonicalTree], hint: Option<&CanonicalTree>) -> Option<CanonicalTree> {
    let host = Host::new(g);
    if let Some(h) = hint {
        if host.embed(h).is_none() {
            return Some(h.clone());
        }
    }
    trees
        .iter()
        .filter(|t| Some(*t) != hint)
        .find(|t| host.embed(t).is_none())
        .cloned()
}

/// True when `a` should replace `b` as the incumbent: larger `q`, or a tie
/// broken towards the lexicographically smaller graph6 string.
fn better(a: (f64, &str), b: (f64, &str)) -> bool {
    let scale = 1.0 + a.0.abs().max(b.0.abs());
    if (a.0 - b.0).abs() <= TIE_EPS * scale {
        a.1 < b.1
    } else {
        a.0 > b.0
    }
}

struct Best {
    graph: Graph,
    code: String,
    q: f64,
    witness: CanonicalTree,
}

impl Best {
    fn offer(slot: &mut Option<Best>, cand: Best) {
        if slot
            .as_ref()
            .is_none_or(|b| better((cand.q, &cand.code), (b.q, &b.code)))
        {
            *slot = Some(cand);
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    mode: SearchMode,
    n: usize,
    k: usize,
    prime: bool,
    best: Best,
    candidates_examined: u64,
    seed: Option<u64>,
    mut notes: Vec<String>,
) -> Result<SearchReport> {
    let t = tree_order(k, prime);
    let certified = containment::contains_tree(&best.graph, &best.witness).is_none()
        && best.witness.t() == t;
    let q_of_s = match graph::make_s(n, k) {
        Ok(g) => Some(radius(&g)?),
        Err(_) => None,
    };
    let q_of_s_plus = match graph::make_s_plus(n, k) {
        Ok(g) => Some(radius(&g)?),
        Err(_) => None,
    };
    let isomorphic_to_reference = reference(n, k, prime).is_some_and(|r| canon::is_isomorphic(&r, &best.graph));
    let finding = if isomorphic_to_reference || mode == SearchMode::Family {
        None
    } else {
        Some(format!(
            "best graph is not isomorphic to {}({n},{k})",
            if prime { "S+" } else { "S" }
        ))
    };
    if mode != SearchMode::Exhaustive {
        notes.push("heuristic search: no global optimality claimed".into());
    }
    Ok(SearchReport {
        mode,
        n,
        k,
        prime,
        t,
        best_graph: best.code,
        best_q: best.q,
        q_of_s,
        q_of_s_plus,
        candidates_examined,
        seed,
        missing_tree_witness: best.witness,
        certified,
        isomorphic_to_reference,
        finding,
        notes,
        family: Vec::new(),
        trace: Vec::new(),
    })
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Domain("search needs k ≥ 1".into()));
    }
    Ok(())
}

/// Exact maximum of `q` over all graphs of order `n ≤ 7` missing some tree
/// on `2k+2` (`2k+3` when `prime`) vertices.
pub fn exhaustive_search(n: usize, k: usize, prime: bool) -> Result<SearchReport> {
    check_k(k)?;
    if n == 0 || n > MAX_EXHAUSTIVE_ORDER {
        return Err(Error::Domain(format!(
            "exhaustive search supports 1 ≤ n ≤ {MAX_EXHAUSTIVE_ORDER}, got {n}; use hill climbing for larger orders"
        )));
    }
    let t = tree_order(k, prime);
    let m = n * (n - 1) / 2;
    // Bit b of a labelled mask is pair b in graph6 order.
    let pairs: Vec<(usize, usize)> = (1..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    const CHUNK: u64 = 1 << 12;
    let total = 1u64 << m;
    let chunks = total.div_ceil(CHUNK);
    let classes: BTreeSet<u128> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut seen = HashSet::new();
            let mut adj = vec![0u64; n];
            for mask in c * CHUNK..((c + 1) * CHUNK).min(total) {
                adj.iter_mut().for_each(|a| *a = 0);
                for (b, &(i, j)) in pairs.iter().enumerate() {
                    if mask >> b & 1 == 1 {
                        adj[i] |= 1 << j;
                        adj[j] |= 1 << i;
                    }
                }
                seen.insert(canon::canonical_code_masks(&adj).expect("n ≤ 7").0);
            }
            seen
        })
        .reduce(HashSet::new, |mut a, b| {
            a.extend(b);
            a
        })
        .into_iter()
        .collect();
    let trees = trees::all_trees(t)?;
    let reps: Vec<u128> = classes.iter().copied().collect();
    let evaluated: Vec<Option<Best>> = reps
        .par_iter()
        .map(|&code| -> Result<Option<Best>> {
            let g = canon::graph_from_code(n, code)?;
            let Some(witness) = missing_tree(&g, &trees, None) else {
                return Ok(None);
            };
            let q = radius(&g)?;
            Ok(Some(Best {
                code: graph6::encode(&g),
                graph: g,
                q,
                witness,
            }))
        })
        .collect::<Result<_>>()?;
    let members = evaluated.iter().filter(|b| b.is_some()).count();
    let mut best = None;
    for cand in evaluated.into_iter().flatten() {
        Best::offer(&mut best, cand);
    }
    let best = best.ok_or_else(|| Error::Domain("no graph of this order misses a tree".into()))?;
    let notes = vec![
        format!("{total} labelled graphs, {} isomorphism classes", classes.len()),
        format!("{members} classes miss a tree on {t} vertices"),
    ];
    finish(SearchMode::Exhaustive, n, k, prime, best, classes.len() as u64, None, notes)
}

/// Edge patterns with at most `max_edges` edges and no isolated vertices,
/// one per isomorphism class, ordered by (edges, order, code).
fn sparse_patterns(max_edges: usize) -> Result<Vec<Option<Graph>>> {
    let mut found: BTreeSet<(usize, usize, u128)> = BTreeSet::new();
    let span = 2 * max_edges;
    let pairs: Vec<(usize, usize)> = (0..span).flat_map(|u| (u + 1..span).map(move |v| (u, v))).collect();
    fn choose(pairs: &[(usize, usize)], from: usize, left: usize, acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if left == 0 {
            out.push(acc.clone());
            return;
        }
        for i in from..pairs.len() {
            acc.push(pairs[i]);
            choose(pairs, i + 1, left - 1, acc, out);
            acc.pop();
        }
    }
    for edges in 1..=max_edges {
        let mut subsets = Vec::new();
        choose(&pairs, 0, edges, &mut Vec::new(), &mut subsets);
        for s in subsets {
            let mut support: Vec<usize> = s.iter().flat_map(|&(u, v)| [u, v]).collect();
            support.sort_unstable();
            support.dedup();
            let relabel = |x: usize| support.binary_search(&x).expect("in support");
            let g = Graph::from_edges(support.len(), s.iter().map(|&(u, v)| (relabel(u), relabel(v))))?;
            found.insert((edges, g.n(), canon::canonical_code(&g)?));
        }
    }
    let mut out = vec![None];
    for (_, order, code) in found {
        out.push(Some(canon::graph_from_code(order, code)?));
    }
    Ok(out)
}

/// Scan `K_k ∨ (P ∪ isolated vertices)` over every pattern `P` with at most
/// `max_inner_edges` edges; the winner is the member with the largest `q`.
pub fn family_scan(n: usize, k: usize, prime: bool, max_inner_edges: usize) -> Result<SearchReport> {
    check_k(k)?;
    if n > MAX_FAMILY_ORDER || n <= k {
        return Err(Error::Domain(format!(
            "family scan needs k < n ≤ {MAX_FAMILY_ORDER}, got n={n}, k={k}"
        )));
    }
    if max_inner_edges > MAX_FAMILY_INNER_EDGES {
        return Err(Error::Domain(format!(
            "family scan supports at most {MAX_FAMILY_INNER_EDGES} inner edges, got {max_inner_edges}"
        )));
    }
    let t = tree_order(k, prime);
    let trees = trees::all_trees(t)?;
    let clique = graph::make_complete(k)?;
    let patterns: Vec<Option<Graph>> = sparse_patterns(max_inner_edges)?
        .into_iter()
        .filter(|p| p.as_ref().is_none_or(|p| p.n() <= n - k))
        .collect();
    let scanned: Vec<(FamilyCandidate, Graph)> = patterns
        .par_iter()
        .map(|p| -> Result<(FamilyCandidate, Graph)> {
            let inner = match p {
                None => Graph::empty(n - k)?,
                Some(p) if p.n() == n - k => p.clone(),
                Some(p) => graph::disjoint_union(p, &Graph::empty(n - k - p.n())?),
            };
            let g = graph::join(&clique, &inner);
            let missing = missing_tree(&g, &trees, None);
            let q = radius(&g)?;
            Ok((
                FamilyCandidate {
                    pattern: p.as_ref().map(graph6::encode).unwrap_or_default(),
                    inner_edges: p.as_ref().map_or(0, Graph::edge_count),
                    member: missing.is_some(),
                    q,
                    missing,
                },
                g,
            ))
        })
        .collect::<Result<_>>()?;
    let mut best = None;
    let mut winner_pattern = String::new();
    for (c, g) in &scanned {
        if let Some(w) = &c.missing {
            let code = graph6::encode(g);
            let replace = best
                .as_ref()
                .is_none_or(|b: &Best| better((c.q, &code), (b.q, &b.code)));
            if replace {
                winner_pattern = if c.pattern.is_empty() {
                    "H = empty".to_string()
                } else {
                    format!("H = {} ({} edges)", c.pattern, c.inner_edges)
                };
            }
            Best::offer(
                &mut best,
                Best {
                    graph: g.clone(),
                    code,
                    q: c.q,
                    witness: w.clone(),
                },
            );
        }
    }
    let best = best.ok_or_else(|| Error::Domain("no family member misses a tree".into()))?;
    let excluded = scanned.iter().filter(|(c, _)| !c.member).count();
    let notes = vec![
        format!("winner: {winner_pattern}"),
        format!("{} patterns scanned, {excluded} excluded (contain every tree on {t} vertices)", scanned.len()),
    ];
    let mut report = finish(SearchMode::Family, n, k, prime, best, scanned.len() as u64, None, notes)?;
    report.family = scanned.into_iter().map(|(c, _)| c).collect();
    Ok(report)
}

struct Climb {
    graph: Graph,
    q: f64,
    witness: CanonicalTree,
    proposals: u64,
    trace: Vec<TraceStep>,
    start: String,
}

fn random_member(rng: &mut ChaCha8Rng, n: usize, k: usize, prime: bool, trees: &[CanonicalTree]) -> Result<(Graph, CanonicalTree)> {
    let mut edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    edges.retain(|_| rng.gen_bool(0.5));
    // Members have at most 2kn (resp. (2k+1)n) edges, so thin blindly first.
    let cap = (2 * k + usize::from(prime)) * n;
    while edges.len() > cap {
        let i = rng.gen_range(0..edges.len());
        edges.swap_remove(i);
    }
    loop {
        let g = Graph::from_edges(n, edges.iter().copied())?;
        if let Some(w) = missing_tree(&g, trees, None) {
            return Ok((g, w));
        }
        let i = rng.gen_range(0..edges.len());
        edges.swap_remove(i);
    }
}

fn climb(n: usize, k: usize, prime: bool, seed: u64, restart: usize, steps: usize, trees: &[CanonicalTree]) -> Result<Climb> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    let (mut g, mut witness, start) = match reference(n, k, prime).filter(|_| restart == 0) {
        Some(r) => {
            let w = missing_tree(&r, trees, None)
                .ok_or_else(|| Error::Domain("reference construction contains every tree".into()))?;
            (r, w, "reference construction".to_string())
        }
        None => {
            let (g, w) = random_member(&mut rng, n, k, prime, trees)?;
            (g, w, "random graph thinned to membership".to_string())
        }
    };
    let mut q = radius(&g)?;
    let mut trace = Vec::new();
    let mut proposals = 0;
    for step in 0..steps {
        proposals += 1;
        let u = rng.gen_range(0..n);
        let mut v = rng.gen_range(0..n - 1);
        if v >= u {
            v += 1;
        }
        // Deleting an edge never raises q.
        if g.has_edge(u, v) {
            continue;
        }
        let cand = g.with_edge(u, v)?;
        let cq = radius(&cand)?;
        if cq <= q + TIE_EPS * (1.0 + q) {
            continue;
        }
        if let Some(w) = missing_tree(&cand, trees, Some(&witness)) {
            g = cand;
            q = cq;
            witness = w;
            trace.push(TraceStep {
                restart,
                step,
                u: u.min(v),
                v: u.max(v),
                q,
            });
        }
    }
    Ok(Climb {
        graph: g,
        q,
        witness,
        proposals,
        trace,
        start,
    })
}

/// Restarted hill climbing by single-edge additions that keep some tree on
/// `2k+2` (`2k+3`) vertices missing. Restart 0 starts from the reference
/// construction when it exists; the others from random graphs thinned until
/// they miss a tree. Deterministic in `seed`, independent of worker count.
pub fn hill_climb(n: usize, k: usize, prime: bool, seed: u64, restarts: usize, steps: usize) -> Result<SearchReport> {
    check_k(k)?;
    if !(2..=MAX_HILL_CLIMB_ORDER).contains(&n) {
        return Err(Error::Domain(format!(
            "hill climbing supports 2 ≤ n ≤ {MAX_HILL_CLIMB_ORDER}, got {n}"
        )));
    }
    if restarts == 0 {
        return Err(Error::Domain("hill climbing needs at least one restart".into()));
    }
    let t = tree_order(k, prime);
    let trees = trees::all_trees(t)?;
    let runs: Vec<Climb> = (0..restarts)
        .into_par_iter()
        .map(|r| climb(n, k, prime, seed, r, steps, &trees))
        .collect::<Result<_>>()?;
    let mut best = None;
    let mut notes = Vec::new();
    let mut proposals = 0;
    let mut trace = Vec::new();
    for (r, run) in runs.into_iter().enumerate() {
        proposals += run.proposals;
        notes.push(format!(
            "restart {r}: start = {}, accepted {} moves, final q = {:.11e}",
            run.start,
            run.trace.len(),
            run.q
        ));
        trace.extend(run.trace);
        Best::offer(
            &mut best,
            Best {
                code: graph6::encode(&run.graph),
                graph: run.graph,
                q: run.q,
                witness: run.witness,
            },
        );
    }
    let best = best.expect("at least one restart");
    let mut report = finish(SearchMode::Hillclimb, n, k, prime, best, proposals, Some(seed), notes)?;
    report.trace = trace;
    Ok(report)
}
