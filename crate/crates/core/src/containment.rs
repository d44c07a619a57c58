//! Tree containment: backtracking subgraph embedding of a tree into a host,
//! the all-trees check, and the desk-scale lemma verifications.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{self, Graph, Lemma24Variant};
use crate::trees::{self, CanonicalTree};

/// Injective map from tree positions (level-sequence order) to host vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub map: Vec<usize>,
}

impl Embedding {
    /// Independent check: injective, in range, and edge preserving.
    pub fn verify(&self, host: &Graph, tree: &Graph) -> bool {
        if self.map.len() != tree.n() {
            return false;
        }
        let mut used = vec![false; host.n()];
        for &h in &self.map {
            if h >= host.n() || std::mem::replace(&mut used[h], true) {
                return false;
            }
        }
        tree.edges().all(|(a, b)| host.has_edge(self.map[a], self.map[b]))
    }
}

/// Outcome of [`contains_all_trees`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MissingReport {
    pub t: usize,
    pub all_present: bool,
    pub first_missing: Option<CanonicalTree>,
    /// Trees examined before stopping (includes the missing one).
    pub checked: usize,
}

/// Host-side data shared across many embedding queries.
pub struct Host<'a> {
    g: &'a Graph,
    /// Neighbours ordered by descending degree, then index.
    by_degree: Vec<Vec<usize>>,
    /// All vertices in the same order.
    order: Vec<usize>,
}

impl<'a> Host<'a> {
    pub fn new(g: &'a Graph) -> Self {
        let key = |v: &usize| (std::cmp::Reverse(g.degree(*v)), *v);
        let by_degree = (0..g.n())
            .map(|v| {
                let mut l = g.neighbors(v).to_vec();
                l.sort_by_key(key);
                l
            })
            .collect();
        let mut order: Vec<usize> = (0..g.n()).collect();
        order.sort_by_key(key);
        Host { g, by_degree, order }
    }

    pub fn graph(&self) -> &Graph {
        self.g
    }

    pub fn embed(&self, tree: &CanonicalTree) -> Option<Embedding> {
        let t = tree.t();
        if t > self.g.n() {
            return None;
        }
        let plan = Plan::new(&trees::tree_to_graph(tree));
        let mut state = Search {
            host: self,
            plan: &plan,
            image: vec![usize::MAX; t],
            used: vec![0u64; self.g.n().div_ceil(64)],
        };
        if state.extend(0) {
            let mut map = vec![0; t];
            for (i, &tv) in plan.order.iter().enumerate() {
                map[tv] = state.image[i];
            }
            Some(Embedding { map })
        } else {
            None
        }
    }
}

/// Tree vertices in DFS order from a maximum-degree vertex.
struct Plan {
    order: Vec<usize>,
    /// Index into `order` of each entry's parent (root: usize::MAX).
    parent: Vec<usize>,
    degree: Vec<usize>,
    /// Children still to be placed after this entry.
    children: Vec<usize>,
}

impl Plan {
    fn new(tree: &Graph) -> Plan {
        let root = (0..tree.n())
            .max_by_key(|&v| (tree.degree(v), std::cmp::Reverse(v)))
            .expect("non-empty tree");
        fn visit(tree: &Graph, v: usize, from: usize, up: usize, order: &mut Vec<usize>, parent: &mut Vec<usize>) {
            let here = order.len();
            order.push(v);
            parent.push(up);
            for &w in tree.neighbors(v) {
                if w != from {
                    visit(tree, w, v, here, order, parent);
                }
            }
        }
        let mut order = Vec::with_capacity(tree.n());
        let mut parent = Vec::with_capacity(tree.n());
        visit(tree, root, usize::MAX, usize::MAX, &mut order, &mut parent);
        let degree: Vec<usize> = order.iter().map(|&v| tree.degree(v)).collect();
        let children = (0..order.len())
            .map(|i| degree[i] - usize::from(i != 0))
            .collect();
        Plan {
            order,
            parent,
            degree,
            children,
        }
    }
}

struct Search<'h, 'g> {
    host: &'h Host<'g>,
    plan: &'h Plan,
    image: Vec<usize>,
    used: Vec<u64>,
}

impl Search<'_, '_> {
    fn is_used(&self, v: usize) -> bool {
        self.used[v / 64] >> (v % 64) & 1 == 1
    }

    fn flip(&mut self, v: usize) {
        self.used[v / 64] ^= 1 << (v % 64);
    }

    fn free_neighbours(&self, v: usize) -> usize {
        self.host
            .g
            .row(v)
            .iter()
            .zip(&self.used)
            .map(|(r, u)| (r & !u).count_ones() as usize)
            .sum()
    }

    fn try_place(&mut self, i: usize, h: usize) -> bool {
        if self.host.g.degree(h) < self.plan.degree[i] {
            return false;
        }
        self.flip(h);
        self.image[i] = h;
        let feasible = self.free_neighbours(h) >= self.plan.children[i];
        if feasible && self.extend(i + 1) {
            return true;
        }
        self.flip(h);
        false
    }

    fn extend(&mut self, i: usize) -> bool {
        if i == self.plan.order.len() {
            return true;
        }
        if i == 0 {
            let host = self.host;
            return host.order.iter().any(|&h| self.try_place(0, h));
        }
        let anchor = self.image[self.plan.parent[i]];
        let host = self.host;
        for &h in &host.by_degree[anchor] {
            if !self.is_used(h) && self.try_place(i, h) {
                return true;
            }
        }
        false
    }
}

/// An embedding of `tree` into `g`, if one exists.
pub fn contains_tree(g: &Graph, tree: &CanonicalTree) -> Option<Embedding> {
    Host::new(g).embed(tree)
}

/// Check every tree on `t` vertices, stopping at the first one (in
/// enumeration order) that does not embed.
pub fn contains_all_trees(g: &Graph, t: usize) -> Result<MissingReport> {
    contains_all_trees_with_hint(g, t, None)
}

/// As [`contains_all_trees`], but tries `hint` first. If the hint is absent
/// it is reported as the missing tree without scanning the rest.
pub fn contains_all_trees_with_hint(
    g: &Graph,
    t: usize,
    hint: Option<&CanonicalTree>,
) -> Result<MissingReport> {
    if t < 2 {
        return Err(crate::Error::Domain(format!("tree order must be ≥ 2, got {t}")));
    }
    let host = Host::new(g);
    if let Some(h) = hint.filter(|h| h.t() == t) {
        if host.embed(h).is_none() {
            return Ok(MissingReport {
                t,
                all_present: false,
                first_missing: Some(h.clone()),
                checked: 1,
            });
        }
    }
    let mut checked = 0;
    for tree in trees::enumerate_trees(t)? {
        checked += 1;
        if host.embed(&tree).is_none() {
            return Ok(MissingReport {
                t,
                all_present: false,
                first_missing: Some(tree),
                checked,
            });
        }
    }
    Ok(MissingReport {
        t,
        all_present: true,
        first_missing: None,
        checked,
    })
}

/// `K_{⌊t/2⌋, t−1}` contains every tree on `t` vertices.
pub fn verify_bipartite_lemma(t: usize) -> Result<bool> {
    if !(2..=10).contains(&t) {
        return Err(crate::Error::Domain(format!("bipartite check supports 2 ≤ t ≤ 10, got {t}")));
    }
    let host = graph::make_complete_bipartite(t / 2, t - 1)?;
    Ok(contains_all_trees(&host, t)?.all_present)
}

/// The `plus` host contains all trees on `2k+2` vertices and the `p`, `m`
/// hosts contain all trees on `2k+3` vertices.
pub fn verify_constructions_lemma(k: usize) -> Result<bool> {
    if !(1..=4).contains(&k) {
        return Err(crate::Error::Domain(format!("construction check supports 1 ≤ k ≤ 4, got {k}")));
    }
    let plus = graph::make_lemma24_graph(k, Lemma24Variant::Plus)?;
    if !contains_all_trees(&plus, 2 * k + 2)?.all_present {
        return Ok(false);
    }
    for v in [Lemma24Variant::P, Lemma24Variant::M] {
        let g = graph::make_lemma24_graph(k, v)?;
        if !contains_all_trees(&g, 2 * k + 3)?.all_present {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One row of the edge-bound (contrapositive) audit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeBoundEntry {
    pub k: usize,
    pub prime: bool,
    pub t: usize,
    pub edges: usize,
    pub bound: usize,
    /// `e(G) − bound`; positive means the containment obligation applies.
    pub slack: i64,
    pub obligation: bool,
    pub pass: bool,
    pub first_missing: Option<CanonicalTree>,
}

/// If `e(G)` exceeds `2kn` (`(2k+1)n` when `prime`), every tree on `2k+2`
/// (`2k+3`) vertices must embed.
pub fn edge_bound_audit(g: &Graph, k: usize, prime: bool) -> Result<EdgeBoundEntry> {
    let n = g.n();
    let (bound, t) = if prime {
        ((2 * k + 1) * n, 2 * k + 3)
    } else {
        (2 * k * n, 2 * k + 2)
    };
    let edges = g.edge_count();
    let obligation = edges > bound;
    let (pass, first_missing) = if obligation {
        let rep = contains_all_trees(g, t)?;
        (rep.all_present, rep.first_missing)
    } else {
        (true, None)
    };
    Ok(EdgeBoundEntry {
        k,
        prime,
        t,
        edges,
        bound,
        slack: edges as i64 - bound as i64,
        obligation,
        pass,
        first_missing,
    })
}
