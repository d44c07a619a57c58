//! Simple undirected graphs and the constructions used throughout the crate.
//!
//! Constructors follow a fixed vertex layout: the left operand of a join (the
//! clique of `S(n,k)`, the independent `k`-set of the bipartite-join hosts)
//! occupies the lowest indices.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An immutable simple undirected graph on vertices `0..n`.
///
/// Adjacency is stored twice: as bit rows for O(1) edge queries and as sorted
/// neighbour lists for iteration. Both are built once at construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    nbrs: Vec<Vec<usize>>,
    edges: usize,
}

/// Mutable adjacency used while building a [`Graph`].
#[derive(Clone)]
pub(crate) struct Builder {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Builder {
    pub(crate) fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Builder {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    pub(crate) fn set(&mut self, u: usize, v: usize, on: bool) {
        let (wu, bu) = (u / 64, u % 64);
        let (wv, bv) = (v / 64, v % 64);
        if on {
            self.bits[u * self.words + wv] |= 1 << bv;
            self.bits[v * self.words + wu] |= 1 << bu;
        } else {
            self.bits[u * self.words + wv] &= !(1 << bv);
            self.bits[v * self.words + wu] &= !(1 << bu);
        }
    }

    pub(crate) fn get(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub(crate) fn finish(self) -> Graph {
        let mut nbrs = Vec::with_capacity(self.n);
        let mut twice = 0;
        for u in 0..self.n {
            let row = &self.bits[u * self.words..(u + 1) * self.words];
            let mut list = Vec::new();
            for (w, &word) in row.iter().enumerate() {
                let mut word = word;
                while word != 0 {
                    let b = word.trailing_zeros() as usize;
                    list.push(w * 64 + b);
                    word &= word - 1;
                }
            }
            twice += list.len();
            nbrs.push(list);
        }
        Graph {
            n: self.n,
            words: self.words,
            bits: self.bits,
            nbrs,
            edges: twice / 2,
        }
    }
}

impl Graph {
    /// Graph on `n` vertices with the given edges. Duplicate edges are
    /// ignored; loops and out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(Error::Domain("graph order must be positive".into()));
        }
        let mut b = Builder::new(n);
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            b.set(u, v, true);
        }
        Ok(b.finish())
    }

    /// The edgeless graph on `n ≥ 1` vertices.
    pub fn empty(n: usize) -> Result<Graph> {
        Graph::from_edges(n, std::iter::empty())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.nbrs[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.nbrs.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.nbrs.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Sorted neighbours of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.nbrs[v]
    }

    /// The bit row of `v`, `ceil(n/64)` words, bit `u` set iff `u ~ v`.
    pub fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.words..(v + 1) * self.words]
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.nbrs
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub(crate) fn to_builder(&self) -> Builder {
        Builder {
            n: self.n,
            words: self.words,
            bits: self.bits.clone(),
        }
    }

    /// Copy of this graph with the edge `{u, v}` flipped.
    pub fn with_edge_toggled(&self, u: usize, v: usize) -> Result<Graph> {
        self.check_pair(u, v)?;
        let mut b = self.to_builder();
        let on = !b.get(u, v);
        b.set(u, v, on);
        Ok(b.finish())
    }

    /// Copy of this graph with the edge `{u, v}` present.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph> {
        self.check_pair(u, v)?;
        let mut b = self.to_builder();
        b.set(u, v, true);
        Ok(b.finish())
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<()> {
        for x in [u, v] {
            if x >= self.n {
                return Err(Error::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        Ok(())
    }

    /// Relabel so that old vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: perm.len(),
            });
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Domain("relabelling is not a permutation".into()));
            }
        }
        Graph::from_edges(self.n, self.edges().map(|(u, v)| (perm[u], perm[v])))
    }

    /// Number of edges with both endpoints in `set`.
    pub fn induced_edge_count(&self, set: &VertexSet) -> usize {
        let mut mask = vec![0u64; self.words];
        for &v in set.members() {
            mask[v / 64] |= 1 << (v % 64);
        }
        let twice: u32 = set
            .members()
            .iter()
            .map(|&v| {
                self.row(v)
                    .iter()
                    .zip(&mask)
                    .map(|(a, b)| (a & b).count_ones())
                    .sum::<u32>()
            })
            .sum();
        (twice / 2) as usize
    }

    /// Induced subgraph on `vertices`, relabelled `0..len` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Result<Graph> {
        let mut pairs = Vec::new();
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    pairs.push((i, j));
                }
            }
        }
        Graph::from_edges(vertices.len(), pairs)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// A subset of the vertex range of a particular graph, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexSet {
    n: usize,
    members: Vec<usize>,
}

impl VertexSet {
    pub fn new(n: usize, members: impl IntoIterator<Item = usize>) -> Result<VertexSet> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if let Some(&v) = members.iter().find(|&&v| v >= n) {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        Ok(VertexSet { n, members })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.members.iter().all(|&v| other.contains(v))
    }
}

/// `K_n`.
pub fn make_complete(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::Domain("complete graph needs n ≥ 1".into()));
    }
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

/// Path on `n` vertices, `0 - 1 - ... - (n-1)`.
pub fn make_path(n: usize) -> Result<Graph> {
    Graph::from_edges(n, (1..n).map(|v| (v - 1, v)))
}

/// Cycle on `n ≥ 3` vertices.
pub fn make_cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::Domain(format!("cycle needs n ≥ 3, got {n}")));
    }
    Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n)))
}

/// Star `K_{1,leaves}` with centre 0.
pub fn make_star(leaves: usize) -> Result<Graph> {
    Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v)))
}

/// `G ∨ H`: disjoint union plus every edge between the parts. `G` keeps
/// vertices `0..n_G`.
pub fn join(g: &Graph, h: &Graph) -> Graph {
    let off = g.n();
    let mut b = Builder::new(g.n() + h.n());
    for (u, v) in g.edges() {
        b.set(u, v, true);
    }
    for (u, v) in h.edges() {
        b.set(u + off, v + off, true);
    }
    for u in 0..g.n() {
        for v in 0..h.n() {
            b.set(u, v + off, true);
        }
    }
    b.finish()
}

/// `G ∪ H` with no cross edges. `G` keeps vertices `0..n_G`.
pub fn disjoint_union(g: &Graph, h: &Graph) -> Graph {
    let off = g.n();
    let mut b = Builder::new(g.n() + h.n());
    for (u, v) in g.edges() {
        b.set(u, v, true);
    }
    for (u, v) in h.edges() {
        b.set(u + off, v + off, true);
    }
    b.finish()
}

pub fn complement(g: &Graph) -> Graph {
    let n = g.n();
    let mut b = Builder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) {
                b.set(u, v, true);
            }
        }
    }
    b.finish()
}

/// `S(n,k) = K_k ∨ K̄_{n-k}`; the clique is `0..k`.
pub fn make_s(n: usize, k: usize) -> Result<Graph> {
    if k == 0 || n <= k {
        return Err(Error::Domain(format!("S(n,k) needs n > k ≥ 1, got n={n}, k={k}")));
    }
    Ok(join(&make_complete(k)?, &Graph::empty(n - k)?))
}

/// `S+(n,k)`: `S(n,k)` plus the edge `{k, k+1}` inside the independent part.
pub fn make_s_plus(n: usize, k: usize) -> Result<Graph> {
    if k == 0 || n < k + 2 {
        return Err(Error::Domain(format!("S+(n,k) needs n ≥ k+2, k ≥ 1, got n={n}, k={k}")));
    }
    make_s(n, k)?.with_edge(k, k + 1)
}

pub fn make_complete_bipartite(a: usize, b: usize) -> Result<Graph> {
    if a == 0 || b == 0 {
        return Err(Error::Domain(format!("K(a,b) needs a,b ≥ 1, got a={a}, b={b}")));
    }
    Ok(join(&Graph::empty(a)?, &Graph::empty(b)?))
}

/// The three host graphs of the construction lemma.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Lemma24Variant {
    /// `K̄_k ∨ ((2k-1)K_1 ∪ K_2)`, order `3k+1`.
    Plus,
    /// `K̄_k ∨ ((2k-1)K_1 ∪ P_3)`, order `3k+2`.
    P,
    /// `K̄_k ∨ ((2k-2)K_1 ∪ 2K_2)`, order `3k+2`.
    M,
}

impl std::str::FromStr for Lemma24Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Lemma24Variant::Plus),
            "p" => Ok(Lemma24Variant::P),
            "m" => Ok(Lemma24Variant::M),
            other => Err(Error::Domain(format!("unknown construction variant '{other}' (plus|p|m)"))),
        }
    }
}

pub fn make_lemma24_graph(k: usize, variant: Lemma24Variant) -> Result<Graph> {
    if k == 0 {
        return Err(Error::Domain("construction needs k ≥ 1".into()));
    }
    let inner = match variant {
        Lemma24Variant::Plus => disjoint_union(&Graph::empty(2 * k - 1)?, &make_complete(2)?),
        Lemma24Variant::P => disjoint_union(&Graph::empty(2 * k - 1)?, &make_path(3)?),
        Lemma24Variant::M => {
            let two_k2 = disjoint_union(&make_complete(2)?, &make_complete(2)?);
            if k == 1 {
                two_k2
            } else {
                disjoint_union(&Graph::empty(2 * k - 2)?, &two_k2)
            }
        }
    };
    Ok(join(&Graph::empty(k)?, &inner))
}

/// Connected components, each sorted, ordered by smallest vertex.
pub fn components(g: &Graph) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    for s in 0..g.n() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            let u = comp[i];
            i += 1;
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

pub fn is_connected(g: &Graph) -> bool {
    components(g).len() == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom2(n: usize) -> usize {
        n * (n.saturating_sub(1)) / 2
    }

    #[test]
    fn complete_edge_counts() {
        assert_eq!(make_complete(1).unwrap().edge_count(), 0);
        assert_eq!(make_complete(4).unwrap().edge_count(), 6);
        assert_eq!(make_complete(10).unwrap().edge_count(), 45);
        assert!(make_complete(0).is_err());
    }

    #[test]
    fn join_examples() {
        let g = join(&make_complete(2).unwrap(), &Graph::empty(2).unwrap());
        assert_eq!((g.n(), g.edge_count()), (4, 5));
        let k1 = Graph::empty(1).unwrap();
        assert_eq!(join(&k1, &k1), make_complete(2).unwrap());
        for (n, k) in [(10, 2), (7, 3), (5, 1)] {
            let g = join(&make_complete(k).unwrap(), &Graph::empty(n - k).unwrap());
            assert_eq!(g, make_s(n, k).unwrap());
            assert_eq!(g.edge_count(), binom2(k) + k * (n - k));
        }
    }

    #[test]
    fn union_examples() {
        let k2 = make_complete(2).unwrap();
        let g = disjoint_union(&Graph::empty(3).unwrap(), &k2);
        assert_eq!((g.n(), g.edge_count()), (5, 1));
        let g = disjoint_union(&k2, &k2);
        assert_eq!((g.n(), g.edge_count()), (4, 2));
        let g = disjoint_union(&make_path(3).unwrap(), &Graph::empty(2).unwrap());
        assert_eq!((g.n(), g.edge_count()), (5, 2));
    }

    #[test]
    fn complement_examples() {
        assert_eq!(complement(&make_complete(4).unwrap()), Graph::empty(4).unwrap());
        assert_eq!(complement(&Graph::empty(6).unwrap()), make_complete(6).unwrap());
        let c5 = make_cycle(5).unwrap();
        let cc = complement(&c5);
        // Complement of 0-1-2-3-4-0 is the pentagram 0-2-4-1-3-0.
        let relabel = [0, 3, 1, 4, 2];
        assert_eq!(cc.permuted(&relabel).unwrap(), c5);
    }

    #[test]
    fn s_constructions() {
        let s = make_s(10, 2).unwrap();
        assert_eq!((s.n(), s.edge_count()), (10, 17));
        assert!(s.has_edge(0, 1) && !s.has_edge(2, 3));
        assert_eq!(make_s(4, 1).unwrap(), make_star(3).unwrap());
        assert_eq!(make_s(20, 2).unwrap().edge_count(), 37);
        assert!(make_s(3, 3).is_err());
        assert!(make_s(3, 0).is_err());

        assert_eq!(make_s_plus(4, 2).unwrap(), make_complete(4).unwrap());
        assert_eq!(make_s_plus(10, 2).unwrap().edge_count(), 18);
        for k in 1..7 {
            assert_eq!(make_s_plus(k + 2, k).unwrap(), make_complete(k + 2).unwrap());
        }
        assert!(make_s_plus(3, 2).is_err());
        let sp = make_s_plus(9, 3).unwrap();
        assert!(sp.has_edge(3, 4));
    }

    #[test]
    fn bipartite_and_lemma24() {
        assert_eq!(make_complete_bipartite(3, 5).unwrap().edge_count(), 15);
        assert_eq!(make_complete_bipartite(1, 1).unwrap(), make_complete(2).unwrap());
        assert_eq!(make_complete_bipartite(3, 6).unwrap().edge_count(), 18);
        assert!(make_complete_bipartite(0, 2).is_err());

        for k in 1..6 {
            let p = make_lemma24_graph(k, Lemma24Variant::Plus).unwrap();
            assert_eq!((p.n(), p.edge_count()), (3 * k + 1, k * (2 * k + 1) + 1));
            for v in [Lemma24Variant::P, Lemma24Variant::M] {
                let g = make_lemma24_graph(k, v).unwrap();
                assert_eq!((g.n(), g.edge_count()), (3 * k + 2, k * (2 * k + 2) + 2));
            }
        }
        let g = make_lemma24_graph(2, Lemma24Variant::Plus).unwrap();
        assert_eq!((g.n(), g.edge_count()), (7, 11));
    }

    #[test]
    fn connectivity() {
        assert!(is_connected(&make_s(10, 2).unwrap()));
        let two_k2 = disjoint_union(&make_complete(2).unwrap(), &make_complete(2).unwrap());
        assert!(!is_connected(&two_k2));
        assert!(!is_connected(&Graph::empty(3).unwrap()));
        assert!(is_connected(&Graph::empty(1).unwrap()));
        for k in 1..5 {
            for n in k + 1..30 {
                assert!(is_connected(&make_s(n, k).unwrap()));
            }
        }
    }

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(Graph::from_edges(3, [(0, 0)]), Err(Error::SelfLoop(0)));
        assert!(matches!(
            Graph::from_edges(3, [(0, 3)]),
            Err(Error::VertexOutOfRange { vertex: 3, n: 3 })
        ));
    }

    #[test]
    fn induced_counts() {
        let sp = make_s_plus(12, 2).unwrap();
        let r = VertexSet::new(12, 2..12).unwrap();
        assert_eq!(sp.induced_edge_count(&r), 1);
        let big = make_s_plus(130, 3).unwrap();
        let r = VertexSet::new(130, 3..130).unwrap();
        assert_eq!(big.induced_edge_count(&r), 1);
        assert_eq!(big.induced_edge_count(&VertexSet::new(130, 0..3).unwrap()), 3);
    }
}
