//! Unlabeled free trees as canonical level sequences.
//!
//! A tree is rooted at its centroid. Children are ordered so that their
//! level sequences are non-increasing, which makes the whole sequence the
//! lexicographically largest one for that rooting. When there are two
//! centroids the rooting giving the larger sequence is used.

use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{self, Graph};

/// An unlabeled free tree in canonical level-sequence form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalTree {
    level_seq: Vec<usize>,
}

impl CanonicalTree {
    pub fn t(&self) -> usize {
        self.level_seq.len()
    }

    pub fn level_seq(&self) -> &[usize] {
        &self.level_seq
    }

    /// Canonical form of the tree described by an arbitrary level sequence.
    pub fn from_level_sequence(seq: &[usize]) -> Result<CanonicalTree> {
        canonical_form(&level_sequence_to_graph(seq)?)
    }

    /// Parse `"0,1,2,1"` (commas and/or whitespace).
    pub fn parse(s: &str) -> Result<CanonicalTree> {
        let seq = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|p| !p.is_empty())
            .map(|p| {
                p.parse::<usize>()
                    .map_err(|_| Error::LevelSequence(format!("'{p}' is not a non-negative integer")))
            })
            .collect::<Result<Vec<_>>>()?;
        CanonicalTree::from_level_sequence(&seq)
    }

    /// Degree of each position in the decoded tree.
    pub fn degrees(&self) -> Vec<usize> {
        tree_to_graph(self).degrees()
    }
}

impl fmt::Display for CanonicalTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.level_seq.iter().map(|l| l.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

fn parents(seq: &[usize]) -> Result<Vec<Option<usize>>> {
    if seq.is_empty() {
        return Err(Error::LevelSequence("empty sequence".into()));
    }
    if seq[0] != 0 {
        return Err(Error::LevelSequence(format!("root level must be 0, got {}", seq[0])));
    }
    let mut last_at = vec![0usize; seq.len()];
    let mut out = vec![None];
    for i in 1..seq.len() {
        let l = seq[i];
        if l == 0 || l > seq[i - 1] + 1 {
            return Err(Error::LevelSequence(format!(
                "entry {i} has level {l} after level {}",
                seq[i - 1]
            )));
        }
        out.push(Some(last_at[l - 1]));
        last_at[l] = i;
    }
    Ok(out)
}

/// Decode a level sequence: position `i` hangs off the nearest earlier
/// position one level up.
pub fn level_sequence_to_graph(seq: &[usize]) -> Result<Graph> {
    let par = parents(seq)?;
    Graph::from_edges(
        seq.len(),
        par.iter().enumerate().filter_map(|(i, p)| p.map(|p| (p, i))),
    )
}

pub fn tree_to_graph(t: &CanonicalTree) -> Graph {
    level_sequence_to_graph(&t.level_seq).expect("canonical trees hold valid level sequences")
}

/// Canonical rooted level sequence of the tree `g` rooted at `root`.
fn rooted_sequence(g: &Graph, root: usize) -> Vec<usize> {
    fn rec(g: &Graph, v: usize, parent: usize, depth: usize) -> Vec<usize> {
        let mut kids: Vec<Vec<usize>> = g
            .neighbors(v)
            .iter()
            .filter(|&&w| w != parent)
            .map(|&w| rec(g, w, v, depth + 1))
            .collect();
        kids.sort_unstable_by(|a, b| b.cmp(a));
        let mut out = Vec::with_capacity(1 + kids.iter().map(Vec::len).sum::<usize>());
        out.push(depth);
        for k in kids {
            out.extend(k);
        }
        out
    }
    rec(g, root, usize::MAX, 0)
}

fn check_tree(g: &Graph) -> Result<()> {
    if g.edge_count() + 1 != g.n() {
        return Err(Error::NotATree(format!(
            "{} vertices but {} edges",
            g.n(),
            g.edge_count()
        )));
    }
    if !graph::is_connected(g) {
        return Err(Error::NotATree("disconnected".into()));
    }
    Ok(())
}

/// Centroid vertices (one, or two adjacent ones).
pub fn centroids(g: &Graph) -> Vec<usize> {
    let n = g.n();
    // Iterative DFS order from 0 to get subtree sizes.
    let mut order = Vec::with_capacity(n);
    let mut parent = vec![usize::MAX; n];
    let mut stack = vec![0];
    let mut seen = vec![false; n];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        order.push(v);
        for &w in g.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = v;
                stack.push(w);
            }
        }
    }
    let mut size = vec![1usize; n];
    for &v in order.iter().rev() {
        if parent[v] != usize::MAX {
            size[parent[v]] += size[v];
        }
    }
    let heaviest: Vec<usize> = (0..n)
        .map(|v| {
            let below = g
                .neighbors(v)
                .iter()
                .filter(|&&w| parent[w] == v)
                .map(|&w| size[w])
                .max()
                .unwrap_or(0);
            below.max(n - size[v])
        })
        .collect();
    let best = *heaviest.iter().min().expect("non-empty tree");
    (0..n).filter(|&v| heaviest[v] == best).collect()
}

/// Canonical form of a tree given as a graph.
pub fn canonical_form(g: &Graph) -> Result<CanonicalTree> {
    check_tree(g)?;
    let level_seq = centroids(g)
        .into_iter()
        .map(|c| rooted_sequence(g, c))
        .max()
        .expect("a tree has a centroid");
    Ok(CanonicalTree { level_seq })
}

/// Beyer–Hedetniemi successor on rooted canonical level sequences, which
/// walks them in decreasing lexicographic order in constant amortized time.
/// Returns false once the star (all non-root entries equal to 1) is reached.
fn next_rooted(seq: &mut [usize]) -> bool {
    let Some(p) = seq.iter().rposition(|&l| l > 1) else {
        return false;
    };
    let q = seq[..p]
        .iter()
        .rposition(|&l| l == seq[p] - 1)
        .expect("a deeper entry has an ancestor one level up");
    let shift = p - q;
    for i in p..seq.len() {
        seq[i] = seq[i - shift];
    }
    true
}

/// Stream of every free tree on `t ≥ 1` vertices, each exactly once, in
/// strictly decreasing lexicographic order of canonical level sequences
/// (the path first, the star last).
pub struct TreeStream {
    current: Option<Vec<usize>>,
}

impl Iterator for TreeStream {
    type Item = CanonicalTree;

    fn next(&mut self) -> Option<CanonicalTree> {
        loop {
            let seq = self.current.as_mut()?;
            let candidate = seq.clone();
            if !next_rooted(seq) {
                self.current = None;
            }
            // Keep only rootings that are the free tree's canonical one.
            let g = level_sequence_to_graph(&candidate).expect("well formed");
            let canon = canonical_form(&g).expect("level sequences decode to trees");
            if canon.level_seq == candidate {
                return Some(canon);
            }
        }
    }
}

pub fn enumerate_trees(t: usize) -> Result<TreeStream> {
    if t == 0 {
        return Err(Error::Domain("trees need at least one vertex".into()));
    }
    Ok(TreeStream {
        current: Some((0..t).collect()),
    })
}

/// Collected [`enumerate_trees`].
pub fn all_trees(t: usize) -> Result<Vec<CanonicalTree>> {
    Ok(enumerate_trees(t)?.collect())
}

/// Number of distinct unlabeled trees among the `t^(t−2)` labeled trees
/// generated from Prüfer words, using a centre-rooted parenthesis encoding
/// that shares no code with the level-sequence machinery.
pub fn prufer_count_oracle(t: usize) -> Result<usize> {
    if !(2..=9).contains(&t) {
        return Err(Error::Domain(format!("Prüfer oracle supports 2 ≤ t ≤ 9, got {t}")));
    }
    if t == 2 {
        return Ok(1);
    }
    let len = t - 2;
    let sets: Vec<HashSet<String>> = (0..t)
        .into_par_iter()
        .map(|first| {
            let mut seen = HashSet::new();
            let rest = t.pow(len as u32 - 1);
            let mut word = vec![0usize; len];
            for idx in 0..rest {
                word[0] = first;
                let mut r = idx;
                for slot in word[1..].iter_mut() {
                    *slot = r % t;
                    r /= t;
                }
                seen.insert(oracle::centre_code(&oracle::prufer_decode(&word, t)));
            }
            seen
        })
        .collect();
    let mut all = HashSet::new();
    for s in sets {
        all.extend(s);
    }
    Ok(all.len())
}

mod oracle {
    /// Adjacency lists of the labeled tree with Prüfer word `word`.
    pub(super) fn prufer_decode(word: &[usize], t: usize) -> Vec<Vec<usize>> {
        let mut degree = vec![1usize; t];
        for &w in word {
            degree[w] += 1;
        }
        let mut adj = vec![Vec::new(); t];
        for &w in word {
            let leaf = (0..t).find(|&v| degree[v] == 1).expect("a leaf exists");
            adj[leaf].push(w);
            adj[w].push(leaf);
            degree[leaf] -= 1;
            degree[w] -= 1;
        }
        let rest: Vec<usize> = (0..t).filter(|&v| degree[v] == 1).collect();
        adj[rest[0]].push(rest[1]);
        adj[rest[1]].push(rest[0]);
        adj
    }

    fn encode(adj: &[Vec<usize>], v: usize, parent: Option<usize>, skip: Option<usize>) -> String {
        let mut kids: Vec<String> = adj[v]
            .iter()
            .filter(|&&w| Some(w) != parent && Some(w) != skip)
            .map(|&w| encode(adj, w, Some(v), None))
            .collect();
        kids.sort();
        format!("({})", kids.concat())
    }

    /// Isomorphism code: root at the centre found by leaf peeling.
    pub(super) fn centre_code(adj: &[Vec<usize>]) -> String {
        let t = adj.len();
        let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
        let mut layer: Vec<usize> = (0..t).filter(|&v| deg[v] <= 1).collect();
        let mut left = t;
        while left > 2 {
            left -= layer.len();
            let mut next = Vec::new();
            for &v in &layer {
                for &w in &adj[v] {
                    if deg[w] > 1 {
                        deg[w] -= 1;
                        if deg[w] == 1 {
                            next.push(w);
                        }
                    }
                }
                deg[v] = 0;
            }
            layer = next;
        }
        match layer[..] {
            [c] => encode(adj, c, None, None),
            [a, b] => {
                let mut halves = [encode(adj, a, None, Some(b)), encode(adj, b, None, Some(a))];
                halves.sort();
                format!("[{}{}]", halves[0], halves[1])
            }
            _ => unreachable!("a tree has one or two centres"),
        }
    }
}
