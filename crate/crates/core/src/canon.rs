//! Canonical labelling of small graphs and isomorphism testing.
//!
//! Canonical labelling is individualization–refinement: refine an ordered
//! partition to an equitable one, branch on every vertex of the first
//! smallest non-singleton cell, and keep the leaf whose relabelled upper
//! triangle is largest. There is no automorphism pruning, so it is limited to
//! small orders.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest order accepted by [`canonical_code`]; the code packs the
/// `n(n−1)/2` upper-triangle bits into a `u128`.
pub const MAX_CANON_ORDER: usize = 16;

type Cells = Vec<Vec<usize>>;

fn masks(g: &Graph) -> Vec<u64> {
    (0..g.n()).map(|v| g.row(v)[0]).collect()
}

fn count_in(adj: &[u64], v: usize, mask: u64) -> u32 {
    (adj[v] & mask).count_ones()
}

/// Split every cell by neighbour counts into each splitter cell until
/// stable. Sub-cells are ordered by ascending count, so the result depends
/// only on the input partition's order and the graph.
fn refine(adj: &[u64], cells: &mut Cells) {
    loop {
        let mut changed = false;
        let mut s = 0;
        while s < cells.len() {
            let mask = cells[s].iter().fold(0u64, |m, &v| m | 1 << v);
            let mut next: Cells = Vec::with_capacity(cells.len() + 1);
            for cell in cells.iter() {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(u32, usize)> =
                    cell.iter().map(|&v| (count_in(adj, v, mask), v)).collect();
                keyed.sort_unstable();
                let mut start = 0;
                for i in 1..=keyed.len() {
                    if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                        next.push(keyed[start..i].iter().map(|&(_, v)| v).collect());
                        start = i;
                    }
                }
            }
            if next.len() != cells.len() {
                changed = true;
            }
            *cells = next;
            s += 1;
        }
        if !changed {
            return;
        }
    }
}

fn leaf_code(adj: &[u64], cells: &Cells) -> u128 {
    let inv: Vec<usize> = cells.iter().map(|c| c[0]).collect();
    let mut code = 0u128;
    for j in 1..inv.len() {
        for i in 0..j {
            code = code << 1 | (adj[inv[i]] >> inv[j] & 1) as u128;
        }
    }
    code
}

fn search(adj: &[u64], cells: Cells, best: &mut Option<(u128, Vec<usize>)>) {
    if cells.iter().all(|c| c.len() == 1) {
        let code = leaf_code(adj, &cells);
        if best.as_ref().is_none_or(|(b, _)| code > *b) {
            *best = Some((code, cells.iter().map(|c| c[0]).collect()));
        }
        return;
    }
    let target = cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.len() > 1)
        .min_by_key(|(i, c)| (c.len(), *i))
        .map(|(i, _)| i)
        .expect("a non-singleton cell exists");
    for &v in &cells[target] {
        let mut child: Cells = Vec::with_capacity(cells.len() + 1);
        for (i, c) in cells.iter().enumerate() {
            if i == target {
                child.push(vec![v]);
                child.push(c.iter().copied().filter(|&w| w != v).collect());
            } else {
                child.push(c.clone());
            }
        }
        refine(adj, &mut child);
        search(adj, child, best);
    }
}

fn check_order(n: usize) -> Result<()> {
    if n > MAX_CANON_ORDER {
        return Err(Error::Domain(format!(
            "canonical labelling supports n ≤ {MAX_CANON_ORDER}, got {n}"
        )));
    }
    Ok(())
}

/// Canonical labelling from adjacency masks (`adj[v]` bit `u` set iff `u ~ v`).
/// Returns the code and `order`, where `order[i]` is the vertex placed at
/// canonical position `i`.
pub fn canonical_code_masks(adj: &[u64]) -> Result<(u128, Vec<usize>)> {
    check_order(adj.len())?;
    let mut cells: Cells = vec![(0..adj.len()).collect()];
    refine(adj, &mut cells);
    let mut best = None;
    search(adj, cells, &mut best);
    Ok(best.expect("search visits at least one leaf"))
}

/// Complete isomorphism invariant for graphs of order ≤ 16: equal codes
/// (at equal order) iff isomorphic.
pub fn canonical_code(g: &Graph) -> Result<u128> {
    Ok(canonical_code_masks(&masks(g))?.0)
}

/// The canonical relabelling of `g`.
pub fn canonical_graph(g: &Graph) -> Result<Graph> {
    let (_, order) = canonical_code_masks(&masks(g))?;
    let mut perm = vec![0; g.n()];
    for (pos, &v) in order.iter().enumerate() {
        perm[v] = pos;
    }
    g.permuted(&perm)
}

/// Graph of order `n` whose upper triangle (graph6 bit order) is `code`.
pub fn graph_from_code(n: usize, code: u128) -> Result<Graph> {
    check_order(n)?;
    let total = n * n.saturating_sub(1) / 2;
    let mut edges = Vec::new();
    let mut bit = total;
    for j in 1..n {
        for i in 0..j {
            bit -= 1;
            if code >> bit & 1 == 1 {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Colour refinement on an arbitrary-order graph: iterated
/// (colour, sorted multiset of neighbour colours) relabelling. Colours are
/// assigned by sorting signatures, so they agree across isomorphic graphs.
fn colour_classes(g: &Graph, joint: Option<&Graph>) -> (Vec<usize>, Vec<usize>) {
    // Refine both graphs with one shared palette so colours are comparable.
    let graphs: Vec<&Graph> = std::iter::once(g).chain(joint).collect();
    let mut colours: Vec<Vec<usize>> = graphs.iter().map(|h| vec![0; h.n()]).collect();
    let mut classes = 1;
    loop {
        let mut sigs: Vec<(usize, Vec<usize>)> = Vec::new();
        let per: Vec<Vec<(usize, Vec<usize>)>> = graphs
            .iter()
            .zip(&colours)
            .map(|(h, col)| {
                (0..h.n())
                    .map(|v| {
                        let mut nb: Vec<usize> = h.neighbors(v).iter().map(|&w| col[w]).collect();
                        nb.sort_unstable();
                        (col[v], nb)
                    })
                    .collect()
            })
            .collect();
        for p in &per {
            sigs.extend(p.iter().cloned());
        }
        sigs.sort();
        sigs.dedup();
        let new: Vec<Vec<usize>> = per
            .iter()
            .map(|p| p.iter().map(|s| sigs.binary_search(s).expect("present")).collect())
            .collect();
        let stable = sigs.len() == classes;
        classes = sigs.len();
        colours = new;
        if stable {
            break;
        }
    }
    let second = colours.get(1).cloned().unwrap_or_default();
    (colours.swap_remove(0), second)
}

/// Isomorphism test by colour refinement followed by backtracking over
/// colour-respecting partial maps.
pub fn is_isomorphic(g: &Graph, h: &Graph) -> bool {
    if g.n() != h.n() || g.edge_count() != h.edge_count() {
        return false;
    }
    let mut dg = g.degrees();
    let mut dh = h.degrees();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return false;
    }
    let (cg, ch) = colour_classes(g, Some(h));
    let mut sg = cg.clone();
    let mut sh = ch.clone();
    sg.sort_unstable();
    sh.sort_unstable();
    if sg != sh {
        return false;
    }
    // Map g's vertices in order of rarest colour first.
    let mut freq = std::collections::HashMap::new();
    for &c in &cg {
        *freq.entry(c).or_insert(0usize) += 1;
    }
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| (freq[&cg[v]], cg[v], v));
    let mut map = vec![usize::MAX; g.n()];
    let mut used = vec![false; h.n()];
    #[allow(clippy::too_many_arguments)]
    fn go(
        i: usize,
        order: &[usize],
        g: &Graph,
        h: &Graph,
        cg: &[usize],
        ch: &[usize],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if i == order.len() {
            return true;
        }
        let v = order[i];
        for w in 0..h.n() {
            if used[w] || ch[w] != cg[v] {
                continue;
            }
            let consistent = order[..i]
                .iter()
                .all(|&u| g.has_edge(u, v) == h.has_edge(map[u], w));
            if !consistent {
                continue;
            }
            map[v] = w;
            used[w] = true;
            if go(i + 1, order, g, h, cg, ch, map, used) {
                return true;
            }
            used[w] = false;
        }
        map[v] = usize::MAX;
        false
    }
    go(0, &order, g, h, &cg, &ch, &mut map, &mut used)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    e.push((u, v));
                }
            }
        }
        Graph::from_edges(n, e).unwrap()
    }

    fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            p.swap(i, rng.gen_range(0..=i));
        }
        p
    }

    #[test]
    fn code_is_relabelling_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(1..=8);
            let g = random_graph(&mut rng, n, 0.4);
            let h = g.permuted(&random_perm(&mut rng, n)).unwrap();
            assert_eq!(canonical_code(&g).unwrap(), canonical_code(&h).unwrap());
            assert!(is_isomorphic(&g, &h));
            let c = canonical_graph(&g).unwrap();
            assert_eq!(canonical_code(&c).unwrap(), canonical_code(&g).unwrap());
            assert_eq!(graph_from_code(n, canonical_code(&g).unwrap()).unwrap(), c);
        }
    }

    #[test]
    fn counts_isomorphism_classes_on_five_vertices() {
        // 34 unlabeled graphs on 5 vertices.
        let mut codes = std::collections::HashSet::new();
        let pairs: Vec<(usize, usize)> = (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v))).collect();
        for mask in 0u32..1 << pairs.len() {
            let g = Graph::from_edges(5, pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e)).unwrap();
            codes.insert(canonical_code(&g).unwrap());
        }
        assert_eq!(codes.len(), 34);
    }

    #[test]
    fn distinguishes_non_isomorphic() {
        let c6 = make_cycle(6).unwrap();
        let two_c3 = disjoint_union(&make_cycle(3).unwrap(), &make_cycle(3).unwrap());
        assert_ne!(canonical_code(&c6).unwrap(), canonical_code(&two_c3).unwrap());
        assert!(!is_isomorphic(&c6, &two_c3));
        assert!(!is_isomorphic(&make_s(10, 2).unwrap(), &make_s_plus(10, 2).unwrap()));
    }

    #[test]
    fn large_symmetric_isomorphism() {
        let g = make_s(40, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = g.permuted(&random_perm(&mut rng, 40)).unwrap();
        assert!(is_isomorphic(&g, &h));
        assert!(canonical_code(&g).is_err());
    }
}
