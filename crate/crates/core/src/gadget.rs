//! The gadget `H^(k)(F)`: a k-edge for every connected (k-1)-subset of `F`
//! together with any further vertex.

use crate::error::{Error, Result};
use crate::graph::{Graph, Hypergraph};

/// Every connected `size`-subset of `g`, each sorted, each reported once.
///
/// Uses the extension-set enumeration: a subset is grown from its smallest
/// vertex, and a vertex joins the extension set only through the first member
/// that reaches it.
pub fn connected_subsets(g: &Graph, size: usize) -> Vec<Vec<usize>> {
    let adj = g.adjacency();
    let mut out = Vec::new();
    if size == 0 {
        return out;
    }
    let n = g.n();
    let mut in_sub = vec![false; n];
    let mut near = vec![0u32; n];
    for root in 0..n {
        let mut sub = vec![root];
        in_sub[root] = true;
        for &w in &adj[root] {
            near[w] += 1;
        }
        let ext: Vec<usize> = adj[root].iter().copied().filter(|&w| w > root).collect();
        extend(&adj, root, size, &mut sub, ext, &mut in_sub, &mut near, &mut out);
        for &w in &adj[root] {
            near[w] -= 1;
        }
        in_sub[root] = false;
    }
    for s in &mut out {
        s.sort_unstable();
    }
    out.sort();
    out
}

#[allow(clippy::too_many_arguments)]
fn extend(
    adj: &[Vec<usize>],
    root: usize,
    size: usize,
    sub: &mut Vec<usize>,
    mut ext: Vec<usize>,
    in_sub: &mut [bool],
    near: &mut [u32],
    out: &mut Vec<Vec<usize>>,
) {
    if sub.len() == size {
        out.push(sub.clone());
        return;
    }
    while let Some(w) = ext.pop() {
        // Exclusive neighbors of w: beyond the root, outside the subset and
        // not adjacent to it.
        let mut next = ext.clone();
        for &x in &adj[w] {
            if x > root && !in_sub[x] && near[x] == 0 && !next.contains(&x) {
                next.push(x);
            }
        }
        sub.push(w);
        in_sub[w] = true;
        for &x in &adj[w] {
            near[x] += 1;
        }
        extend(adj, root, size, sub, next, in_sub, near, out);
        for &x in &adj[w] {
            near[x] -= 1;
        }
        in_sub[w] = false;
        sub.pop();
    }
}

pub fn gadget(k: usize, f: &Graph) -> Result<Hypergraph> {
    if k < 2 {
        return Err(Error::domain("gadget needs k >= 2"));
    }
    if f.n() < k {
        return Err(Error::domain(format!("gadget needs |V(F)| >= k, got {} < {k}", f.n())));
    }
    let mut edges = Vec::new();
    for set in connected_subsets(f, k - 1) {
        for x in 0..f.n() {
            if set.binary_search(&x).is_err() {
                let mut e = set.clone();
                e.push(x);
                edges.push(e);
            }
        }
    }
    Hypergraph::from_edges(f.n(), k, edges)
}

/// Gadget of a graph family on a shared vertex set: the union over all
/// members.
pub fn gadget_family(k: usize, n: usize, family: &[Graph], supports: &[Vec<usize>]) -> Result<Hypergraph> {
    let mut edges = Vec::new();
    for (f, support) in family.iter().zip(supports) {
        let local = induced_on(f, support)?;
        if local.n() < k {
            continue;
        }
        for e in gadget(k, &local)?.edges() {
            edges.push(e.iter().map(|&v| support[v]).collect());
        }
    }
    Hypergraph::from_edges(n, k, edges)
}

/// `f[support]` relabeled to `[0, |support|)` in the order of `support`.
pub fn induced_on(f: &Graph, support: &[usize]) -> Result<Graph> {
    let mut pos = std::collections::HashMap::with_capacity(support.len());
    for (i, &v) in support.iter().enumerate() {
        pos.insert(v, i);
    }
    Graph::from_edges(
        support.len(),
        f.edges().iter().filter_map(|(u, v)| Some((*pos.get(u)?, *pos.get(v)?))),
    )
}

/// Per-vertex upper bound on the gadget degree: a vertex lies in an edge
/// either as a member of the connected set or as the extra vertex.
pub fn gadget_degree_bound(k: usize, f: &Graph) -> Vec<usize> {
    let sets = connected_subsets(f, k - 1);
    let n = f.n();
    let mut member = vec![0usize; n];
    for s in &sets {
        for &v in s {
            member[v] += 1;
        }
    }
    (0..n)
        .map(|v| member[v] * (n + 1 - k) + (sets.len() - member[v]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::for_each_subset;

    fn brute_connected(g: &Graph, size: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for_each_subset(g.n(), size, |s| {
            let keep: Vec<usize> = s.to_vec();
            if induced_on(g, &keep).unwrap().is_connected() {
                out.push(keep);
            }
        });
        out
    }

    #[test]
    fn k2_gives_complete_graph() {
        let f = Graph::from_edges(5, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(gadget(2, &f).unwrap().edge_count(), 10);
    }

    #[test]
    fn star_and_single_edge() {
        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let h = gadget(3, &star).unwrap();
        assert_eq!(h.edges(), &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3]]);
        let f = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(gadget(3, &f).unwrap().edges(), &[vec![0, 1, 2]]);
        assert!(gadget(3, &Graph::empty(2)).is_err());
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let g = Graph::from_edges(7, [(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (1, 5), (5, 6)]).unwrap();
        for size in 1..=7 {
            assert_eq!(connected_subsets(&g, size), brute_connected(&g, size), "size {size}");
        }
    }

    #[test]
    fn degree_bound_holds() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)]).unwrap();
        for k in 2..=4 {
            let h = gadget(k, &g).unwrap();
            let bound = gadget_degree_bound(k, &g);
            for (v, d) in h.degrees().into_iter().enumerate() {
                assert!(d <= bound[v]);
            }
        }
    }
}
