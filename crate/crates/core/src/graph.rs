//! Simple graphs and k-uniform hypergraphs with their text formats.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coloring::{field, header_fields};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    /// Sorted, `u < v`, no duplicates.
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { n, edges: Vec::new() }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph { n, edges }
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::domain("cycle needs at least 3 vertices"));
        }
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    /// `G(n, p)`: each pair independently with probability `p`.
    pub fn gnp(n: usize, p: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain(format!("edge probability {p} outside [0, 1]")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|_| rng.gen_bool(p))
            .collect();
        Ok(Graph { n, edges })
    }

    /// Canonicalizes and validates an edge list.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::domain(format!("loop at vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::domain(format!("edge ({u}, {v}) outside [0, {n})")));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(Error::domain(format!("repeated edge ({u}, {v})")));
            }
        }
        Ok(Graph { n, edges: set.into_iter().collect() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    /// Sorted neighbor lists.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// `Some(d)` when every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        let deg = self.degrees();
        let d = *deg.first()?;
        deg.iter().all(|&x| x == d).then_some(d)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }

    /// Number of edges with one end in `a` and the other in `b`; a pair inside
    /// `a ∩ b` counts twice, matching the ordered-pair convention.
    pub fn edges_between(&self, a: &[bool], b: &[bool]) -> usize {
        self.edges
            .iter()
            .map(|&(u, v)| (a[u] && b[v]) as usize + (a[v] && b[u]) as usize)
            .sum()
    }

    /// Same graph with vertex `i` renamed `labels[i]` on `n` vertices.
    pub fn relabel(&self, n: usize, labels: &[usize]) -> Result<Graph> {
        if labels.len() != self.n {
            return Err(Error::domain("label table does not cover the graph"));
        }
        Graph::from_edges(n, self.edges.iter().map(|&(u, v)| (labels[u], labels[v])))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("graph n={} e={}\n", self.n, self.edges.len());
        for (u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty graph file"))?;
        let fields = header_fields(header, "graph", 1)?;
        let n: usize = field(&fields, "n", 1)?;
        let e: usize = field(&fields, "e", 1)?;
        let mut edges = Vec::with_capacity(e);
        for (idx, line) in lines {
            let nums = parse_indices(line, idx + 1)?;
            if nums.len() != 2 {
                return Err(Error::parse(idx + 1, "edge line needs exactly two indices"));
            }
            if nums[0] >= nums[1] {
                return Err(Error::parse(idx + 1, "edge must be written u < v"));
            }
            edges.push((nums[0], nums[1]));
        }
        if edges.len() != e {
            return Err(Error::parse(1, format!("header says e={e} but {} edges follow", edges.len())));
        }
        Graph::from_edges(n, edges).map_err(|err| Error::parse(1, err.to_string()))
    }
}

pub(crate) fn parse_indices(line: &str, line_no: usize) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::parse(line_no, format!("bad index {t:?}"))))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    k: usize,
    /// Each edge sorted; the list sorted and free of duplicates.
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    pub fn empty(n: usize, k: usize) -> Self {
        Hypergraph { n, k, edges: Vec::new() }
    }

    pub fn from_edges(n: usize, k: usize, edges: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for mut e in edges {
            if e.len() != k {
                return Err(Error::domain(format!("edge {e:?} does not have {k} vertices")));
            }
            e.sort_unstable();
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::domain(format!("edge {e:?} repeats a vertex")));
            }
            if e.last().is_some_and(|&v| v >= n) {
                return Err(Error::domain(format!("edge {e:?} outside [0, {n})")));
            }
            set.insert(e);
        }
        Ok(Hypergraph { n, k, edges: set.into_iter().collect() })
    }

    /// All `k`-subsets of `[0, n)`.
    pub fn complete(n: usize, k: usize) -> Self {
        let mut edges = Vec::new();
        for_each_subset(n, k, |s| edges.push(s.to_vec()));
        Hypergraph { n, k, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_edge(&self, e: &[usize]) -> bool {
        let mut sorted = e.to_vec();
        sorted.sort_unstable();
        self.edges.binary_search(&sorted).is_ok()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            for &v in e {
                deg[v] += 1;
            }
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Edge union of two hypergraphs on the same vertex set.
    pub fn union(&self, other: &Hypergraph) -> Result<Hypergraph> {
        if self.n != other.n || self.k != other.k {
            return Err(Error::domain("union needs matching vertex count and uniformity"));
        }
        let set: BTreeSet<Vec<usize>> = self.edges.iter().chain(&other.edges).cloned().collect();
        Ok(Hypergraph { n: self.n, k: self.k, edges: set.into_iter().collect() })
    }

    /// Edges with every vertex inside `keep`.
    pub fn induced(&self, keep: &[bool]) -> Hypergraph {
        Hypergraph {
            n: self.n,
            k: self.k,
            edges: self.edges.iter().filter(|e| e.iter().all(|&v| keep[v])).cloned().collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("hypergraph n={} k={} e={}\n", self.n, self.k, self.edges.len());
        for e in &self.edges {
            out.push_str(&join(e));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty hypergraph file"))?;
        let fields = header_fields(header, "hypergraph", 1)?;
        let n: usize = field(&fields, "n", 1)?;
        let k: usize = field(&fields, "k", 1)?;
        let e: usize = field(&fields, "e", 1)?;
        let mut edges = Vec::with_capacity(e);
        for (idx, line) in lines {
            let nums = parse_indices(line, idx + 1)?;
            if nums.len() != k {
                return Err(Error::parse(idx + 1, format!("edge needs {k} indices")));
            }
            if nums.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::parse(idx + 1, "edge indices must be strictly increasing"));
            }
            edges.push(nums);
        }
        if edges.len() != e {
            return Err(Error::parse(1, format!("header says e={e} but {} edges follow", edges.len())));
        }
        Hypergraph::from_edges(n, k, edges).map_err(|err| Error::parse(1, err.to_string()))
    }
}

pub(crate) fn join(xs: &[usize]) -> String {
    let mut out = String::new();
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{x}");
    }
    out
}

/// Calls `f` on every sorted `k`-subset of `[0, n)` in lexicographic order.
pub fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip_is_byte_stable() {
        let g = Graph::from_edges(5, [(3, 1), (0, 4), (1, 2)]).unwrap();
        let text = g.to_text();
        assert_eq!(text, "graph n=5 e=3\n0 4\n1 2\n1 3\n");
        assert_eq!(Graph::from_text(&text).unwrap().to_text(), text);
    }

    #[test]
    fn graph_rejects_bad_input() {
        assert!(Graph::from_edges(3, [(1, 1)]).is_err());
        assert!(Graph::from_edges(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_text("graph n=3 e=1\n2 1\n").is_err());
        assert!(Graph::from_text("graph n=3 e=2\n0 1\n").is_err());
        match Graph::from_text("graph n=3 e=1\n0 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn hypergraph_round_trip() {
        let h = Hypergraph::from_edges(6, 3, [vec![5, 1, 2], vec![0, 1, 2]]).unwrap();
        let text = h.to_text();
        assert_eq!(text, "hypergraph n=6 k=3 e=2\n0 1 2\n1 2 5\n");
        assert_eq!(Hypergraph::from_text(&text).unwrap(), h);
        assert_eq!(h.max_degree(), 2);
    }

    #[test]
    fn subsets_enumerate_binomial_count() {
        let mut count = 0;
        for_each_subset(7, 3, |_| count += 1);
        assert_eq!(count, 35);
        assert_eq!(Hypergraph::complete(5, 3).edge_count(), 10);
    }
}
