//! Exhaustive Ramsey oracle for tiny targets, with certificates.

use std::fmt::Write as _;

use crate::coloring::{field, header_fields};
use crate::error::{Error, Result};
use crate::graph::{for_each_subset, parse_indices, Hypergraph};

/// A `q`-coloring of all `k`-subsets of `[0, n)`, indexed by colex rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KColoring {
    pub n: usize,
    pub k: usize,
    pub colors: Vec<u8>,
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Colex rank of a sorted subset.
pub fn subset_rank(sorted: &[usize]) -> usize {
    sorted.iter().enumerate().map(|(i, &c)| binom(c, i + 1)).sum()
}

impl KColoring {
    pub fn uniform(n: usize, k: usize, color: u8) -> Self {
        KColoring { n, k, colors: vec![color; binom(n, k)] }
    }

    pub fn color(&self, set: &[usize]) -> u8 {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        self.colors[subset_rank(&sorted)]
    }

    /// Edge list with a color column, in the hypergraph file layout.
    pub fn to_text(&self) -> String {
        let mut out = format!("hypergraph n={} k={} e={}\n", self.n, self.k, self.colors.len());
        for_each_subset(self.n, self.k, |s| {
            for x in s {
                let _ = write!(out, "{x} ");
            }
            let _ = writeln!(out, "{}", self.colors[subset_rank(s)]);
        });
        out
    }

    fn from_lines<'a>(header: (usize, &str), lines: impl Iterator<Item = (usize, &'a str)>) -> Result<Self> {
        let f = header_fields(header.1, "hypergraph", header.0)?;
        let n: usize = field(&f, "n", header.0)?;
        let k: usize = field(&f, "k", header.0)?;
        let e: usize = field(&f, "e", header.0)?;
        if e != binom(n, k) {
            return Err(Error::parse(header.0, "a coloring must list every k-subset"));
        }
        let mut colors = vec![u8::MAX; e];
        for (no, line) in lines {
            let nums = parse_indices(line, no)?;
            if nums.len() != k + 1 {
                return Err(Error::parse(no, format!("expected {k} indices and a color")));
            }
            let set = &nums[..k];
            if set.windows(2).any(|w| w[0] >= w[1]) || set.last().is_some_and(|&v| v >= n) {
                return Err(Error::parse(no, "indices must be increasing within [0, n)"));
            }
            colors[subset_rank(set)] = u8::try_from(nums[k]).map_err(|_| Error::parse(no, "color too large"))?;
        }
        if colors.contains(&u8::MAX) {
            return Err(Error::parse(header.0, "coloring is missing subsets"));
        }
        Ok(KColoring { n, k, colors })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CopySearch {
    /// Vertex-by-vertex injection with early edge checks.
    Backtrack,
    /// Every injection checked in full.
    Enumerate,
}

/// A monochromatic copy of `h`: the color and the image of each vertex.
pub fn find_mono_copy(h: &Hypergraph, c: &KColoring, q: u8, method: CopySearch) -> Option<(u8, Vec<usize>)> {
    if h.k() != c.k || h.n() > c.n {
        return None;
    }
    (0..q).find_map(|color| {
        let mut map = vec![usize::MAX; h.n()];
        let mut used = vec![false; c.n];
        let found = match method {
            CopySearch::Backtrack => backtrack(h, c, color, 0, &mut map, &mut used),
            CopySearch::Enumerate => enumerate(h, c, color, 0, &mut map, &mut used),
        };
        found.then_some((color, map))
    })
}

fn edge_ok(h_edge: &[usize], c: &KColoring, color: u8, map: &[usize]) -> bool {
    let image: Vec<usize> = h_edge.iter().map(|&v| map[v]).collect();
    c.color(&image) == color
}

fn backtrack(h: &Hypergraph, c: &KColoring, color: u8, v: usize, map: &mut [usize], used: &mut [bool]) -> bool {
    if v == h.n() {
        return true;
    }
    for target in 0..c.n {
        if used[target] {
            continue;
        }
        map[v] = target;
        let closes_ok = h
            .edges()
            .iter()
            .filter(|e| *e.iter().max().expect("nonempty") == v)
            .all(|e| edge_ok(e, c, color, map));
        if closes_ok {
            used[target] = true;
            if backtrack(h, c, color, v + 1, map, used) {
                return true;
            }
            used[target] = false;
        }
    }
    map[v] = usize::MAX;
    false
}

fn enumerate(h: &Hypergraph, c: &KColoring, color: u8, v: usize, map: &mut [usize], used: &mut [bool]) -> bool {
    if v == h.n() {
        return h.edges().iter().all(|e| edge_ok(e, c, color, map));
    }
    for target in 0..c.n {
        if used[target] {
            continue;
        }
        used[target] = true;
        map[v] = target;
        let hit = enumerate(h, c, color, v + 1, map, used);
        used[target] = false;
        if hit {
            return true;
        }
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RamseyOutcome {
    /// Every coloring at `n` has a monochromatic copy; `witness` avoids one
    /// at `n - 1`.
    Value { n: usize, witness: KColoring, colorings_checked: u64 },
    /// Some coloring at every size up to `n_max` avoids a copy.
    LowerBound { witness: KColoring },
    /// The enumeration budget ran out at `reached`.
    Exhausted { reached: usize, witness: Option<KColoring> },
}

/// Smallest `N <= n_max` such that every `q`-coloring of the complete
/// k-graph on `N` vertices contains `h` monochromatically.
pub fn ramsey_oracle(h: &Hypergraph, q: u8, n_max: usize, budget: u64, method: CopySearch) -> Result<RamseyOutcome> {
    if q == 0 {
        return Err(Error::domain("need at least one color"));
    }
    let k = h.k();
    let mut witness: Option<KColoring> = None;
    for n in 1..=n_max {
        let edges = binom(n, k);
        if n < h.n() {
            witness = Some(KColoring::uniform(n, k, 0));
            continue;
        }
        let total = (q as u64).checked_pow(edges as u32).filter(|&t| t <= budget);
        let Some(total) = total else {
            return Ok(RamseyOutcome::Exhausted { reached: n, witness });
        };
        let mut coloring = KColoring::uniform(n, k, 0);
        let mut avoid = None;
        for _ in 0..total {
            if find_mono_copy(h, &coloring, q, method).is_none() {
                avoid = Some(coloring.clone());
                break;
            }
            // base-q increment
            for slot in coloring.colors.iter_mut() {
                *slot += 1;
                if *slot < q {
                    break;
                }
                *slot = 0;
            }
        }
        match avoid {
            Some(c) => witness = Some(c),
            None => {
                let witness = witness.unwrap_or_else(|| KColoring::uniform(n - 1, k, 0));
                return Ok(RamseyOutcome::Value { n, witness, colorings_checked: total });
            }
        }
    }
    Ok(RamseyOutcome::LowerBound {
        witness: witness.unwrap_or_else(|| KColoring::uniform(0, k, 0)),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// A coloring on `n` vertices with no monochromatic copy.
    LowerBound { target: String, q: u8, coloring: KColoring },
    /// All `q^C(n,k)` colorings on `n` vertices were checked.
    Exhausted { target: String, k: usize, q: u8, n: usize, colorings: u64 },
}

impl Certificate {
    pub fn to_text(&self) -> String {
        match self {
            Certificate::LowerBound { target, q, coloring } => format!(
                "certificate target={target} k={} q={q} n={} kind=lower-bound\n{}",
                coloring.k,
                coloring.n,
                coloring.to_text()
            ),
            Certificate::Exhausted { target, k, q, n, colorings } => format!(
                "certificate target={target} k={k} q={q} n={n} kind=upper-bound colorings={colorings}\nexhausted full\n"
            ),
        }
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.trim().is_empty());
        let (no, header) = lines.next().ok_or_else(|| Error::parse(1, "empty certificate"))?;
        let f = header_fields(header, "certificate", no)?;
        let target: String = field(&f, "target", no)?;
        let k: usize = field(&f, "k", no)?;
        let q: u8 = field(&f, "q", no)?;
        let n: usize = field(&f, "n", no)?;
        let kind: String = field(&f, "kind", no)?;
        match kind.as_str() {
            "lower-bound" => {
                let hdr = lines.next().ok_or_else(|| Error::parse(no, "missing coloring"))?;
                let coloring = KColoring::from_lines(hdr, lines)?;
                if coloring.n != n || coloring.k != k {
                    return Err(Error::parse(no, "coloring does not match the parameters line"));
                }
                Ok(Certificate::LowerBound { target, q, coloring })
            }
            "upper-bound" => {
                let colorings: u64 = field(&f, "colorings", no)?;
                match lines.next() {
                    Some((_, "exhausted full")) => Ok(Certificate::Exhausted { target, k, q, n, colorings }),
                    _ => Err(Error::parse(no + 1, "expected `exhausted full`")),
                }
            }
            other => Err(Error::parse(no, format!("unknown certificate kind {other:?}"))),
        }
    }

    /// Rechecks the certificate against `h` with the given copy search.
    pub fn verify(&self, h: &Hypergraph, method: CopySearch) -> bool {
        match self {
            Certificate::LowerBound { q, coloring, .. } => find_mono_copy(h, coloring, *q, method).is_none(),
            Certificate::Exhausted { q, n, .. } => {
                let budget = (*q as u64).saturating_pow(binom(*n, h.k()) as u32);
                match ramsey_oracle(h, *q, *n, budget, method) {
                    Ok(RamseyOutcome::Value { n: value, .. }) => value <= *n,
                    _ => false,
                }
            }
        }
    }
}

/// Named small targets: `K<t>` (complete graph), `P<t>` (path on t vertices),
/// `E<k>` (a single k-edge).
pub fn named_target(name: &str) -> Result<Hypergraph> {
    let (kind, num) = name.split_at(1);
    let t: usize = num.parse().map_err(|_| Error::domain(format!("unknown target {name:?}")))?;
    match kind {
        "K" if t >= 2 => Ok(Hypergraph::complete(t, 2)),
        "P" if t >= 2 => Hypergraph::from_edges(t, 2, (0..t - 1).map(|i| vec![i, i + 1])),
        "E" if t >= 1 => Hypergraph::from_edges(t, t, [(0..t).collect()]),
        _ => Err(Error::domain(format!("unknown target {name:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge_needs_two_vertices() {
        let h = named_target("E2").unwrap();
        match ramsey_oracle(&h, 2, 4, 1 << 20, CopySearch::Backtrack).unwrap() {
            RamseyOutcome::Value { n, .. } => assert_eq!(n, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn path_agrees_across_searches() {
        let h = named_target("P3").unwrap();
        let a = ramsey_oracle(&h, 2, 5, 1 << 20, CopySearch::Backtrack).unwrap();
        let b = ramsey_oracle(&h, 2, 5, 1 << 20, CopySearch::Enumerate).unwrap();
        assert_eq!(a, b);
        // P3 is a cherry: two colors on K_3 always share a vertex in one color.
        assert!(matches!(a, RamseyOutcome::Value { n: 3, .. }));
    }

    #[test]
    fn certificate_round_trip() {
        let c = Certificate::LowerBound { target: "K3".into(), q: 2, coloring: KColoring::uniform(3, 2, 1) };
        assert_eq!(Certificate::from_text(&c.to_text()).unwrap(), c);
        let u = Certificate::Exhausted { target: "K3".into(), k: 2, q: 2, n: 6, colorings: 32768 };
        assert_eq!(Certificate::from_text(&u.to_text()).unwrap(), u);
    }
}
