//! The partition family `G_m`, derived lower-uniformity hypergraphs,
//! `(alpha, m)`-goodness and the pruned binomial k-graph.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, Hypergraph};
use crate::params::ParamSet;
use crate::report::PropertyReport;

/// Largest graph for exact partition enumeration.
pub const EXACT_PARTITION_CAP: usize = 12;

/// Largest hypergraph for exact goodness enumeration.
pub const EXACT_GOODNESS_CAP: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    Exact,
    Sampled { trials: usize, seed: u64 },
}

/// Part-size cap `floor(n/m)` and part-count cap `M_2` for partitions of an
/// `n`-vertex graph.
fn partition_caps(n: usize, m: u64, params: &ParamSet) -> (usize, usize) {
    let e = (params.base_exponent_coeff * num_rational::Ratio::from_integer(m)).to_integer().max(1);
    let parts = if e >= 63 { usize::MAX } else { 1usize << e };
    (n / m as usize, parts)
}

/// Cross-pair mass of a partition given as a part label per vertex.
pub fn cross_mass(g: &Graph, labels: &[usize]) -> u64 {
    let parts = labels.iter().copied().max().map_or(0, |x| x + 1);
    let mut sizes = vec![0u64; parts];
    for &l in labels {
        sizes[l] += 1;
    }
    let mut linked = vec![false; parts * parts];
    for &(u, v) in g.edges() {
        let (a, b) = (labels[u], labels[v]);
        if a != b {
            linked[a.min(b) * parts + a.max(b)] = true;
        }
    }
    let mut mass = 0;
    for i in 0..parts {
        for j in i + 1..parts {
            if linked[i * parts + j] {
                mass += sizes[i] * sizes[j];
            }
        }
    }
    mass
}

/// `mass > threshold * C(n, 2)`, exactly.
fn above_threshold(mass: u64, n: usize, params: &ParamSet) -> bool {
    let pairs = (n * n.saturating_sub(1) / 2) as u128;
    let t = params.partition_threshold;
    mass as u128 * *t.denom() as u128 > *t.numer() as u128 * pairs
}

pub fn gm_member(g: &Graph, m: u64, params: &ParamSet, mode: CheckMode) -> PropertyReport {
    let mut report = PropertyReport::new("gm-membership");
    let n = g.n();
    let (size_cap, part_cap) = partition_caps(n, m.max(1), params);
    report
        .record("n", n)
        .record("m", m)
        .record("edges", g.edge_count())
        .record("part_size_cap", size_cap)
        .record("part_count_cap", if part_cap == usize::MAX { "unbounded".to_string() } else { part_cap.to_string() })
        .record("threshold", params.partition_threshold);
    if m == 0 {
        report.fail("m must be positive");
        return report;
    }
    if size_cap == 0 || n.div_ceil(size_cap.max(1)) > part_cap {
        report.record("valid_partitions", 0);
        report.record("member", true);
        return report;
    }
    match mode {
        CheckMode::Exact => {
            report.record("mode", "exact");
            if n > EXACT_PARTITION_CAP {
                report.fail(format!("exact mode needs n <= {EXACT_PARTITION_CAP}, got {n}"));
                return report;
            }
            let mut labels = vec![0usize; n];
            let mut sizes = vec![0usize; n.max(1)];
            let mut visited = 0u64;
            let mut min_mass = u64::MAX;
            let mut witness = None;
            rgs(0, 0, size_cap, part_cap, &mut labels, &mut sizes, &mut |labels| {
                visited += 1;
                let mass = cross_mass(g, labels);
                min_mass = min_mass.min(mass);
                if !above_threshold(mass, n, params) {
                    witness = Some((labels.to_vec(), mass));
                    return false;
                }
                true
            });
            report.record("partitions_visited", visited).record("min_mass", min_mass);
            finish(&mut report, witness);
        }
        CheckMode::Sampled { trials, seed } => {
            report.record("mode", "sampled").record("trials", trials).record("seed", seed);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut candidates = adversarial_partitions(g, size_cap, part_cap);
            for _ in 0..trials {
                if let Some(p) = balanced_random(n, size_cap, part_cap, &mut rng) {
                    candidates.push(p);
                }
            }
            let mut min_mass = u64::MAX;
            let mut witness = None;
            for labels in &candidates {
                let mass = cross_mass(g, labels);
                min_mass = min_mass.min(mass);
                if witness.is_none() && !above_threshold(mass, n, params) {
                    witness = Some((labels.clone(), mass));
                }
            }
            report.record("partitions_tested", candidates.len()).record("min_mass", min_mass);
            finish(&mut report, witness);
            report.definitive = report.status != crate::report::Status::Pass;
        }
    }
    report
}

fn finish(report: &mut PropertyReport, witness: Option<(Vec<usize>, u64)>) {
    match witness {
        Some((labels, mass)) => {
            report.record("member", false);
            report.fail(format!("partition {labels:?} has cross-pair mass {mass}"));
        }
        None => {
            report.record("member", true);
        }
    }
}

/// Restricted growth strings with part-size and part-count caps; the visitor
/// returns `false` to stop.
#[allow(clippy::too_many_arguments)]
fn rgs(
    pos: usize,
    used: usize,
    size_cap: usize,
    part_cap: usize,
    labels: &mut [usize],
    sizes: &mut [usize],
    visit: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    if pos == labels.len() {
        return visit(labels);
    }
    let limit = (used + 1).min(part_cap);
    for part in 0..limit {
        if sizes[part] == size_cap {
            continue;
        }
        labels[pos] = part;
        sizes[part] += 1;
        let more = rgs(pos + 1, used.max(part + 1), size_cap, part_cap, labels, sizes, visit);
        sizes[part] -= 1;
        if !more {
            return false;
        }
    }
    true
}

fn balanced_random(n: usize, size_cap: usize, part_cap: usize, rng: &mut ChaCha8Rng) -> Option<Vec<usize>> {
    let lo = n.div_ceil(size_cap);
    let hi = part_cap.min(n);
    if lo > hi {
        return None;
    }
    let q = rng.gen_range(lo..=hi);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut labels = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        labels[v] = i % q;
    }
    Some(labels)
}

/// Partitions that keep adjacent vertices together: breadth-first clusters,
/// degree-sorted chunks, and a local-search refinement of the clusters.
fn adversarial_partitions(g: &Graph, size_cap: usize, part_cap: usize) -> Vec<Vec<usize>> {
    let n = g.n();
    let adj = g.adjacency();
    let mut out = Vec::new();

    let mut labels = vec![usize::MAX; n];
    let mut part = 0;
    let mut fill = 0;
    for start in 0..n {
        if labels[start] != usize::MAX {
            continue;
        }
        let mut queue = std::collections::VecDeque::from([start]);
        labels[start] = part;
        fill += 1;
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if labels[w] == usize::MAX {
                    if fill == size_cap {
                        part += 1;
                        fill = 0;
                    }
                    labels[w] = part;
                    fill += 1;
                    queue.push_back(w);
                }
            }
        }
        if fill == size_cap {
            part += 1;
            fill = 0;
        }
    }
    let clusters = compact(labels);
    if parts_of(&clusters) <= part_cap {
        out.push(local_search(g, clusters.clone(), size_cap, part_cap));
        out.push(clusters);
    }

    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| (adj[v].len(), v));
    let mut chunks = vec![0; n];
    for (i, &v) in by_degree.iter().enumerate() {
        chunks[v] = i / size_cap;
    }
    if parts_of(&chunks) <= part_cap {
        out.push(chunks);
    }
    out
}

fn parts_of(labels: &[usize]) -> usize {
    labels.iter().copied().max().map_or(0, |x| x + 1)
}

fn compact(labels: Vec<usize>) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    labels
        .into_iter()
        .map(|l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect()
}

/// Greedy single-vertex moves that lower the cross-pair mass.
fn local_search(g: &Graph, mut labels: Vec<usize>, size_cap: usize, part_cap: usize) -> Vec<usize> {
    let n = g.n();
    let mut best = cross_mass(g, &labels);
    for _ in 0..4 {
        let mut improved = false;
        for v in 0..n {
            let parts = parts_of(&labels);
            let mut sizes = vec![0; parts + 1];
            for &l in &labels {
                sizes[l] += 1;
            }
            let original = labels[v];
            for target in 0..=parts.min(part_cap - 1) {
                if target == original || sizes[target] >= size_cap {
                    continue;
                }
                labels[v] = target;
                let relabeled = compact(labels.clone());
                let mass = cross_mass(g, &relabeled);
                if mass < best && parts_of(&relabeled) <= part_cap {
                    best = mass;
                    labels = relabeled;
                    improved = true;
                    break;
                }
                labels[v] = original;
            }
        }
        if !improved {
            break;
        }
    }
    labels
}

/// `H(U; W_1, .., W_r)`: the `(k - r)`-sets of `U` completed to an edge of `H`
/// by one vertex from each `W_i`, relabeled by position in sorted `U`.
pub fn derived_hypergraph(h: &Hypergraph, u: &[usize], ws: &[Vec<usize>]) -> Result<Hypergraph> {
    let k = h.k();
    let r = ws.len();
    if r == 0 || r + 2 > k {
        return Err(Error::domain(format!("need 1 <= r <= k - 2, got r = {r}, k = {k}")));
    }
    // 0 = outside, 1 = U, 2 + i = W_i
    let mut role = vec![0usize; h.n()];
    for (tag, set) in std::iter::once(u).chain(ws.iter().map(|w| w.as_slice())).enumerate() {
        for &v in set {
            if v >= h.n() {
                return Err(Error::domain(format!("vertex {v} outside the hypergraph")));
            }
            if role[v] != 0 {
                return Err(Error::domain(format!("vertex {v} lies in two of the sets")));
            }
            role[v] = tag + 1;
        }
    }
    let mut sorted_u = u.to_vec();
    sorted_u.sort_unstable();
    let mut pos = vec![usize::MAX; h.n()];
    for (i, &v) in sorted_u.iter().enumerate() {
        pos[v] = i;
    }
    let mut edges = Vec::new();
    let mut seen = vec![0usize; r];
    for e in h.edges() {
        seen.iter_mut().for_each(|x| *x = 0);
        let mut inside = Vec::with_capacity(k - r);
        let mut ok = true;
        for &v in e {
            match role[v] {
                0 => ok = false,
                1 => inside.push(pos[v]),
                t => seen[t - 2] += 1,
            }
        }
        if ok && inside.len() == k - r && seen.iter().all(|&c| c == 1) {
            edges.push(inside);
        }
    }
    Hypergraph::from_edges(sorted_u.len(), k - r, edges)
}

fn as_graph(h: &Hypergraph) -> Graph {
    Graph::from_edges(h.n(), h.edges().iter().map(|e| (e[0], e[1]))).expect("2-uniform hypergraph")
}

/// Derived graph for a choice of disjoint sets; for `k = 2` this is `H[U]`.
fn derived_graph(h: &Hypergraph, u: &[usize], ws: &[Vec<usize>]) -> Result<Graph> {
    if h.k() == 2 {
        let mut sorted = u.to_vec();
        sorted.sort_unstable();
        let g = Graph::from_edges(h.n(), h.edges().iter().map(|e| (e[0], e[1])))?;
        return crate::gadget::induced_on(&g, &sorted);
    }
    let derived = derived_hypergraph(h, u, ws)?;
    if derived.k() != 2 {
        return Err(Error::domain(format!("derived hypergraph is {}-uniform", derived.k())));
    }
    Ok(as_graph(&derived))
}

pub fn is_alpha_m_good(h: &Hypergraph, alpha: f64, m: u64, params: &ParamSet, mode: CheckMode) -> PropertyReport {
    is_good_inner(h, alpha, m, params, mode, true)
}

fn is_good_inner(
    h: &Hypergraph,
    alpha: f64,
    m: u64,
    params: &ParamSet,
    mode: CheckMode,
    heredity: bool,
) -> PropertyReport {
    let mut report = PropertyReport::new("alpha-m-goodness");
    let n = h.n();
    let k = h.k();
    let r = k.saturating_sub(2);
    let min = ((alpha * n as f64).ceil() as usize).max(1);
    report.record("n", n).record("k", k).record("alpha", alpha).record("m", m).record("min_set_size", min);
    if k < 2 {
        report.fail("goodness needs k >= 2");
        return report;
    }
    if min * (r + 1) > n {
        report.record("qualifying_choices", 0);
        return report;
    }
    let mut checked = 0u64;
    let mut check = |u: &[usize], ws: &[Vec<usize>], report: &mut PropertyReport, sub_mode: CheckMode| -> bool {
        checked += 1;
        let g = match derived_graph(h, u, ws) {
            Ok(g) => g,
            Err(e) => {
                report.fail(format!("derived graph: {e}"));
                return false;
            }
        };
        let sub = gm_member(&g, m, params, sub_mode);
        if !sub.passed() {
            report.fail(format!("U = {u:?}, W = {ws:?}: {}", sub.counterexample.unwrap_or_default()));
            return false;
        }
        true
    };
    match mode {
        CheckMode::Exact => {
            report.record("mode", "exact");
            if n > EXACT_GOODNESS_CAP {
                report.fail(format!("exact mode needs n <= {EXACT_GOODNESS_CAP}, got {n}"));
                return report;
            }
            // Role per vertex: 0 = unused, 1 = U, 2.. = W_i.
            let roles = r + 2;
            let total = (roles as u64).pow(n as u32);
            let mut role = vec![0usize; n];
            for code in 0..total {
                let mut c = code;
                for slot in role.iter_mut() {
                    *slot = (c % roles as u64) as usize;
                    c /= roles as u64;
                }
                let u: Vec<usize> = (0..n).filter(|&v| role[v] == 1).collect();
                let ws: Vec<Vec<usize>> = (0..r).map(|i| (0..n).filter(|&v| role[v] == i + 2).collect()).collect();
                if u.len() < min || ws.iter().any(|w| w.len() < min) {
                    continue;
                }
                if !check(&u, &ws, &mut report, CheckMode::Exact) {
                    break;
                }
            }
        }
        CheckMode::Sampled { trials, seed } => {
            report.record("mode", "sampled").record("trials", trials).record("seed", seed);
            report.definitive = false;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut order: Vec<usize> = (0..n).collect();
            for t in 0..trials {
                order.shuffle(&mut rng);
                let mut sizes = vec![min; r + 1];
                let mut spare = n - min * (r + 1);
                for size in sizes.iter_mut() {
                    let extra = rng.gen_range(0..=spare);
                    *size += extra;
                    spare -= extra;
                }
                sizes.shuffle(&mut rng);
                let mut at = 0;
                let mut take = |len: usize| {
                    let part = order[at..at + len].to_vec();
                    at += len;
                    part
                };
                let u = take(sizes[0]);
                let ws: Vec<Vec<usize>> = sizes[1..].iter().map(|&s| take(s)).collect();
                let sub_mode = if u.len() <= EXACT_PARTITION_CAP {
                    CheckMode::Exact
                } else {
                    CheckMode::Sampled { trials: 20, seed: seed.wrapping_add(t as u64) }
                };
                if !check(&u, &ws, &mut report, sub_mode) {
                    break;
                }
            }
            if heredity && report.passed() && n >= 2 {
                audit_heredity(h, alpha, m, params, &mut rng, &mut report);
            }
        }
    }
    report.record("choices_checked", checked);
    report
}

/// Samples one large `U` and checks `H[U]` for `(alpha n / |U|, m)`-goodness.
fn audit_heredity(
    h: &Hypergraph,
    alpha: f64,
    m: u64,
    params: &ParamSet,
    rng: &mut ChaCha8Rng,
    report: &mut PropertyReport,
) {
    let n = h.n();
    let size = rng.gen_range(n.div_ceil(2)..=n);
    let alpha_sub = alpha * n as f64 / size as f64;
    if alpha_sub > 1.0 {
        return;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut keep = order[..size].to_vec();
    keep.sort_unstable();
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in keep.iter().enumerate() {
        pos[v] = i;
    }
    let edges = h
        .edges()
        .iter()
        .filter(|e| e.iter().all(|&v| pos[v] != usize::MAX))
        .map(|e| e.iter().map(|&v| pos[v]).collect());
    let Ok(sub) = Hypergraph::from_edges(size, h.k(), edges) else {
        return;
    };
    let sub_report = is_good_inner(
        &sub,
        alpha_sub,
        m,
        params,
        CheckMode::Sampled { trials: 5, seed: rng.gen() },
        false,
    );
    report.record("heredity.size", size).record("heredity.alpha", format!("{alpha_sub:.6}"));
    report.absorb("heredity", &sub_report);
}

/// The pruned binomial k-graph together with its generation numbers.
#[derive(Clone, Debug)]
pub struct GoodKGraph {
    pub hypergraph: Hypergraph,
    pub c: f64,
    pub p: f64,
    pub resamples: usize,
    pub sampled_edges: usize,
    pub edge_limit: f64,
    pub degree_bound: f64,
}

/// Resamples allowed when the edge count exceeds `C m N / (4k)`.
pub const RESAMPLE_CAP: usize = 100;

pub fn kgraph_probability(c: f64, m: u64, n_big: usize, k: usize) -> f64 {
    c * m as f64 / (4.0 * (n_big as f64).powi(k as i32 - 1))
}

pub fn gen_good_kgraph(n: usize, k: usize, m: u64, alpha: f64, params: &ParamSet, seed: u64) -> Result<GoodKGraph> {
    if k < 2 {
        return Err(Error::domain("k must be at least 2"));
    }
    let c = params.goodness_c(alpha);
    if (n as f64) < c * m as f64 {
        return Err(Error::infeasible(format!("need n >= C m, got n = {n}, C = {c}, m = {m}")));
    }
    let big = 2 * n;
    let p = kgraph_probability(c, m, big, k);
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::infeasible(format!("edge probability p = {p} outside (0, 1]")));
    }
    let edge_limit = c * m as f64 * big as f64 / (4.0 * k as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for resamples in 0..RESAMPLE_CAP {
        let edges = binomial_kgraph(big, k, p, &mut rng);
        if edges.len() as f64 > edge_limit {
            continue;
        }
        let sampled_edges = edges.len();
        let full = Hypergraph::from_edges(big, k, edges)?;
        let deg = full.degrees();
        let mut by_degree: Vec<usize> = (0..big).collect();
        by_degree.sort_by_key(|&v| (std::cmp::Reverse(deg[v]), v));
        let mut keep = vec![false; big];
        for &v in &by_degree[n..] {
            keep[v] = true;
        }
        let mut pos = vec![usize::MAX; big];
        let mut next = 0;
        for v in 0..big {
            if keep[v] {
                pos[v] = next;
                next += 1;
            }
        }
        let pruned = Hypergraph::from_edges(
            n,
            k,
            full.edges()
                .iter()
                .filter(|e| e.iter().all(|&v| keep[v]))
                .map(|e| e.iter().map(|&v| pos[v]).collect()),
        )?;
        let degree_bound = c * m as f64 / 2.0;
        if pruned.max_degree() as f64 > degree_bound {
            return Err(Error::defect(format!(
                "pruned k-graph has degree {} > C m / 2 = {degree_bound}",
                pruned.max_degree()
            )));
        }
        return Ok(GoodKGraph { hypergraph: pruned, c, p, resamples, sampled_edges, edge_limit, degree_bound });
    }
    Err(Error::Budget(format!("edge count exceeded C m N / (4k) in {RESAMPLE_CAP} samples")))
}

fn binom(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Binomial random k-graph on `n` vertices: geometric skips over the
/// colexicographic ranks of all k-sets.
fn binomial_kgraph(n: usize, k: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let total = binom(n as u128, k as u128);
    let mut edges = Vec::new();
    let log_q = (1.0 - p).ln();
    let mut rank: u128 = 0;
    let mut first = true;
    loop {
        let skip = if p >= 1.0 {
            0
        } else {
            let u: f64 = 1.0 - rng.gen::<f64>();
            (u.ln() / log_q).floor() as u128
        };
        rank = if first { skip } else { rank + 1 + skip };
        first = false;
        if rank >= total {
            return edges;
        }
        edges.push(unrank_colex(rank, n, k));
    }
}

fn unrank_colex(mut rank: u128, n: usize, k: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut hi = n;
    for i in (1..=k).rev() {
        // Largest c < hi with C(c, i) <= rank.
        let (mut lo, mut top) = (i - 1, hi - 1);
        while lo < top {
            let mid = (lo + top).div_ceil(2);
            if binom(mid as u128, i as u128) <= rank {
                lo = mid;
            } else {
                top = mid - 1;
            }
        }
        out.push(lo);
        rank -= binom(lo as u128, i as u128);
        hi = lo;
    }
    out.reverse();
    out
}
