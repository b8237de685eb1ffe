//! The template family: nearly disjoint `s`-blocks on `[0, n)` with bounded
//! vertex multiplicity, each hosting a relabeled copy of the expander `F`.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coloring::{field, header_fields};
use crate::error::{Error, Result};
use crate::graph::{join, parse_indices, Graph};
use crate::params::ParamSet;
use crate::report::PropertyReport;

/// Fresh seeds tried before generation gives up.
pub const TEMPLATE_RETRY_CAP: usize = 5;

/// Counts from one run of the randomized procedure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttemptLog {
    pub seed: u64,
    pub multisets: usize,
    pub heavy_vertices: usize,
    pub bad_repeat: usize,
    pub bad_intersect: usize,
    pub bad_heavy: usize,
    pub good: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TemplateFamily {
    pub n: usize,
    pub s: usize,
    pub eps: f64,
    /// Vertex multiplicity cap `C`.
    pub cap: u64,
    /// Sorted blocks.
    pub blocks: Vec<Vec<usize>>,
    /// `F_i` on the global vertex set, supported on `blocks[i]`; empty until
    /// [`TemplateFamily::with_copies`] is called.
    pub copies: Vec<Graph>,
    pub log: Vec<AttemptLog>,
}

pub fn derived_seed(seed: u64, attempt: u64) -> u64 {
    seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub fn gen_template(n: usize, s: usize, eps: f64, params: &ParamSet, seed: u64) -> Result<TemplateFamily> {
    if s < 2 {
        return Err(Error::domain(format!("block size s = {s} is degenerate; need s >= 2")));
    }
    if s > n {
        return Err(Error::domain(format!("block size s = {s} exceeds n = {n}")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::domain(format!("eps = {eps} outside (0, 1)")));
    }
    let cap = params.template_degree_cap;
    if params.profile == "paper" {
        let c = cap as f64;
        if (n as f64) < c * (s as f64).powi(2) || (s as f64) < c {
            return Err(Error::infeasible(format!(
                "template needs n >= C s^2 and s >= C (n = {n}, s = {s}, C = {cap})"
            )));
        }
    }
    let count = ((params.template_count_coeff * n as f64 / s as f64).ceil() as usize).max(1);
    let s0 = s + ((eps * s as f64 / 4.0).floor() as usize).max(1);
    let mut log = Vec::new();
    for attempt in 0..TEMPLATE_RETRY_CAP {
        let attempt_seed = derived_seed(seed, attempt as u64);
        let (blocks, entry) = attempt_template(n, s, s0, count, eps, cap, attempt_seed);
        log.push(entry);
        if 2 * blocks.len() >= count {
            return Ok(TemplateFamily { n, s, eps, cap, blocks, copies: Vec::new(), log });
        }
    }
    let summary: Vec<String> = log
        .iter()
        .map(|l| format!("seed {} good {}/{}", l.seed, l.good, l.multisets))
        .collect();
    Err(Error::Budget(format!(
        "template generation failed after {TEMPLATE_RETRY_CAP} seeds: {}",
        summary.join(", ")
    )))
}

fn attempt_template(
    n: usize,
    s: usize,
    s0: usize,
    count: usize,
    eps: f64,
    cap: u64,
    seed: u64,
) -> (Vec<Vec<usize>>, AttemptLog) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let multisets: Vec<Vec<usize>> = (0..count)
        .map(|_| {
            let mut x: Vec<usize> = (0..s0).map(|_| rng.gen_range(0..n)).collect();
            x.sort_unstable();
            x
        })
        .collect();

    let mut containing = vec![0u64; n];
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, x) in multisets.iter().enumerate() {
        let mut distinct = x.clone();
        distinct.dedup();
        for &v in &distinct {
            containing[v] += 1;
            members[v].push(i);
        }
    }
    let heavy: Vec<bool> = containing.iter().map(|&c| c > cap).collect();

    // Pairwise set intersections through the vertex incidence lists.
    let mut inter = vec![0usize; count * count];
    for list in &members {
        for (a, &i) in list.iter().enumerate() {
            for &j in &list[a + 1..] {
                inter[i * count + j] += 1;
                inter[j * count + i] += 1;
            }
        }
    }

    let mut entry = AttemptLog {
        seed,
        multisets: count,
        heavy_vertices: heavy.iter().filter(|&&h| h).count(),
        bad_repeat: 0,
        bad_intersect: 0,
        bad_heavy: 0,
        good: 0,
    };
    let limit = eps * s as f64;
    let mut blocks = Vec::new();
    for (i, x) in multisets.iter().enumerate() {
        let repeat = x.windows(2).any(|w| w[0] == w[1]);
        let intersect = (0..count).any(|j| j != i && inter[i * count + j] as f64 >= limit);
        let heavy_hits = x.iter().filter(|&&v| heavy[v]).count();
        let too_heavy = heavy_hits > s0 - s;
        entry.bad_repeat += repeat as usize;
        entry.bad_intersect += intersect as usize;
        entry.bad_heavy += too_heavy as usize;
        if repeat || intersect || too_heavy {
            continue;
        }
        let block: Vec<usize> = x.iter().copied().filter(|&v| !heavy[v]).take(s).collect();
        blocks.push(block);
    }
    entry.good = blocks.len();
    (blocks, entry)
}

impl TemplateFamily {
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Installs `F_i`: `f` relabeled onto each block in increasing order.
    pub fn with_copies(mut self, f: &Graph) -> Result<Self> {
        if f.n() != self.s {
            return Err(Error::domain(format!("F has {} vertices but blocks have {}", f.n(), self.s)));
        }
        self.copies = self
            .blocks
            .iter()
            .map(|b| f.relabel(self.n, b))
            .collect::<Result<_>>()?;
        Ok(self)
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        let mut mult = vec![0; self.n];
        for b in &self.blocks {
            for &v in b {
                mult[v] += 1;
            }
        }
        mult
    }

    /// Largest pairwise block intersection and one pair attaining it.
    pub fn max_intersection(&self) -> (usize, Option<(usize, usize)>) {
        let t = self.blocks.len();
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for (i, b) in self.blocks.iter().enumerate() {
            for &v in b {
                members[v].push(i);
            }
        }
        let mut inter = std::collections::HashMap::new();
        for list in &members {
            for (a, &i) in list.iter().enumerate() {
                for &j in &list[a + 1..] {
                    *inter.entry((i, j)).or_insert(0usize) += 1;
                }
            }
        }
        let best = inter.into_iter().max_by_key(|&((i, j), c)| (c, std::cmp::Reverse(i * t + j)));
        match best {
            Some((pair, c)) => (c, Some(pair)),
            None => (0, None),
        }
    }

    /// Number of blocks `e` with `||e ∩ A| - |A| s / n| > eps s`.
    pub fn correlated_count(&self, a: &[bool], eps: f64) -> usize {
        let size = a.iter().filter(|&&x| x).count() as f64;
        let expected = size * self.s as f64 / self.n as f64;
        self.blocks
            .iter()
            .filter(|b| {
                let hit = b.iter().filter(|&&v| a[v]).count() as f64;
                (hit - expected).abs() > eps * self.s as f64
            })
            .count()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "template n={} s={} e={} eps={} cap={} attempts={}\n",
            self.n,
            self.s,
            self.blocks.len(),
            self.eps,
            self.cap,
            self.log.len()
        );
        for l in &self.log {
            let _ = writeln!(
                out,
                "log seed={} multisets={} heavy={} bad_repeat={} bad_intersect={} bad_heavy={} good={}",
                l.seed, l.multisets, l.heavy_vertices, l.bad_repeat, l.bad_intersect, l.bad_heavy, l.good
            );
        }
        for b in &self.blocks {
            out.push_str(&join(b));
            out.push('\n');
        }
        for (i, f) in self.copies.iter().enumerate() {
            let _ = writeln!(out, "copy {i} e={}", f.edge_count());
            for (u, v) in f.edges() {
                let _ = writeln!(out, "{u} {v}");
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.trim().is_empty())
            .collect();
        let (_, header) = *lines.first().ok_or_else(|| Error::parse(1, "empty template file"))?;
        let fields = header_fields(header, "template", 1)?;
        let n: usize = field(&fields, "n", 1)?;
        let s: usize = field(&fields, "s", 1)?;
        let e: usize = field(&fields, "e", 1)?;
        let eps: f64 = field(&fields, "eps", 1)?;
        let cap: u64 = field(&fields, "cap", 1)?;
        let attempts: usize = field(&fields, "attempts", 1)?;
        let mut pos = 1;
        let mut log = Vec::with_capacity(attempts);
        for _ in 0..attempts {
            let (no, line) = *lines.get(pos).ok_or_else(|| Error::parse(0, "missing log line"))?;
            let f = header_fields(line, "log", no)?;
            log.push(AttemptLog {
                seed: field(&f, "seed", no)?,
                multisets: field(&f, "multisets", no)?,
                heavy_vertices: field(&f, "heavy", no)?,
                bad_repeat: field(&f, "bad_repeat", no)?,
                bad_intersect: field(&f, "bad_intersect", no)?,
                bad_heavy: field(&f, "bad_heavy", no)?,
                good: field(&f, "good", no)?,
            });
            pos += 1;
        }
        let mut blocks = Vec::with_capacity(e);
        for _ in 0..e {
            let (no, line) = *lines.get(pos).ok_or_else(|| Error::parse(0, "missing block line"))?;
            let block = parse_indices(line, no)?;
            if block.len() != s {
                return Err(Error::parse(no, format!("block has {} vertices, expected {s}", block.len())));
            }
            if block.windows(2).any(|w| w[0] >= w[1]) || block.last().is_some_and(|&v| v >= n) {
                return Err(Error::parse(no, "block must be strictly increasing within [0, n)"));
            }
            blocks.push(block);
            pos += 1;
        }
        let mut copies = Vec::new();
        while pos < lines.len() {
            let (no, line) = lines[pos];
            let mut parts = line.split_whitespace();
            if parts.next() != Some("copy") {
                return Err(Error::parse(no, "expected a copy section"));
            }
            let idx: usize = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::parse(no, "bad copy index"))?;
            if idx != copies.len() {
                return Err(Error::parse(no, format!("copy {idx} out of order")));
            }
            let rest: Vec<&str> = parts.collect();
            let f = header_fields(&format!("copy {}", rest.join(" ")), "copy", no)?;
            let count: usize = field(&f, "e", no)?;
            let mut edges = Vec::with_capacity(count);
            for _ in 0..count {
                pos += 1;
                let (eno, eline) = *lines.get(pos).ok_or_else(|| Error::parse(no, "truncated copy"))?;
                let uv = parse_indices(eline, eno)?;
                if uv.len() != 2 || uv[0] >= uv[1] {
                    return Err(Error::parse(eno, "edge must be two indices u < v"));
                }
                edges.push((uv[0], uv[1]));
            }
            copies.push(Graph::from_edges(n, edges).map_err(|err| Error::parse(no, err.to_string()))?);
            pos += 1;
        }
        if !copies.is_empty() && copies.len() != blocks.len() {
            return Err(Error::parse(0, "copy count does not match block count"));
        }
        Ok(TemplateFamily { n, s, eps, cap, blocks, copies, log })
    }
}

/// Exact multiplicity and intersection audits plus the correlation property
/// on random and adversarial sets `A`.
pub fn verify_template(t: &TemplateFamily, eps: f64, trials: usize, seed: u64) -> PropertyReport {
    let mut report = PropertyReport::new("template");
    let e = t.block_count();
    report
        .record("n", t.n)
        .record("s", t.s)
        .record("blocks", e)
        .record("eps", eps)
        .record("cap", t.cap)
        .record("trials", trials)
        .record("seed", seed);
    if e == 0 {
        report.fail("family has no blocks");
        return report;
    }
    if let Some(i) = t.blocks.iter().position(|b| b.len() != t.s) {
        report.fail(format!("block {i} has {} vertices", t.blocks[i].len()));
    }

    let max_mult = t.multiplicities().into_iter().max().unwrap_or(0);
    report.record("max_multiplicity", max_mult);
    if max_mult as u64 > t.cap {
        report.fail(format!("a vertex lies in {max_mult} > C = {} blocks", t.cap));
    }
    let (max_inter, pair) = t.max_intersection();
    let limit = eps * t.s as f64;
    report
        .record("max_intersection", max_inter)
        .record("intersection_bound", format!("{limit:.3}"));
    if max_inter as f64 >= limit {
        report.fail(format!("blocks {pair:?} share {max_inter} >= eps s vertices"));
    }

    let n = t.n;
    let mut sets: Vec<(String, Vec<bool>)> = Vec::new();
    sets.push(("all".into(), vec![true; n]));
    for frac in [0.25, 0.5, 0.75] {
        let len = ((n as f64 * frac) as usize).max((eps * n as f64).ceil() as usize);
        sets.push((format!("prefix-{len}"), (0..n).map(|v| v < len).collect()));
    }
    for take in [1, e.div_ceil(2)] {
        let mut a = vec![false; n];
        for b in &t.blocks[..take] {
            for &v in b {
                a[v] = true;
            }
        }
        sets.push((format!("union-of-{take}-blocks"), a));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let min_size = ((eps * n as f64).ceil() as usize).min(n);
    let mut order: Vec<usize> = (0..n).collect();
    for trial in 0..trials {
        let size = rng.gen_range(min_size..=n);
        order.shuffle(&mut rng);
        let mut a = vec![false; n];
        for &v in &order[..size] {
            a[v] = true;
        }
        sets.push((format!("random-{trial}"), a));
    }

    let mut worst = (0usize, String::new());
    for (name, a) in &sets {
        let c = t.correlated_count(a, eps);
        if c > worst.0 || worst.1.is_empty() {
            worst = (c, name.clone());
        }
    }
    let fraction = worst.0 as f64 / e as f64;
    report
        .record("sets_tested", sets.len())
        .record("worst_correlated", worst.0)
        .record("worst_set", &worst.1)
        .record("worst_fraction", format!("{fraction:.6}"));
    if fraction > eps {
        report.fail(format!(
            "{} of {e} blocks are correlated with set {} (fraction {fraction:.4} > eps)",
            worst.0, worst.1
        ));
    }
    report.sampled()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disjoint_family(blocks: usize, s: usize) -> TemplateFamily {
        TemplateFamily {
            n: blocks * s,
            s,
            eps: 0.1,
            cap: 1,
            blocks: (0..blocks).map(|i| (i * s..(i + 1) * s).collect()).collect(),
            copies: Vec::new(),
            log: Vec::new(),
        }
    }

    #[test]
    fn whole_vertex_set_is_uncorrelated() {
        let t = disjoint_family(20, 10);
        assert_eq!(t.correlated_count(&vec![true; t.n], 0.1), 0);
    }

    #[test]
    fn single_block_set_correlates_one_block() {
        let t = disjoint_family(20, 10);
        let a: Vec<bool> = (0..t.n).map(|v| v < 10).collect();
        // |A| s / n = 0.5; the block itself deviates by 9.5 > 1, the others by 0.5.
        assert_eq!(t.correlated_count(&a, 0.1), 1);
    }

    #[test]
    fn generated_family_respects_exact_bounds() {
        let p = ParamSet::desk(3, 4);
        let t = gen_template(2000, 40, 0.1, &p, 1).unwrap();
        assert!(t.block_count() > 0);
        assert!(t.multiplicities().into_iter().all(|m| m as u64 <= p.template_degree_cap));
        assert!(t.max_intersection().0 < 4);
        assert_eq!(t, gen_template(2000, 40, 0.1, &p, 1).unwrap());
    }

    #[test]
    fn preconditions() {
        let p = ParamSet::desk(3, 4);
        assert!(gen_template(100, 1, 0.1, &p, 0).is_err());
        assert!(matches!(
            gen_template(2000, 40, 0.1, &ParamSet::paper(3, 4), 0),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn file_round_trip() {
        let p = ParamSet::desk(3, 2);
        let f = crate::expander::gen_random_regular(20, 4, 3).unwrap();
        let t = gen_template(400, 20, 0.2, &p, 2).unwrap().with_copies(&f).unwrap();
        let text = t.to_text();
        let back = TemplateFamily::from_text(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_text(), text);
    }
}
