//! Random regular graphs, their spectral gap and the neighbor-expansion audit.

use std::collections::HashMap;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::report::PropertyReport;

/// Configuration-model attempts before switching to edge-swap repair.
pub const MAX_REJECTIONS: usize = 100;

/// Largest vertex count handed to the dense eigensolver.
pub const DENSE_SOLVER_CAP: usize = 2000;

/// Largest vertex count for the exact expansion audit.
pub const EXACT_EXPANSION_CAP: usize = 20;

pub fn gen_random_regular(m: usize, d: usize, seed: u64) -> Result<Graph> {
    if d >= m {
        return Err(Error::infeasible(format!("regular graph needs d < M, got d = {d}, M = {m}")));
    }
    if !(d * m).is_multiple_of(2) {
        return Err(Error::infeasible(format!("d * M must be even, got d = {d}, M = {m}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..m).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    let mut pairs = Vec::new();
    for _ in 0..MAX_REJECTIONS {
        stubs.shuffle(&mut rng);
        pairs = stubs.chunks(2).map(|c| (c[0].min(c[1]), c[0].max(c[1]))).collect();
        if is_simple(&pairs) {
            return Graph::from_edges(m, pairs);
        }
    }
    repair(&mut pairs, &mut rng)?;
    Graph::from_edges(m, pairs)
}

fn is_simple(pairs: &[(usize, usize)]) -> bool {
    let mut seen = std::collections::HashSet::with_capacity(pairs.len());
    pairs.iter().all(|&(u, v)| u != v && seen.insert((u, v)))
}

/// Degree-preserving swaps until no loop or repeated pair remains.
fn repair(pairs: &mut [(usize, usize)], rng: &mut ChaCha8Rng) -> Result<()> {
    let mut mult: HashMap<(usize, usize), usize> = HashMap::new();
    for &p in pairs.iter() {
        *mult.entry(p).or_default() += 1;
    }
    let bad = |p: (usize, usize), mult: &HashMap<(usize, usize), usize>| p.0 == p.1 || mult[&p] > 1;
    let cap = 1000 * pairs.len().max(1);
    let mut attempts = 0;
    while let Some(i) = (0..pairs.len()).find(|&i| bad(pairs[i], &mult)) {
        attempts += 1;
        if attempts > cap {
            return Err(Error::Budget(format!("edge-swap repair did not finish in {cap} swaps")));
        }
        let j = rng.gen_range(0..pairs.len());
        if j == i {
            continue;
        }
        let (a, b) = pairs[i];
        let (c, e) = if rng.gen() { pairs[j] } else { (pairs[j].1, pairs[j].0) };
        let n1 = (a.min(c), a.max(c));
        let n2 = (b.min(e), b.max(e));
        if n1.0 == n1.1 || n2.0 == n2.1 || n1 == n2 {
            continue;
        }
        if mult.get(&n1).copied().unwrap_or(0) > 0 || mult.get(&n2).copied().unwrap_or(0) > 0 {
            continue;
        }
        for old in [pairs[i], pairs[j]] {
            let slot = mult.get_mut(&old).expect("present");
            *slot -= 1;
            if *slot == 0 {
                mult.remove(&old);
            }
        }
        pairs[i] = n1;
        pairs[j] = n2;
        mult.insert(n1, 1);
        mult.insert(n2, 1);
    }
    Ok(())
}

/// Second-largest absolute adjacency eigenvalue of a regular graph.
pub fn lambda2(g: &Graph) -> Result<f64> {
    if g.regular_degree().is_none() {
        return Err(Error::domain("lambda2 expects a regular graph"));
    }
    let m = g.n();
    if m > DENSE_SOLVER_CAP {
        return Err(Error::Budget(format!("M = {m} exceeds the dense solver cap {DENSE_SOLVER_CAP}")));
    }
    if m < 2 {
        return Err(Error::domain("lambda2 needs at least two vertices"));
    }
    let mut a = DMatrix::<f64>::zeros(m, m);
    for &(u, v) in g.edges() {
        a[(u, v)] = 1.0;
        a[(v, u)] = 1.0;
    }
    let mut abs: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().map(|x| x.abs()).collect();
    abs.sort_by(|x, y| y.total_cmp(x));
    Ok(abs[1])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpansionMode {
    Exact,
    Sampled { trials: usize, seed: u64 },
}

/// Counts vertices with fewer than `k` neighbors in `U`, over every tested
/// `U` with `|U| >= eps * M`, and audits the mixing-lemma slack.
pub fn verify_neighbor_expansion(g: &Graph, eps: f64, k: usize, mode: ExpansionMode) -> PropertyReport {
    let mut report = PropertyReport::new("neighbor-expansion");
    let m = g.n();
    let adj = g.adjacency();
    let min_size = ((eps * m as f64).ceil() as usize).max(1);
    let bound = eps * m as f64;
    report.record("M", m).record("eps", eps).record("k", k).record("min_set_size", min_size);

    // λ is only meaningful for regular graphs; otherwise the slack audit is skipped.
    let spectral = g.regular_degree().and_then(|d| lambda2(g).ok().map(|l| (d as f64, l)));
    if let Some((_, l)) = spectral {
        report.record("lambda", format!("{l:.6}"));
    }

    let mut worst = (0usize, Vec::new());
    let mut tested = 0u64;
    let check = |u_set: &[bool], worst: &mut (usize, Vec<usize>)| {
        let count = (0..m)
            .filter(|&v| adj[v].iter().filter(|&&w| u_set[w]).count() < k)
            .count();
        if count > worst.0 || worst.1.is_empty() {
            *worst = (count, (0..m).filter(|&v| u_set[v]).collect());
        }
    };

    let mut min_slack = f64::INFINITY;
    let mut slack_pairs = 0u64;
    let mut audit_slack = |a: &[bool], b: &[bool]| {
        if let Some((d, l)) = spectral {
            let (sa, sb) = (count(a) as f64, count(b) as f64);
            let slack = g.edges_between(a, b) as f64 - (d * sa * sb / m as f64 - l * (sa * sb).sqrt());
            min_slack = min_slack.min(slack);
            slack_pairs += 1;
        }
    };

    match mode {
        ExpansionMode::Exact => {
            if m > EXACT_EXPANSION_CAP {
                report.fail(format!("exact mode needs M <= {EXACT_EXPANSION_CAP}, got {m}"));
                return report;
            }
            report.record("mode", "exact");
            let mut set = vec![false; m];
            for mask in 0u32..(1u32 << m) {
                if (mask.count_ones() as usize) < min_size {
                    continue;
                }
                for (v, slot) in set.iter_mut().enumerate() {
                    *slot = mask >> v & 1 == 1;
                }
                tested += 1;
                check(&set, &mut worst);
                let complement: Vec<bool> = set.iter().map(|x| !x).collect();
                audit_slack(&set, &set);
                audit_slack(&set, &complement);
            }
        }
        ExpansionMode::Sampled { trials, seed } => {
            report.record("mode", "sampled").record("trials", trials).record("seed", seed);
            report.definitive = false;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut order: Vec<usize> = (0..m).collect();
            let mut sets: Vec<Vec<bool>> = Vec::new();
            // Prefixes and the complement of a neighborhood are the natural bad cases.
            for size in [min_size, (min_size + m) / 2, m] {
                sets.push((0..m).map(|v| v < size).collect());
            }
            if m > 0 {
                let v = rng.gen_range(0..m);
                let mut avoid = vec![true; m];
                avoid[v] = false;
                for &w in &adj[v] {
                    avoid[w] = false;
                }
                if count(&avoid) >= min_size {
                    sets.push(avoid);
                }
            }
            for set in &sets {
                tested += 1;
                check(set, &mut worst);
            }
            for _ in 0..trials {
                let size = rng.gen_range(min_size..=m.max(min_size));
                order.shuffle(&mut rng);
                let mut a = vec![false; m];
                for &v in &order[..size.min(m)] {
                    a[v] = true;
                }
                tested += 1;
                check(&a, &mut worst);
                let wsize = rng.gen_range(1..=m.max(1));
                order.shuffle(&mut rng);
                let mut b = vec![false; m];
                for &v in &order[..wsize.min(m)] {
                    b[v] = true;
                }
                audit_slack(&a, &b);
            }
        }
    }

    report
        .record("sets_tested", tested)
        .record("worst_violators", worst.0)
        .record("violator_bound", format!("{bound:.3}"))
        .record("worst_ratio", format!("{:.6}", worst.0 as f64 / m.max(1) as f64));
    if slack_pairs > 0 {
        report
            .record("slack_pairs", slack_pairs)
            .record("min_mixing_slack", format!("{min_slack:.6}"));
        if min_slack < -1e-6 {
            report.fail(format!("mixing-lemma slack {min_slack:.6} < 0"));
        }
    }
    if worst.0 as f64 > bound {
        report.fail(format!(
            "{} vertices have fewer than {k} neighbors in U = {:?}",
            worst.0,
            truncate(&worst.1)
        ));
    }
    report
}

fn count(set: &[bool]) -> usize {
    set.iter().filter(|&&x| x).count()
}

fn truncate(xs: &[usize]) -> String {
    if xs.len() <= 16 {
        format!("{xs:?}")
    } else {
        format!("{:?}.. ({} vertices)", &xs[..16], xs.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_regular_graphs() {
        let g = gen_random_regular(4, 2, 0).unwrap();
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.regular_degree(), Some(2));
        assert!(gen_random_regular(4, 4, 0).is_err());
        assert!(gen_random_regular(5, 3, 0).is_err());
    }

    #[test]
    fn repair_path_produces_simple_regular_graph() {
        // d = 12 makes a simple configuration astronomically unlikely.
        let g = gen_random_regular(60, 12, 7).unwrap();
        assert_eq!(g.regular_degree(), Some(12));
        assert_eq!(g, gen_random_regular(60, 12, 7).unwrap());
    }

    #[test]
    fn spectra_of_known_graphs() {
        assert!((lambda2(&Graph::complete(6)).unwrap() - 1.0).abs() < 1e-8);
        assert!((lambda2(&Graph::cycle(4).unwrap()).unwrap() - 2.0).abs() < 1e-8);
        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert!(lambda2(&path).is_err());
    }

    #[test]
    fn expansion_on_trivial_graphs() {
        let r = verify_neighbor_expansion(&Graph::complete(6), 0.5, 1, ExpansionMode::Exact);
        assert!(r.passed(), "{r}");
        assert_eq!(r.get("worst_violators"), Some("0"));
        let r = verify_neighbor_expansion(&Graph::empty(6), 0.5, 1, ExpansionMode::Exact);
        assert!(!r.passed());
        assert_eq!(r.get("worst_violators"), Some("6"));
    }
}
