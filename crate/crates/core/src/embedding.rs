//! Capped embeddings into the stepped coloring: classification, exhaustive
//! search and the lifted-coloring equivalence.

use std::collections::BTreeMap;

use crate::coloring::{FourColor, SteppedColoring};
use crate::error::{Error, Result};
use crate::graph::Hypergraph;
use crate::numeric::NonNegInt;

/// `h: V(H) -> [0, M_k)` with at most `cap` vertices per value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CappedEmbedding {
    values: Vec<NonNegInt>,
    cap: usize,
}

impl CappedEmbedding {
    pub fn new(values: Vec<NonNegInt>, cap: usize) -> Result<Self> {
        let e = CappedEmbedding { values, cap };
        if let Some((value, count)) = e.multiplicity().into_iter().find(|&(_, c)| c > cap) {
            return Err(Error::domain(format!("value {value} used {count} times, cap is {cap}")));
        }
        Ok(e)
    }

    pub fn from_u64(values: &[u64], cap: usize) -> Result<Self> {
        Self::new(values.iter().map(|&v| NonNegInt::from(v)).collect(), cap)
    }

    pub fn values(&self) -> &[NonNegInt] {
        &self.values
    }

    pub fn value(&self, v: usize) -> &NonNegInt {
        &self.values[v]
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn multiplicity(&self) -> BTreeMap<NonNegInt, usize> {
        let mut table = BTreeMap::new();
        for v in &self.values {
            *table.entry(v.clone()).or_insert(0) += 1;
        }
        table
    }

    pub fn image(&self, edge: &[usize]) -> Vec<NonNegInt> {
        edge.iter().map(|&v| self.values[v].clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassKind {
    Monochromatic(FourColor),
    AlmostMonochromatic(FourColor),
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingClass {
    pub kind: ClassKind,
    /// Two edges whose images receive different colors.
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
}

fn all_distinct(xs: &[NonNegInt]) -> bool {
    let mut sorted: Vec<&NonNegInt> = xs.iter().collect();
    sorted.sort();
    sorted.windows(2).all(|w| w[0] != w[1])
}

pub fn classify_embedding(h: &Hypergraph, emb: &CappedEmbedding, sc: &SteppedColoring) -> Result<EmbeddingClass> {
    if emb.values.len() != h.n() {
        return Err(Error::domain(format!(
            "embedding covers {} vertices, hypergraph has {}",
            emb.values.len(),
            h.n()
        )));
    }
    CappedEmbedding::new(emb.values.clone(), emb.cap)?;
    let mut first_any: Option<(&Vec<usize>, FourColor)> = None;
    let mut first_distinct: Option<(&Vec<usize>, FourColor)> = None;
    let mut mono_break = None;
    let mut almost_break = None;
    for e in h.edges() {
        let image = emb.image(e);
        let color = sc.phi(&image)?;
        match first_any {
            None => first_any = Some((e, color)),
            Some((e0, c0)) if c0 != color && mono_break.is_none() => mono_break = Some((e0.clone(), e.clone())),
            _ => {}
        }
        if all_distinct(&image) {
            match first_distinct {
                None => first_distinct = Some((e, color)),
                Some((e0, c0)) if c0 != color && almost_break.is_none() => {
                    almost_break = Some((e0.clone(), e.clone()))
                }
                _ => {}
            }
        }
    }
    Ok(match (first_any, mono_break, almost_break) {
        (None, _, _) => EmbeddingClass { kind: ClassKind::Monochromatic(FourColor::C1), witness: None },
        (Some((_, c)), None, _) => EmbeddingClass { kind: ClassKind::Monochromatic(c), witness: None },
        (Some(_), Some(w), None) => EmbeddingClass {
            kind: ClassKind::AlmostMonochromatic(first_distinct.map_or(FourColor::C1, |(_, c)| c)),
            witness: Some(w),
        },
        (Some(_), Some(_), Some(w)) => EmbeddingClass { kind: ClassKind::Neither, witness: Some(w) },
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found { embedding: CappedEmbedding, color: FourColor, nodes: u64 },
    /// The whole search space was covered for every color.
    Absent { nodes: u64 },
    /// The node budget ran out first.
    Exhausted { nodes: u64 },
}

/// Backtracking search for a monochromatic embedding with cap `b`, trying
/// `C1..C4` in order; vertices by descending degree, values ascending.
pub fn search_mono_embedding(h: &Hypergraph, sc: &SteppedColoring, b: usize, budget: u64) -> Result<SearchOutcome> {
    let k = h.k();
    if k < 3 || k > sc.k {
        return Err(Error::domain(format!("search needs 3 <= k <= {}, got {k}", sc.k)));
    }
    if b == 0 {
        return Err(Error::domain("cap b must be positive"));
    }
    let universe = sc.universe.size_usize(k).map_err(|e| e.at("search"))? as u64;
    let n = h.n();
    if (n as u64) > universe.saturating_mul(b as u64) {
        return Ok(SearchOutcome::Absent { nodes: 0 });
    }
    if h.edge_count() == 0 {
        return Ok(SearchOutcome::Found {
            embedding: CappedEmbedding::from_u64(&spread(n, b), b)?,
            color: FourColor::C1,
            nodes: 0,
        });
    }

    let deg = h.degrees();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(deg[v]), v));
    let mut rank = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    // Edges become checkable when their last vertex (in search order) is set.
    let mut closing: Vec<Vec<&Vec<usize>>> = vec![Vec::new(); n];
    for e in h.edges() {
        let last = e.iter().map(|&v| rank[v]).max().expect("nonempty edge");
        closing[last].push(e);
    }

    let mut nodes = 0u64;
    for color in FourColor::ALL {
        let mut ctx = Ctx {
            sc,
            order: &order,
            closing: &closing,
            universe,
            cap: b,
            color,
            values: vec![0; n],
            counts: BTreeMap::new(),
            nodes: &mut nodes,
            budget,
            buf: Vec::with_capacity(k),
        };
        match ctx.descend(0)? {
            Step::Found => {
                let values = ctx.values.clone();
                return Ok(SearchOutcome::Found {
                    embedding: CappedEmbedding::from_u64(&values, b)?,
                    color,
                    nodes,
                });
            }
            Step::OutOfBudget => return Ok(SearchOutcome::Exhausted { nodes }),
            Step::Done => {}
        }
    }
    Ok(SearchOutcome::Absent { nodes })
}

/// Values `0, 0, .., 1, 1, ..` with each value used `b` times.
fn spread(n: usize, b: usize) -> Vec<u64> {
    (0..n).map(|i| (i / b) as u64).collect()
}

enum Step {
    Found,
    Done,
    OutOfBudget,
}

struct Ctx<'a> {
    sc: &'a SteppedColoring,
    order: &'a [usize],
    closing: &'a [Vec<&'a Vec<usize>>],
    universe: u64,
    cap: usize,
    color: FourColor,
    values: Vec<u64>,
    counts: BTreeMap<u64, usize>,
    nodes: &'a mut u64,
    budget: u64,
    buf: Vec<u64>,
}

impl Ctx<'_> {
    fn descend(&mut self, depth: usize) -> Result<Step> {
        if depth == self.order.len() {
            return Ok(Step::Found);
        }
        let v = self.order[depth];
        for value in 0..self.universe {
            if *self.nodes >= self.budget {
                return Ok(Step::OutOfBudget);
            }
            *self.nodes += 1;
            let used = self.counts.get(&value).copied().unwrap_or(0);
            if used == self.cap {
                continue;
            }
            self.values[v] = value;
            if !self.consistent(depth)? {
                continue;
            }
            *self.counts.entry(value).or_insert(0) += 1;
            let step = self.descend(depth + 1)?;
            *self.counts.get_mut(&value).expect("just inserted") -= 1;
            match step {
                Step::Done => {}
                other => return Ok(other),
            }
        }
        Ok(Step::Done)
    }

    fn consistent(&mut self, depth: usize) -> Result<bool> {
        for e in &self.closing[depth] {
            self.buf.clear();
            self.buf.extend(e.iter().map(|&u| self.values[u]));
            if self.sc.phi_u64(&self.buf)? != self.color {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Builds `v -> (h(v), y_v)` with per-value counters and confirms that the
/// lifted coloring gives every image edge one color.
pub fn psi_equivalence_check(h: &Hypergraph, emb: &CappedEmbedding, sc: &SteppedColoring, b: u64) -> Result<bool> {
    let mut next: BTreeMap<&NonNegInt, u64> = BTreeMap::new();
    let mut lifted = Vec::with_capacity(h.n());
    for x in emb.values() {
        let y = next.entry(x).or_insert(0);
        if *y >= b {
            return Ok(false);
        }
        lifted.push((x.clone(), *y));
        *y += 1;
    }
    let mut color = None;
    for e in h.edges() {
        let image: Vec<(NonNegInt, u64)> = e.iter().map(|&v| lifted[v].clone()).collect();
        let c = sc.lifted_color(b, &image)?;
        if *color.get_or_insert(c) != c {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ParamSet;

    fn coloring() -> SteppedColoring {
        // coeff * m = 2: M_2 = 4, M_3 = 8
        SteppedColoring::generate(ParamSet::desk(3, 2), 11).unwrap()
    }

    #[test]
    fn edgeless_and_single_edge() {
        let sc = coloring();
        let empty = Hypergraph::empty(4, 3);
        let e = CappedEmbedding::from_u64(&[0, 1, 2, 3], 1).unwrap();
        assert_eq!(classify_embedding(&empty, &e, &sc).unwrap().kind, ClassKind::Monochromatic(FourColor::C1));
        let one = Hypergraph::from_edges(3, 3, [vec![0, 1, 2]]).unwrap();
        let e = CappedEmbedding::from_u64(&[1, 4, 6], 1).unwrap();
        let c = sc.phi_u64(&[1, 4, 6]).unwrap();
        assert_eq!(classify_embedding(&one, &e, &sc).unwrap().kind, ClassKind::Monochromatic(c));
        assert!(psi_equivalence_check(&one, &e, &sc, 1).unwrap());
        match search_mono_embedding(&one, &sc, 1, 1_000_000).unwrap() {
            SearchOutcome::Found { embedding, color, .. } => {
                assert_eq!(sc.phi(&embedding.image(&[0, 1, 2])).unwrap(), color);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cap_violation_rejected() {
        assert!(CappedEmbedding::from_u64(&[3, 3, 3], 2).is_err());
    }

    #[test]
    fn budget_exhaustion_is_distinct() {
        let sc = coloring();
        let h = Hypergraph::complete(6, 3);
        assert!(matches!(
            search_mono_embedding(&h, &sc, 1, 10).unwrap(),
            SearchOutcome::Exhausted { .. }
        ));
    }
}
