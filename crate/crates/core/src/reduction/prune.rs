use super::{Case, ReductionState, TripleSelection};
use crate::coloring::{FourColor, SteppedColoring};
use crate::error::{Error, Result};
use crate::numeric::delta;
use crate::report::PropertyReport;
use crate::template::TemplateFamily;

/// View positions of the vertices of `U^u`.
#[derive(Clone, Debug)]
pub(crate) struct Layout {
    /// `order[i - 1]` is the vertex at view position `i`.
    pub order: Vec<usize>,
    /// `pos[v]` is the view position of `v`, 0 outside `U^u`.
    pub pos: Vec<usize>,
}

impl Layout {
    pub fn new(state: &ReductionState, sel: &TripleSelection) -> Self {
        let sorted = state.sorted_vertices();
        let order: Vec<usize> = sel.positions.iter().map(|&p| sorted[p - 1]).collect();
        let mut pos = vec![0; state.n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i + 1;
        }
        Layout { order, pos }
    }

    fn within(&self, v: usize, (a, b): (usize, usize)) -> bool {
        (a..=b).contains(&self.pos[v])
    }
}

/// `||A ∩ B| - |A| s / n| >= eps s` for `A` the view interval `range`.
pub(crate) fn correlated(layout: &Layout, block: &[usize], range: (usize, usize), n: usize, eps: f64) -> bool {
    let size = (range.1 + 1).saturating_sub(range.0);
    correlated_count(block.iter().filter(|&&v| layout.within(v, range)).count(), size, block.len(), n, eps)
}

pub(crate) fn correlated_count(inside: usize, set_size: usize, s: usize, n: usize, eps: f64) -> bool {
    let expected = set_size as f64 * s as f64 / n as f64;
    (inside as f64 - expected).abs() >= eps * s as f64
}

#[derive(Clone, Debug)]
pub struct Pruning {
    /// `B'_i` in increasing vertex order.
    pub blocks: Vec<Vec<usize>>,
    /// `B_i` is correlated with one of `I_1, I_2, I_3`.
    pub correlated: Vec<bool>,
    pub report: PropertyReport,
}

/// Empties blocks correlated with an `I_j`, then keeps the vertices of
/// `B_i^u ∩ I_2` with at least `k` neighbours in each of `B_i^u ∩ I_1` and
/// `B_i^u ∩ I_3`.
pub fn prune_blocks(state: &ReductionState, sel: &TripleSelection, template: &TemplateFamily) -> Result<Pruning> {
    pruned(state, sel, template, &Layout::new(state, sel))
}

pub(crate) fn pruned(
    state: &ReductionState,
    sel: &TripleSelection,
    template: &TemplateFamily,
    layout: &Layout,
) -> Result<Pruning> {
    if template.copies.len() != template.blocks.len() {
        return Err(Error::domain("template carries no copies of F"));
    }
    if state.blocks.len() != template.blocks.len() {
        return Err(Error::domain(format!(
            "state has {} blocks, template {}",
            state.blocks.len(),
            template.blocks.len()
        )));
    }
    let (k, u, n) = (state.k, state.u, state.n);
    let eps = state.params.epsilon;
    let s = template.s as f64;
    let mut blocks = Vec::with_capacity(template.blocks.len());
    let mut flags = Vec::with_capacity(template.blocks.len());
    let mut worst_loss = 0usize;
    for ((full, current), copy) in template.blocks.iter().zip(&state.blocks).zip(&template.copies) {
        let corr = [sel.i1, sel.i2, sel.i3].iter().any(|&r| correlated(layout, full, r, n, eps));
        flags.push(corr);
        if corr || current.is_empty() {
            blocks.push(Vec::new());
            continue;
        }
        let local = |v: usize| current.binary_search(&v).ok();
        let mut left = vec![0usize; current.len()];
        let mut right = vec![0usize; current.len()];
        for &(a, b) in copy.edges() {
            let (Some(ia), Some(ib)) = (local(a), local(b)) else { continue };
            for (me, other, mi) in [(a, b, ia), (b, a, ib)] {
                if layout.within(me, sel.i2) {
                    if layout.within(other, sel.i1) {
                        left[mi] += 1;
                    } else if layout.within(other, sel.i3) {
                        right[mi] += 1;
                    }
                }
            }
        }
        let kept: Vec<usize> = current
            .iter()
            .enumerate()
            .filter(|&(i, &v)| layout.within(v, sel.i2) && left[i] >= k && right[i] >= k)
            .map(|(_, &v)| v)
            .collect();
        let in_i2 = full.iter().filter(|&&v| layout.within(v, sel.i2)).count();
        worst_loss = worst_loss.max(in_i2 - kept.len());
        blocks.push(kept);
    }
    let empty = blocks.iter().filter(|b| b.is_empty()).count();
    let loss_bound = 2.0 * (k - u + 1) as f64 * eps * s;
    let empty_bound = (4 * (k - u) + 3) as f64 * eps * blocks.len() as f64;
    let mut report = PropertyReport::new("prune");
    report
        .record("correlated", flags.iter().filter(|&&c| c).count())
        .record("eq1.observed", worst_loss)
        .record("eq1.bound", format!("{loss_bound:.3}"))
        .record("eq2.observed", empty)
        .record("eq2.bound", format!("{empty_bound:.3}"));
    if worst_loss as f64 > loss_bound {
        report.fail(format!("inequality breach: a block loses {worst_loss} > {loss_bound:.3} vertices of I2"));
    }
    if empty as f64 > empty_bound {
        report.fail(format!("inequality breach: {empty} empty pruned blocks > {empty_bound:.3}"));
    }
    Ok(Pruning { blocks, correlated: flags, report })
}

/// Two edges of `H_E^u` built from `v < w` in one `S_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub block: usize,
    pub step: usize,
    pub v: usize,
    pub w: usize,
    pub y: usize,
    pub zs: Vec<usize>,
    pub e1: Vec<usize>,
    pub e2: Vec<usize>,
    pub c1: FourColor,
    pub c2: FourColor,
    /// Both colors fall in the classes the argument predicts.
    pub expected: bool,
    /// The four delta relations D1..D4 between the witness values.
    pub relations: [bool; 4],
}

impl Witness {
    pub fn describe(&self) -> String {
        format!(
            "block {} step {}: e1 = {{{}}} -> {}, e2 = {{{}}} -> {}",
            self.block,
            self.step,
            crate::graph::join(&self.e1),
            self.c1,
            crate::graph::join(&self.e2),
            self.c2
        )
    }
}

#[derive(Clone, Debug)]
pub struct Separation {
    pub report: PropertyReport,
    pub violations: usize,
    pub witnesses: Vec<Witness>,
}

/// Checks `|B'_i ∩ S_j| <= 1`; every violation gets its two witness edges,
/// their colors under `phi` and the D1..D4 audit.
pub fn check_separation(
    pruning: &Pruning,
    sel: &TripleSelection,
    state: &ReductionState,
    template: &TemplateFamily,
    sc: &SteppedColoring,
) -> Result<Separation> {
    separation(pruning, sel, state, template, sc, &Layout::new(state, sel))
}

pub(crate) fn separation(
    pruning: &Pruning,
    sel: &TripleSelection,
    state: &ReductionState,
    template: &TemplateFamily,
    sc: &SteppedColoring,
    layout: &Layout,
) -> Result<Separation> {
    let mut report = PropertyReport::new("separation");
    let mut violations = 0;
    let mut witnesses = Vec::new();
    let mut breaches = 0;
    for (i, kept) in pruning.blocks.iter().enumerate() {
        for (&j, &range) in sel.r.iter().zip(&sel.s) {
            let mut inside: Vec<usize> = kept.iter().copied().filter(|&v| layout.within(v, range)).collect();
            if inside.len() < 2 {
                continue;
            }
            violations += 1;
            inside.sort_by_key(|&v| layout.pos[v]);
            match witness(i, j, inside[0], inside[1], sel, state, template, sc, layout)? {
                Some(w) => witnesses.push(w),
                None => breaches += 1,
            }
        }
    }
    report
        .record("violations", violations)
        .record("witnesses", witnesses.len())
        .record("contract_breaches", breaches);
    for (idx, w) in witnesses.iter().enumerate().take(4) {
        report
            .record(format!("witness{idx}"), w.describe())
            .record(format!("witness{idx}.expected_classes"), w.expected)
            .record(format!("witness{idx}.D1..D4"), format!("{:?}", w.relations));
    }
    if let Some(w) = witnesses.first() {
        report.fail(w.describe());
    } else if breaches > 0 {
        report.fail("pruning-contract breach: witness vertices lack neighbours in I1 or I3");
    }
    Ok(Separation { report, violations, witnesses })
}

#[allow(clippy::too_many_arguments)]
fn witness(
    block: usize,
    step: usize,
    v: usize,
    w: usize,
    sel: &TripleSelection,
    state: &ReductionState,
    template: &TemplateFamily,
    sc: &SteppedColoring,
    layout: &Layout,
) -> Result<Option<Witness>> {
    let u = state.u;
    let current = &state.blocks[block];
    let mut nbrs: Vec<usize> = template.copies[block]
        .edges()
        .iter()
        .filter_map(|&(a, b)| match (a == v, b == v) {
            (true, _) => Some(b),
            (_, true) => Some(a),
            _ => None,
        })
        .filter(|x| current.binary_search(x).is_ok())
        .collect();
    nbrs.sort_by_key(|&x| layout.pos[x]);
    let y = nbrs.iter().copied().find(|&x| layout.within(x, sel.i1));
    let zs: Vec<usize> = nbrs.iter().copied().filter(|&x| layout.within(x, sel.i3)).take(u - 2).collect();
    let Some(y) = y else { return Ok(None) };
    if zs.len() < u - 2 {
        return Ok(None);
    }
    let (e1, e2) = if u == 3 {
        (vec![y, v, w], vec![v, w, zs[0]])
    } else {
        let mut e1 = vec![y, v, w];
        e1.extend_from_slice(&zs[..u - 3]);
        let mut e2 = vec![v, w];
        e2.extend_from_slice(&zs);
        (e1, e2)
    };
    let color = |e: &[usize]| -> Result<FourColor> {
        let values: Vec<_> = e
            .iter()
            .map(|&x| state.value_of(x).cloned().ok_or_else(|| Error::defect(format!("vertex {x} has no value"))))
            .collect::<Result<_>>()?;
        sc.phi(&values)
    };
    let (c1, c2) = (color(&e1)?, color(&e2)?);
    use FourColor::*;
    let (want1, want2): (&[FourColor], &[FourColor]) = match (u, sel.case) {
        (3, Case::RightSteps) => (&[C3, C4], &[C1, C2]),
        (3, Case::LeftSteps) => (&[C1, C2], &[C3, C4]),
        _ => (&[C1], &[C2]),
    };

    let view = &sel.view;
    let x = |vertex: usize| view.x(layout.pos[vertex]);
    let d_p = view.delta(view.step(step).p.expect("right step"));
    let d_t1 = view.delta(view.step(sel.t[0]).l - 1);
    let d_t2 = view.delta(view.step(sel.t[1]).l - 1);
    let relations = [
        delta(x(v), x(w)) < d_p && d_p < d_t1,
        delta(x(y), x(v)) >= d_t1,
        zs.iter().all(|&z| delta(x(w), x(z)) == d_p),
        zs.windows(2).all(|p| delta(x(p[0]), x(p[1])) < d_t2),
    ];
    Ok(Some(Witness {
        block,
        step,
        v,
        w,
        y,
        zs,
        e1,
        e2,
        c1,
        c2,
        expected: want1.contains(&c1) && want2.contains(&c2),
        relations,
    }))
}
