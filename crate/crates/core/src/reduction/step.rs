use super::next::build_next_embedding;
use super::prune::{correlated_count, pruned, separation, Layout};
use super::{check_color_determination, find_triple, run_interval_procedure, ReductionState, Separation};
use crate::coloring::{FourColor, SteppedColoring};
use crate::error::{Error, Result};
use crate::gadget::gadget_family;
use crate::numeric::{delta, NonNegInt, Universe};
use crate::report::PropertyReport;
use crate::template::TemplateFamily;

/// How many chains are drawn for the color-determination audit.
const CHAIN_SAMPLES: usize = 256;

#[derive(Clone, Debug)]
pub enum StepOutcome {
    /// The level-`(u-1)` state, with every checked inequality holding.
    Advanced { next: ReductionState, report: PropertyReport },
    /// Two vertices of a pruned block share an `S_j`; the witnesses carry
    /// the differently colored edges.
    Counterexample { separation: Separation, report: PropertyReport },
    /// A quantitative inequality failed at these parameters. The next state
    /// is still produced when the construction itself went through.
    Breach { next: Option<ReductionState>, report: PropertyReport },
}

impl StepOutcome {
    pub fn report(&self) -> &PropertyReport {
        match self {
            StepOutcome::Advanced { report, .. }
            | StepOutcome::Counterexample { report, .. }
            | StepOutcome::Breach { report, .. } => report,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            StepOutcome::Advanced { .. } => "advanced",
            StepOutcome::Counterexample { .. } => "counterexample",
            StepOutcome::Breach { .. } => "inequality-breach",
        }
    }

    /// 0 advanced, 1 counterexample, 4 inequality breach.
    pub fn exit_code(&self) -> i32 {
        match self {
            StepOutcome::Advanced { .. } => 0,
            StepOutcome::Counterexample { .. } => 1,
            StepOutcome::Breach { .. } => 4,
        }
    }
}

/// One induction step from level `u` to `u - 1`.
pub fn step_down(state: &ReductionState, sc: &SteppedColoring, template: &TemplateFamily) -> Result<StepOutcome> {
    let (k, u, n) = (state.k, state.u, state.n);
    let params = &state.params;
    if u < 3 {
        return Err(Error::domain(format!("step_down needs u >= 3, state is at u = {u}")));
    }
    if sc.k < u {
        return Err(Error::domain(format!("coloring has k = {}, state needs {u}", sc.k)));
    }
    let mut report = PropertyReport::new(format!("stepdown-u{u}"));
    let mut breaches: Vec<String> = Vec::new();
    let invariants = state.audit_invariants(template);
    report.absorb("state", &invariants);
    if !invariants.passed() {
        breaches.push(invariants.counterexample.clone().unwrap_or_default());
    }

    let sorted = state.sorted_vertices();
    let xs: Vec<NonNegInt> = sorted.iter().map(|&v| state.value_of(v).expect("vertex of U").clone()).collect();
    let b_u = state.embedding.cap();
    let trace = run_interval_procedure(&xs, params, b_u).map_err(|e| e.at("interval procedure"))?;
    report.absorb("trace", &trace.audit(params, b_u));

    let b_next = params.cap(u - 1, n);
    let sel = find_triple(&trace, params, b_next).map_err(|e| e.at("triple"))?;
    report.absorb("triple", &sel.audit(params));
    let layout = Layout::new(state, &sel);

    let pruning = pruned(state, &sel, template, &layout).map_err(|e| e.at("prune"))?;
    report.absorb("prune", &pruning.report);
    if !pruning.report.passed() {
        breaches.push(pruning.report.counterexample.clone().unwrap_or_default());
    }

    report.record("h_e.mono", mono_on_gadget(state, sc, template).map_err(|e| e.at("gadget audit"))?);

    let sep = separation(&pruning, &sel, state, template, sc, &layout).map_err(|e| e.at("separation"))?;
    report.absorb("separation", &sep.report);
    if sep.violations > 0 {
        report.record("outcome", "counterexample");
        report.counterexample = sep.report.counterexample.clone();
        return Ok(StepOutcome::Counterexample { separation: sep, report });
    }

    let n_u = xs.len();
    let big = sel.big_mass();
    let big_bound = n_u as f64 / params.big_mass_divisor as f64;
    report.record("big_mass.observed", big).record("big_mass.bound", format!("{big_bound:.3}"));
    if big as f64 > big_bound {
        breaches.push(format!("big blocks hold {big} > {big_bound:.3} positions"));
    }

    let n_next = params.level_size(u - 1, n);
    let small_positions: Vec<usize> = sel
        .s
        .iter()
        .zip(&sel.small)
        .filter(|(_, &s)| s)
        .flat_map(|(&(a, b), _)| a..=b)
        .take(n_next)
        .collect();
    let w_positions: Vec<usize> = (sel.i3.0..=sel.i3.1).take(n_next).collect();
    report
        .record("U_next.size", small_positions.len())
        .record("W_next.size", w_positions.len())
        .record("level_size", n_next);
    if small_positions.len() < n_next {
        breaches.push(format!("small blocks hold {} < {n_next} positions for U^{}", small_positions.len(), u - 1));
    }
    if w_positions.len() < n_next {
        breaches.push(format!("I3 has {} < {n_next} positions for W_{u}", w_positions.len()));
    }

    let universe = Universe::from_params(params);
    let next = build_next_embedding(&sel, u, &universe, &small_positions).map_err(|e| e.at("next embedding"))?;
    report.absorb("next", &next.report);

    let chains = chain_audit(sc, u, &sel, &layout, &next.positions, &next.embedding, &w_positions, state)
        .map_err(|e| e.at("color determination"))?;
    report.absorb("chains", &chains);
    if !chains.passed() {
        return Err(Error::defect(chains.counterexample.unwrap_or_default()).at("color determination"));
    }

    // Assemble the level-(u-1) state in vertex order.
    let mut pairs: Vec<(usize, u64)> = next
        .positions
        .iter()
        .zip(next.embedding.values())
        .map(|(&p, x)| (layout.order[p - 1], u64::try_from(x).expect("delta fits")))
        .collect();
    pairs.sort_unstable();
    let vertices: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    let values: Vec<u64> = pairs.iter().map(|p| p.1).collect();
    let mut w_next: Vec<usize> = w_positions.iter().map(|&p| layout.order[p - 1]).collect();
    w_next.sort_unstable();
    let in_next = |v: &usize| vertices.binary_search(v).is_ok();
    let blocks: Vec<Vec<usize>> = pruning
        .blocks
        .iter()
        .zip(&template.blocks)
        .map(|(kept, full)| {
            let inside = full.iter().filter(|v| in_next(v)).count();
            if correlated_count(inside, vertices.len(), full.len(), n, params.epsilon) {
                Vec::new()
            } else {
                kept.iter().copied().filter(|v| in_next(v)).collect()
            }
        })
        .collect();
    let mut witness_sets = state.witness_sets.clone();
    witness_sets.insert(0, (u, w_next));
    let mut audit = vec![
        ("from_u".to_string(), u.to_string()),
        ("case".to_string(), sel.case.to_string()),
        ("t".to_string(), format!("{},{},{}", sel.t[0], sel.t[1], sel.t[2])),
    ];
    audit.push(("breaches".to_string(), breaches.len().to_string()));
    let next_state = ReductionState {
        k,
        u: u - 1,
        n,
        params: params.clone(),
        vertices,
        embedding: crate::embedding::CappedEmbedding::from_u64(&values, b_next)?,
        witness_sets,
        blocks,
        steps: trace.steps.clone(),
        audit,
    };
    let next_invariants = next_state.audit_invariants(template);
    report.absorb("next_state", &next_invariants);
    if !next_invariants.passed() {
        breaches.push(next_invariants.counterexample.clone().unwrap_or_default());
    }

    report.record("breaches", breaches.len());
    for (i, b) in breaches.iter().enumerate() {
        report.record(format!("breach{i}"), b);
    }
    if breaches.is_empty() {
        report.record("outcome", "advanced");
        Ok(StepOutcome::Advanced { next: next_state, report })
    } else {
        report.record("outcome", "inequality-breach");
        report.fail(format!("inequality breach: {}", breaches[0]));
        Ok(StepOutcome::Breach { next: Some(next_state), report })
    }
}

/// Whether `h^u` gives all edges of `H_E^u` one color: the color, `none`
/// for an edgeless gadget, or `mixed`.
fn mono_on_gadget(state: &ReductionState, sc: &SteppedColoring, template: &TemplateFamily) -> Result<String> {
    if template.copies.len() != template.blocks.len() {
        return Err(Error::domain("template carries no copies of F"));
    }
    let h_e = gadget_family(state.u, state.n, &template.copies, &state.blocks)?;
    let mut color: Option<FourColor> = None;
    for e in h_e.edges() {
        let values: Vec<NonNegInt> = e
            .iter()
            .map(|&v| state.value_of(v).cloned().ok_or_else(|| Error::defect(format!("block vertex {v} outside U"))))
            .collect::<Result<_>>()?;
        let c = sc.phi(&values)?;
        if *color.get_or_insert(c) != c {
            return Ok("mixed".into());
        }
    }
    Ok(color.map_or("none".into(), |c| c.to_string()))
}

/// Chains through `u - 1` distinct small blocks plus a vertex of `W_u`: the
/// delta chain must equal the new values, decrease strictly and stay
/// nonzero, and the colors must determine each other.
#[allow(clippy::too_many_arguments)]
fn chain_audit(
    sc: &SteppedColoring,
    u: usize,
    sel: &super::TripleSelection,
    layout: &Layout,
    positions: &[usize],
    emb: &crate::embedding::CappedEmbedding,
    w_positions: &[usize],
    state: &ReductionState,
) -> Result<PropertyReport> {
    let mut report = PropertyReport::new("chains");
    let block_of = |i: usize| sel.s.iter().position(|&(a, b)| (a..=b).contains(&i)).expect("small block");
    // First kept position of each block, with its value.
    let mut heads: Vec<(usize, u64)> = Vec::new();
    let mut last_block = usize::MAX;
    for (&p, x) in positions.iter().zip(emb.values()) {
        let b = block_of(p);
        if b != last_block {
            heads.push((p, u64::try_from(x).expect("delta fits")));
            last_block = b;
        }
    }
    let view = &sel.view;
    let mut checked = 0;
    if heads.len() + 1 >= u && !w_positions.is_empty() {
        for start in 0..=(heads.len() + 1 - u) {
            if checked == CHAIN_SAMPLES {
                break;
            }
            let mut chain: Vec<(usize, u64)> = heads[start..start + u - 1].to_vec();
            let w = w_positions[start % w_positions.len()];
            chain.push((w, 0));
            for i in 0..u - 1 {
                let d = delta(view.x(chain[i].0), view.x(chain[i + 1].0));
                if d != chain[i].1 || d == 0 {
                    report.fail(format!(
                        "delta between positions {} and {} is {d}, value is {}",
                        chain[i].0,
                        chain[i + 1].0,
                        chain[i].1
                    ));
                    return Ok(report);
                }
            }
            let values: Vec<NonNegInt> = chain
                .iter()
                .map(|&(p, _)| state.value_of(layout.order[p - 1]).expect("vertex of U").clone())
                .collect();
            let rep = check_color_determination(sc, u, &values)?;
            if !rep.passed() {
                report.absorb(&format!("chain{checked}"), &rep);
                return Ok(report);
            }
            checked += 1;
        }
    }
    report.record("checked", checked);
    Ok(report)
}
