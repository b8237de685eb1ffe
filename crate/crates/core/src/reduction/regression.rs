//! Fixed instances for the step: one that must end in a counterexample and
//! one that must advance.

use super::ReductionState;
use crate::coloring::SteppedColoring;
use crate::error::Result;
use crate::graph::Graph;
use crate::numeric::NonNegInt;
use crate::params::{ParamSet, Rational};
use crate::template::TemplateFamily;

pub const COLORING_SEED: u64 = 7;

/// `u = k = 3`, 64 vertices with `h(v) = v`, one block holding everything.
/// In the block's graph, vertices 32 and 33 are both joined to 0, 1, 2 and to
/// 48, 49, 50; they survive pruning and share the step block `[33, 48]`.
pub fn counterexample_instance() -> Result<(ReductionState, SteppedColoring, TemplateFamily)> {
    let params = ParamSet::desk(3, 3);
    let n = 64;
    let mut edges = Vec::new();
    for hub in [32, 33] {
        for leaf in [0, 1, 2, 48, 49, 50] {
            edges.push((leaf, hub));
        }
    }
    let f = Graph::from_edges(n, edges)?;
    let template = TemplateFamily {
        n,
        s: n,
        eps: params.epsilon,
        cap: 1,
        blocks: vec![(0..n).collect()],
        copies: vec![f],
        log: Vec::new(),
    };
    let values = (0..n as u64).map(NonNegInt::from).collect();
    let state = ReductionState::initial(&params, values, &template)?;
    let sc = SteppedColoring::generate(params, COLORING_SEED)?;
    Ok((state, sc, template))
}

/// `u = k = 3` on 4096 vertices with no blocks. The first 31 consecutive
/// deltas fall from 44 to 14 and the rest of the values are consecutive, so
/// the selected steps are 5, 9 and 13 and the next level is positions 5..8.
pub fn advanced_instance() -> Result<(ReductionState, SteppedColoring, TemplateFamily)> {
    let mut params = ParamSet::desk(3, 1);
    params.alpha_base = 1024;
    params.base_exponent_coeff = Rational::from_integer(6);
    let n = 4096usize;
    let mut xs = vec![0u64];
    for i in 1..=31u32 {
        let last = *xs.last().expect("seeded");
        xs.push(last | 1 << (44 - i));
    }
    let top = *xs.last().expect("seeded");
    xs.extend((1..=(n - 32) as u64).map(|t| top + t));
    let template = TemplateFamily {
        n,
        s: params.block_size(),
        eps: params.epsilon,
        cap: 0,
        blocks: Vec::new(),
        copies: Vec::new(),
        log: Vec::new(),
    };
    let state = ReductionState::initial(&params, xs.into_iter().map(NonNegInt::from).collect(), &template)?;
    let sc = SteppedColoring::generate(params, COLORING_SEED)?;
    Ok((state, sc, template))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::FourColor;
    use crate::reduction::{step_down, StepOutcome};

    #[test]
    fn crafted_violation_gives_counterexample() {
        let (state, sc, template) = counterexample_instance().unwrap();
        let out = step_down(&state, &sc, &template).unwrap();
        let StepOutcome::Counterexample { separation, .. } = &out else {
            panic!("{}", out.report());
        };
        let w = &separation.witnesses[0];
        assert_eq!((w.v, w.w, w.y), (32, 33, 0));
        assert_eq!(w.e1, vec![0, 32, 33]);
        assert_eq!(w.e2, vec![32, 33, 48]);
        assert!(matches!(w.c1, FourColor::C3 | FourColor::C4));
        assert!(matches!(w.c2, FourColor::C1 | FourColor::C2));
        assert_eq!(w.relations, [true; 4]);
        assert_eq!(out.exit_code(), 1);
    }

    #[test]
    fn edgeless_state_advances() {
        let (state, sc, template) = advanced_instance().unwrap();
        let out = step_down(&state, &sc, &template).unwrap();
        let StepOutcome::Advanced { next, .. } = &out else {
            panic!("{}", out.report());
        };
        assert_eq!(next.u, 2);
        assert_eq!(next.vertices, vec![4, 5, 6, 7]);
        let values: Vec<u64> = next.embedding.values().iter().map(|x| u64::try_from(x).unwrap()).collect();
        assert_eq!(values, vec![40, 39, 38, 37]);
        assert_eq!(next.witness_sets, vec![(3, vec![8, 9, 10, 11])]);
        let text = next.to_text();
        assert_eq!(ReductionState::from_text(&text).unwrap().to_text(), text);
    }
}
