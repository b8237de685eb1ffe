use std::collections::BTreeMap;

use super::TripleSelection;
use crate::coloring::{phi2, FourColor, SteppedColoring, TwoColor};
use crate::embedding::CappedEmbedding;
use crate::error::{Error, Result};
use crate::numeric::{delta, NonNegInt, Universe};
use crate::report::PropertyReport;

/// `h^{u-1}` on the chosen view positions.
#[derive(Clone, Debug)]
pub struct NextEmbedding {
    /// View positions of `U^{u-1}`, increasing.
    pub positions: Vec<usize>,
    /// Aligned with `positions`; the cap is `b_{u-1}`.
    pub embedding: CappedEmbedding,
    pub report: PropertyReport,
}

/// `h^{u-1}(i) = delta(x_i, x*)` with `x* = x_{l_{t2}}`, with every check
/// the construction relies on. Any failure is an error naming the
/// offending positions.
pub fn build_next_embedding(
    sel: &TripleSelection,
    u: usize,
    universe: &Universe,
    u_next: &[usize],
) -> Result<NextEmbedding> {
    let view = &sel.view;
    let star = view.step(sel.t[1]).l;
    let h = |i: usize| delta(view.x(i), view.x(star));
    let block_of = |i: usize| sel.s.iter().position(|&(a, b)| (a..=b).contains(&i));
    let mut report = PropertyReport::new("next-embedding");
    report.record("x_star_position", star).record("size", u_next.len()).record("cap", sel.b_next);

    if let Some(w) = u_next.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::domain(format!("positions {} and {} not increasing", w[0], w[1])));
    }
    for &i in u_next {
        match block_of(i) {
            Some(b) if sel.small[b] => {}
            _ => return Err(Error::domain(format!("position {i} is not in a small block"))),
        }
    }

    // Containment for every right step, not only the kept positions.
    for (&j, &(a, b)) in sel.r.iter().zip(&sel.s) {
        let lo = view.delta(view.step(j).p.expect("right step"));
        let hi = view.delta(view.step(j).l - 1);
        for i in a..=b {
            let v = h(i);
            if v < lo || v + 1 > hi {
                return Err(Error::defect(format!(
                    "h({i}) = {v} outside [{lo}, {}] for the block of step {j}",
                    hi.saturating_sub(1)
                )));
            }
        }
    }

    // h is non-increasing in the position, so comparing the last position of
    // one small block with the first of the next small block suffices.
    let small: Vec<usize> = (0..sel.s.len()).filter(|&b| sel.small[b]).collect();
    for pair in small.windows(2) {
        let (i, i2) = (sel.s[pair[0]].1, sel.s[pair[1]].0);
        if h(i) <= h(i2) {
            return Err(Error::defect(format!(
                "order reversal fails: h({i}) = {} <= h({i2}) = {}",
                h(i),
                h(i2)
            )));
        }
    }

    let values: Vec<u64> = u_next.iter().map(|&i| h(i)).collect();
    for (&i, &v) in u_next.iter().zip(&values) {
        if !universe.contains_u64(u - 1, v) {
            return Err(Error::defect(format!("h({i}) = {v} outside [0, M_{})", u - 1)));
        }
    }
    let mut mult: BTreeMap<u64, usize> = BTreeMap::new();
    for &v in &values {
        *mult.entry(v).or_insert(0) += 1;
    }
    let worst = mult.values().copied().max().unwrap_or(0);
    report.record("max_multiplicity", worst).record("distinct_values", mult.len());
    if worst > sel.b_next {
        let (v, _) = mult.iter().find(|(_, &c)| c == worst).expect("max present");
        let hits: Vec<usize> = u_next.iter().zip(&values).filter(|(_, &x)| x == *v).map(|(&i, _)| i).take(2).collect();
        return Err(Error::defect(format!(
            "value {v} used {worst} > b = {} times, e.g. positions {:?}",
            sel.b_next, hits
        )));
    }
    Ok(NextEmbedding {
        positions: u_next.to_vec(),
        embedding: CappedEmbedding::from_u64(&values, sel.b_next)?,
        report,
    })
}

/// Compares `phi^(u)` on a chain `x_1, .., x_u` (strictly monotone values,
/// strictly decreasing nonzero deltas along the chain) with `phi^(u-1)` on
/// its delta sequence; for `u = 3` through the red/blue table.
pub fn check_color_determination(sc: &SteppedColoring, u: usize, chain: &[NonNegInt]) -> Result<PropertyReport> {
    if u < 3 || u > sc.k || chain.len() != u {
        return Err(Error::domain(format!("need a chain of u = {u} values with 3 <= u <= {}", sc.k)));
    }
    let ascending = chain[0] < chain[1];
    if !chain.windows(2).all(|w| (w[0] < w[1]) == ascending && w[0] != w[1]) {
        return Err(Error::domain("chain values are not strictly monotone"));
    }
    let ds: Vec<u64> = chain.windows(2).map(|w| delta(&w[0], &w[1])).collect();
    if !ds.windows(2).all(|w| w[0] > w[1]) || ds.last() == Some(&0) {
        return Err(Error::domain(format!("delta chain {ds:?} is not strictly decreasing and nonzero")));
    }
    let lhs = sc.phi(chain)?;
    let rhs = if u == 3 {
        // Sorted ascending the pair reads (d1, d2) with d1 > d2; a descending
        // chain sorts to the opposite order.
        match (phi2(&sc.base, ds[0], ds[1])?, ascending) {
            (TwoColor::Red, true) => FourColor::C3,
            (TwoColor::Blue, true) => FourColor::C4,
            (TwoColor::Red, false) => FourColor::C1,
            (TwoColor::Blue, false) => FourColor::C2,
        }
    } else {
        let lower: Vec<NonNegInt> = ds.iter().map(|&d| NonNegInt::from(d)).collect();
        sc.phi(&lower)?
    };
    let mut report = PropertyReport::new("color-determination");
    report
        .record("u", u)
        .record("deltas", format!("{ds:?}"))
        .record("phi_u", lhs)
        .record("phi_lower", rhs);
    if lhs != rhs {
        report.fail(format!("phi^({u}) = {lhs} but the delta sequence gives {rhs}"));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ParamSet;

    #[test]
    fn three_chain_uses_table() {
        let sc = SteppedColoring::generate(ParamSet::desk(5, 3), 4).unwrap();
        // deltas (3, 1): 0 -> 4 -> 5
        let chain: Vec<NonNegInt> = [0u64, 4, 5].iter().map(|&x| x.into()).collect();
        let rep = check_color_determination(&sc, 3, &chain).unwrap();
        assert!(rep.passed(), "{rep}");
        let red = phi2(&sc.base, 3, 1).unwrap() == TwoColor::Red;
        assert_eq!(sc.phi(&chain).unwrap() == FourColor::C3, red);
    }

    #[test]
    fn four_chain_recurses() {
        let sc = SteppedColoring::generate(ParamSet::desk(5, 3), 4).unwrap();
        // deltas (5, 3, 1): 0 -> 16 -> 20 -> 21
        let chain: Vec<NonNegInt> = [0u64, 16, 20, 21].iter().map(|&x| x.into()).collect();
        assert!(check_color_determination(&sc, 4, &chain).unwrap().passed());
        let bad: Vec<NonNegInt> = [0u64, 1, 4, 16].iter().map(|&x| x.into()).collect();
        assert!(check_color_determination(&sc, 4, &bad).is_err());
    }
}
