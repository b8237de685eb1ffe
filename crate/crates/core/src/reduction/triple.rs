use std::fmt;

use num_traits::One;

use super::{Direction, StepRecord, StepTrace};
use crate::error::{Error, Result};
use crate::numeric::NonNegInt;
use crate::params::ParamSet;
use crate::report::PropertyReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    RightSteps,
    LeftSteps,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::RightSteps => "right_steps",
            Case::LeftSteps => "left_steps",
        })
    }
}

/// Three step indices with large gaps, in a view where they are right steps.
///
/// In the left case `view` is the mirrored trace: position `i` becomes
/// `n + 1 - i` and values are complemented below their common bit length,
/// which keeps every delta. All derived sets refer to view positions.
#[derive(Clone, Debug)]
pub struct TripleSelection {
    pub case: Case,
    pub view: StepTrace,
    /// `positions[i - 1]` is the original position of view position `i`.
    pub positions: Vec<usize>,
    /// `(t'_i, direction of step t'_i - 1)` for the five rounds, unmirrored.
    pub rounds: Vec<(usize, Direction)>,
    pub t: [usize; 3],
    pub i1: (usize, usize),
    pub i2: (usize, usize),
    pub i3: (usize, usize),
    /// Right steps of the view in `[t1, t2)`.
    pub r: Vec<usize>,
    /// `S_j = [l_j, p_j]` for each `j` in `r`.
    pub s: Vec<(usize, usize)>,
    /// `|S_j| <= b_next`.
    pub small: Vec<bool>,
    pub b_next: usize,
}

impl TripleSelection {
    /// Total size of the big blocks.
    pub fn big_mass(&self) -> usize {
        self.s.iter().zip(&self.small).filter(|(_, &s)| !s).map(|(&(a, b), _)| b - a + 1).sum()
    }

    /// Checks the gaps, the block partition of `I_2` and the small flags.
    pub fn audit(&self, params: &ParamSet) -> PropertyReport {
        let n = self.view.n();
        let gap = params.gap_divisor as usize;
        let mut rep = PropertyReport::new("triple");
        rep.record("case", self.case)
            .record("t", format!("{},{},{}", self.t[0], self.t[1], self.t[2]))
            .record("I1", format!("[{},{}]", self.i1.0, self.i1.1))
            .record("I2", format!("[{},{}]", self.i2.0, self.i2.1))
            .record("I3", format!("[{},{}]", self.i3.0, self.i3.1))
            .record("blocks", self.s.len())
            .record("small_blocks", self.small.iter().filter(|&&s| s).count())
            .record("big_mass", self.big_mass());
        let [t1, t2, t3] = self.t;
        if !(1 < t1 && t1 < t2 && t2 < t3 && t3 <= self.view.t()) {
            rep.fail(format!("indices {t1}, {t2}, {t3} not increasing within (1, T]"));
            return rep;
        }
        let l = |j: usize| self.view.step(j).l;
        for (a, b) in [(1, l(t1)), (l(t1), l(t2)), (l(t2), l(t3))] {
            if (b - a) * gap < n {
                rep.fail(format!("gap {a}..{b} below n/{gap}"));
            }
        }
        for &t in &self.t {
            if self.view.step(t - 1).dir != Some(Direction::Right) {
                rep.fail(format!("step {} is not a right step", t - 1));
            }
        }
        let mut next = self.i2.0;
        for &(a, b) in &self.s {
            if a != next || b < a {
                rep.fail(format!("block [{a},{b}] breaks the partition of I2"));
            }
            next = b + 1;
        }
        if next != self.i2.1 + 1 {
            rep.fail("blocks do not cover I2");
        }
        for (&(a, b), &small) in self.s.iter().zip(&self.small) {
            if small != (b - a < self.b_next) {
                rep.fail(format!("block [{a},{b}] misclassified"));
            }
        }
        rep
    }
}

/// The five-round selection; the right-steps case wins when both apply.
pub fn find_triple(trace: &StepTrace, params: &ParamSet, b_next: usize) -> Result<TripleSelection> {
    if trace.t() < 2 {
        return Err(Error::infeasible("trace has a single interval, no steps to select"));
    }
    let n = trace.n();
    let gap = params.gap_divisor as usize;
    let (mut a, mut b) = (1usize, n);
    let mut rounds = Vec::with_capacity(5);
    for round in 1..=5 {
        let found = (1..=trace.t()).find(|&j| {
            let s = trace.step(j);
            (s.l > a && (s.l - a) * gap >= n) || (s.r < b && (b - s.r) * gap >= n)
        });
        let Some(j) = found else {
            return Err(Error::infeasible(format!(
                "round {round}: no step moves an endpoint by n/{gap} (n = {n}, T = {})",
                trace.t()
            )));
        };
        let s = trace.step(j);
        let dir = if s.l > a { Direction::Right } else { Direction::Left };
        rounds.push((j, dir));
        (a, b) = (s.l, s.r);
    }
    let pick = |d: Direction| -> Option<[usize; 3]> {
        let ts: Vec<usize> = rounds.iter().filter(|r| r.1 == d).map(|r| r.0).take(3).collect();
        (ts.len() == 3).then(|| [ts[0], ts[1], ts[2]])
    };
    let (case, t, view, positions) = match (pick(Direction::Right), pick(Direction::Left)) {
        (Some(t), _) => (Case::RightSteps, t, trace.clone(), (1..=n).collect()),
        (None, Some(t)) => (Case::LeftSteps, t, mirror(trace), (1..=n).rev().collect()),
        (None, None) => unreachable!("five rounds split between two directions"),
    };
    Ok(derive(case, view, positions, rounds, t, b_next))
}

fn derive(
    case: Case,
    view: StepTrace,
    positions: Vec<usize>,
    rounds: Vec<(usize, Direction)>,
    t: [usize; 3],
    b_next: usize,
) -> TripleSelection {
    let l = |j: usize| view.step(j).l;
    let (i1, i2, i3) = ((1, l(t[0]) - 1), (l(t[0]), l(t[1]) - 1), (l(t[1]), l(t[2]) - 1));
    let r: Vec<usize> = (t[0]..t[1]).filter(|&j| view.step(j).dir == Some(Direction::Right)).collect();
    let s: Vec<(usize, usize)> = r.iter().map(|&j| (view.step(j).l, view.step(j).p.expect("right step"))).collect();
    let small = s.iter().map(|&(a, b)| b - a < b_next).collect();
    TripleSelection { case, view, positions, rounds, t, i1, i2, i3, r, s, small, b_next }
}

/// Reverses positions and complements values so that deltas are kept and
/// left steps become right steps.
fn mirror(trace: &StepTrace) -> StepTrace {
    let n = trace.n();
    let bits = trace.xs.iter().map(|x| x.bits()).max().unwrap_or(0);
    let mask = (NonNegInt::one() << bits) - NonNegInt::one();
    let xs = trace.xs.iter().rev().map(|x| &mask - x).collect();
    let deltas = trace.deltas.iter().rev().copied().collect();
    let steps = trace
        .steps
        .iter()
        .map(|s| StepRecord {
            l: n + 1 - s.r,
            r: n + 1 - s.l,
            p: s.p.map(|p| n - p),
            dir: s.dir.map(Direction::flip),
            ambiguous: s.ambiguous,
        })
        .collect();
    StepTrace { xs, deltas, steps }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::delta_vector;
    use crate::reduction::run_interval_procedure;

    fn trace(xs: &[u64]) -> StepTrace {
        let xs: Vec<NonNegInt> = xs.iter().map(|&x| x.into()).collect();
        run_interval_procedure(&xs, &ParamSet::desk(3, 3), 1).unwrap()
    }

    #[test]
    fn consecutive_integers_are_right_heavy() {
        let t = trace(&(0..64).collect::<Vec<_>>());
        let sel = find_triple(&t, &ParamSet::desk(3, 3), 10).unwrap();
        assert_eq!(sel.case, Case::RightSteps);
        assert_eq!(sel.t, [2, 3, 4]);
        assert_eq!((sel.i1, sel.i2, sel.i3), ((1, 32), (33, 48), (49, 56)));
        assert_eq!(sel.s, vec![(33, 48)]);
        assert!(sel.audit(&ParamSet::desk(3, 3)).passed());
    }

    #[test]
    fn reversed_profile_takes_left_case() {
        // Deltas increase along the sequence: every pivot sits at the right end.
        let mut xs = vec![0u64];
        for d in 1..=40u32 {
            let last = *xs.last().unwrap();
            xs.push((last >> (d - 1) | 1) << (d - 1));
        }
        let t = trace(&xs);
        let sel = find_triple(&t, &ParamSet::desk(3, 3), 10).unwrap();
        assert_eq!(sel.case, Case::LeftSteps);
        assert!(sel.audit(&ParamSet::desk(3, 3)).passed());
        let d = delta_vector(&sel.view.xs).unwrap();
        assert_eq!(d.entries(), sel.view.deltas.as_slice());
        assert!(sel.view.xs.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn single_interval_is_an_error() {
        let mut p = ParamSet::desk(3, 3);
        p.stop_divisor = 1;
        let xs: Vec<NonNegInt> = vec![0u64.into(), 1u64.into()];
        let t = run_interval_procedure(&xs, &p, 1).unwrap();
        assert!(matches!(find_triple(&t, &p, 1), Err(Error::Infeasible(_))));
    }
}
