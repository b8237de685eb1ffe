//! The induction step: interval splitting, triple selection, pruning,
//! separation witnesses and the next-level embedding.
//!
//! Positions are 1-based as in the argument being executed: `x_1 <= .. <= x_n`
//! and `delta_i = delta(x_i, x_{i+1})` for `i` in `[1, n - 1]`.

mod next;
mod prune;
pub mod regression;
mod state;
mod step;
mod triple;

pub use next::{build_next_embedding, check_color_determination, NextEmbedding};
pub use prune::{check_separation, prune_blocks, Pruning, Separation, Witness};
pub use state::ReductionState;
pub use step::{step_down, StepOutcome};
pub use triple::{find_triple, Case, TripleSelection};

use std::fmt;

use crate::error::{Error, Result};
use crate::numeric::{delta, NonNegInt};
use crate::params::ParamSet;
use crate::report::PropertyReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Left,
    Right,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Left => "left",
            Direction::Right => "right",
        })
    }
}

/// One interval `[l, r]`; `p` and `dir` are absent on the final interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub l: usize,
    pub r: usize,
    pub p: Option<usize>,
    pub dir: Option<Direction>,
    /// The argmax was not unique; only allowed while `r - l <= b_u`.
    pub ambiguous: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepTrace {
    pub xs: Vec<NonNegInt>,
    pub deltas: Vec<u64>,
    pub steps: Vec<StepRecord>,
}

impl StepTrace {
    pub fn n(&self) -> usize {
        self.xs.len()
    }

    /// Number of intervals `T`.
    pub fn t(&self) -> usize {
        self.steps.len()
    }

    /// `delta_i`, 1-based.
    pub fn delta(&self, i: usize) -> u64 {
        self.deltas[i - 1]
    }

    /// `x_i`, 1-based.
    pub fn x(&self, i: usize) -> &NonNegInt {
        &self.xs[i - 1]
    }

    /// Step `j`, 1-based.
    pub fn step(&self, j: usize) -> &StepRecord {
        &self.steps[j - 1]
    }

    /// Checks nesting, the half-length bound, the final length and the
    /// argmax rule against a naive rescan.
    pub fn audit(&self, params: &ParamSet, b_u: usize) -> PropertyReport {
        let n = self.n();
        let stop = params.stop_divisor as usize;
        let mut rep = PropertyReport::new("interval-procedure");
        rep.record("n", n).record("T", self.t()).record("b_u", b_u);
        let Some(first) = self.steps.first() else {
            rep.fail("empty trace");
            return rep;
        };
        if (first.l, first.r) != (1, n) {
            rep.fail(format!("first interval is [{}, {}]", first.l, first.r));
        }
        for (j, pair) in self.steps.windows(2).enumerate() {
            let (a, b) = (pair[0], pair[1]);
            let j = j + 1;
            if !(a.l <= b.l && b.r <= a.r && (b.l, b.r) != (a.l, a.r)) {
                rep.fail(format!("step {j}: [{}, {}] does not nest in [{}, {}]", b.l, b.r, a.l, a.r));
            }
            // r' - l' >= (r - l)/2 - 1, kept in integers
            if 2 * (b.r - b.l) + 2 < a.r - a.l {
                rep.fail(format!("step {j}: interval shrank below half"));
            }
            let Some(p) = a.p else {
                rep.fail(format!("step {j} has no pivot but is not last"));
                continue;
            };
            let window = &self.deltas[a.l - 1..a.r - 1];
            let max = *window.iter().max().expect("nonempty");
            let hits = window.iter().filter(|&&d| d == max).count();
            let first_hit = a.l + window.iter().position(|&d| d == max).expect("max present");
            if p != first_hit {
                rep.fail(format!("step {j}: pivot {p}, naive scan gives {first_hit}"));
            }
            if hits > 1 && a.r - a.l > b_u {
                rep.fail(format!("step {j}: argmax not unique on [{}, {}]", a.l, a.r));
            }
            let want = if p - a.l >= a.r - p { Direction::Left } else { Direction::Right };
            let next = match want {
                Direction::Left => (a.l, p),
                Direction::Right => (p + 1, a.r),
            };
            if a.dir != Some(want) || (b.l, b.r) != next {
                rep.fail(format!("step {j}: direction or successor differs from the rule"));
            }
        }
        let last = self.steps.last().expect("nonempty");
        if last.p.is_some() || (last.r - last.l) * stop >= n {
            rep.fail("final interval does not meet the stop condition");
        }
        // Element count r - l + 1 against n / (2 stop).
        let final_len = last.r - last.l + 1;
        rep.record("final_length", final_len);
        if final_len * 2 * stop < n {
            rep.fail(format!("final length {final_len} below n/(2 stop)"));
        }
        rep
    }
}

/// Runs the splitting procedure on sorted `xs` until `(r - l) * stop < n`.
pub fn run_interval_procedure(xs: &[NonNegInt], params: &ParamSet, b_u: usize) -> Result<StepTrace> {
    let n = xs.len();
    if n == 0 {
        return Err(Error::domain("empty sequence"));
    }
    if let Some(i) = xs.windows(2).position(|w| w[0] > w[1]) {
        return Err(Error::domain(format!("values not sorted at positions {} and {}", i + 1, i + 2)));
    }
    let deltas: Vec<u64> = xs.windows(2).map(|w| delta(&w[0], &w[1])).collect();
    let stop = params.stop_divisor as usize;
    let mut steps = Vec::new();
    let (mut l, mut r) = (1usize, n);
    loop {
        if (r - l) * stop < n {
            steps.push(StepRecord { l, r, p: None, dir: None, ambiguous: false });
            break;
        }
        let window = &deltas[l - 1..r - 1];
        let max = *window.iter().max().expect("r > l");
        let offset = window.iter().position(|&d| d == max).expect("max present");
        let ambiguous = window[offset + 1..].contains(&max);
        if ambiguous && r - l > b_u {
            return Err(Error::defect(format!(
                "argmax of delta over [{l}, {}] is not unique while r - l = {} > b_u = {b_u}",
                r - 1,
                r - l
            )));
        }
        let p = l + offset;
        let dir = if p - l >= r - p { Direction::Left } else { Direction::Right };
        steps.push(StepRecord { l, r, p: Some(p), dir: Some(dir), ambiguous });
        (l, r) = match dir {
            Direction::Left => (l, p),
            Direction::Right => (p + 1, r),
        };
    }
    Ok(StepTrace { xs: xs.to_vec(), deltas, steps })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(xs: &[u64]) -> Vec<NonNegInt> {
        xs.iter().map(|&x| NonNegInt::from(x)).collect()
    }

    fn params(stop: u64) -> ParamSet {
        let mut p = ParamSet::desk(3, 3);
        p.stop_divisor = stop;
        p
    }

    #[test]
    fn eight_values_first_step() {
        let t = run_interval_procedure(&big(&[0, 1, 2, 3, 4, 5, 6, 7]), &params(8), 1).unwrap();
        assert_eq!(t.deltas, vec![1, 2, 1, 3, 1, 2, 1]);
        let s = t.step(1);
        assert_eq!((s.p, s.dir), (Some(4), Some(Direction::Right)));
        assert_eq!((t.step(2).l, t.step(2).r), (5, 8));
        assert!(t.audit(&params(8), 1).passed());
    }

    #[test]
    fn pair_below_threshold() {
        let t = run_interval_procedure(&big(&[0, 1]), &params(1), 1).unwrap();
        assert_eq!(t.t(), 1);
        assert!(t.step(1).p.is_none());
    }

    #[test]
    fn unsorted_and_ties() {
        assert!(run_interval_procedure(&big(&[3, 1]), &params(8), 1).is_err());
        // Equal endpoints give a flat delta profile with repeated maxima.
        let flat = big(&[5, 5, 5, 5, 5, 5, 5, 5]);
        assert!(matches!(run_interval_procedure(&flat, &params(8), 1), Err(Error::Defect(_))));
        assert!(run_interval_procedure(&flat, &params(8), 8).unwrap().steps[0].ambiguous);
    }
}
