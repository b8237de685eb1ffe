//! Bit-level δ arithmetic, the tower function and the color-universe sizes.
//!
//! Bits are 1-indexed: `bit(x, i)` is the coefficient of `2^(i-1)` in `x`.
//! `δ(x, y)` is the highest 1-indexed position where `x` and `y` differ,
//! which is exactly the bit length of `x XOR y`; `δ(x, x) = 0`.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::params::ParamSet;
use crate::report::PropertyReport;

pub type NonNegInt = BigUint;

/// Default ceiling, in bits, on any materialized universe size or tower value.
pub const DEFAULT_BIT_BUDGET: u64 = 1 << 24;

pub fn bit(x: &NonNegInt, i: u64) -> Result<u8> {
    if i == 0 {
        return Err(Error::domain("bit index must be at least 1"));
    }
    Ok(x.bit(i - 1) as u8)
}

pub fn delta(x: &NonNegInt, y: &NonNegInt) -> u64 {
    (x ^ y).bits()
}

#[inline]
pub fn delta_u64(x: u64, y: u64) -> u32 {
    64 - (x ^ y).leading_zeros()
}

/// Consecutive δ values of a sorted multiset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaVector(pub Vec<u64>);

impl DeltaVector {
    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn is_monotone(&self) -> bool {
        let d = &self.0;
        d.windows(2).all(|w| w[0] <= w[1]) || d.windows(2).all(|w| w[0] >= w[1])
    }

    /// Every 0-based index attaining the maximum.
    pub fn argmax_all(&self) -> Vec<usize> {
        let max = self.0.iter().copied().max().unwrap_or(0);
        (0..self.0.len()).filter(|&i| self.0[i] == max).collect()
    }

    pub fn to_values(&self) -> Vec<NonNegInt> {
        self.0.iter().map(|&d| NonNegInt::from(d)).collect()
    }
}

/// Sorts (stably) and returns the consecutive δ sequence.
pub fn delta_vector(xs: &[NonNegInt]) -> Result<DeltaVector> {
    if xs.is_empty() {
        return Err(Error::domain("delta_vector of an empty multiset"));
    }
    let mut sorted: Vec<&NonNegInt> = xs.iter().collect();
    sorted.sort();
    Ok(DeltaVector(
        sorted.windows(2).map(|w| delta(w[0], w[1])).collect(),
    ))
}

/// `tw_1(x) = x`, `tw_k(x) = 2^tw_{k-1}(x)`; fails once a value would need
/// more than `budget_bits` bits.
pub fn tower(k: u32, x: &NonNegInt, budget_bits: u64) -> Result<NonNegInt> {
    if k == 0 {
        return Err(Error::domain("tower height must be at least 1"));
    }
    let mut value = x.clone();
    for level in 2..=k {
        // 2^value has value + 1 bits
        if value >= NonNegInt::from(budget_bits) {
            return Err(Error::Budget(format!(
                "tw_{k}({x}) exceeds {budget_bits} bits at level {level}"
            )));
        }
        let e = u64::try_from(&value).expect("checked against budget");
        value = NonNegInt::one() << e;
    }
    Ok(value)
}

/// Symbolic handle on the universes `[0, M_k)` with `M_2 = 2^e` and
/// `M_k = 2^(M_{k-1} - 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Universe {
    pub m2_exponent: u64,
}

impl Universe {
    pub fn new(m2_exponent: u64) -> Self {
        Universe { m2_exponent }
    }

    pub fn from_params(params: &ParamSet) -> Self {
        Universe::new(params.m2_exponent())
    }

    /// Whether `x < M_level`, decided without materializing `M_level`.
    pub fn contains(&self, level: usize, x: &NonNegInt) -> bool {
        match level {
            0 | 1 => false,
            2 => x.bits() <= self.m2_exponent,
            // x < 2^(M_{l-1} - 1)  <=>  bits(x) < M_{l-1}
            _ => self.contains(level - 1, &NonNegInt::from(x.bits())),
        }
    }

    pub fn contains_u64(&self, level: usize, x: u64) -> bool {
        let bits = (64 - x.leading_zeros()) as u64;
        match level {
            0 | 1 => false,
            2 => bits <= self.m2_exponent,
            _ => self.contains_u64(level - 1, bits),
        }
    }

    /// Materializes `M_level`, failing with the symbolic tower height when it
    /// needs more than `budget_bits` bits.
    pub fn size(&self, level: usize, budget_bits: u64) -> Result<NonNegInt> {
        if level < 2 {
            return Err(Error::domain("universe level must be at least 2"));
        }
        if self.m2_exponent >= budget_bits {
            return Err(Error::Budget(format!(
                "M_2 = 2^{} exceeds {budget_bits} bits",
                self.m2_exponent
            )));
        }
        let mut value = NonNegInt::one() << self.m2_exponent;
        for l in 3..=level {
            let e = &value - 1u32;
            if e >= NonNegInt::from(budget_bits) {
                return Err(Error::Budget(format!(
                    "M_{level} is a tower of height {} over 2^{} and exceeds {budget_bits} bits (failed at M_{l})",
                    level - 1,
                    self.m2_exponent
                )));
            }
            value = NonNegInt::one() << u64::try_from(&e).expect("checked against budget");
        }
        Ok(value)
    }

    pub fn size_usize(&self, level: usize) -> Result<usize> {
        let size = self.size(level, 64)?;
        usize::try_from(&size).map_err(|_| Error::Budget(format!("M_{level} does not fit in usize")))
    }
}

/// `M_k(m)` under the given parameters.
pub fn color_universe(k: usize, params: &ParamSet) -> Result<NonNegInt> {
    if k < 2 {
        return Err(Error::domain("color universe needs k >= 2"));
    }
    Universe::from_params(params).size(k, DEFAULT_BIT_BUDGET)
}

fn ceil_log2(v: u64) -> u32 {
    if v <= 1 {
        0
    } else {
        64 - (v - 1).leading_zeros()
    }
}

/// Exhaustive check of the three δ properties and the logarithmic bound.
///
/// P1 and the log bound run over all ordered pairs below `range_max`, P2 over
/// all triples `x <= y <= z < range_max` with `x < z`, and P3 over sorted
/// 4-tuples below `min(range_max, 1024)`.
pub fn check_delta_properties(range_max: u64) -> PropertyReport {
    check_delta_properties_with(range_max, range_max.min(1024))
}

pub fn check_delta_properties_with(range_max: u64, p3_max: u64) -> PropertyReport {
    let mut report = PropertyReport::new("delta-properties");
    report.record("range_max", range_max).record("p3_max", p3_max);
    if range_max < 2 {
        report.fail("range_max must be at least 2");
        return report;
    }
    let n = range_max as usize;
    let p3_max = p3_max.min(range_max) as usize;

    // δ table, filled by the function under test.
    let mut table = vec![0u8; n * n];
    for x in 0..n {
        for y in 0..n {
            table[x * n + y] = delta_u64(x as u64, y as u64) as u8;
        }
    }
    let d = |x: usize, y: usize| table[x * n + y];

    // The arbitrary-precision δ agrees with the word-sized one.
    let cross = n.min(256);
    for x in 0..cross {
        for y in 0..cross {
            let big = delta(&NonNegInt::from(x), &NonNegInt::from(y));
            if big != d(x, y) as u64 {
                report.fail(format!("big delta({x},{y}) = {big} but word delta = {}", d(x, y)));
            }
        }
    }

    let mut pairs = 0u64;
    for x in 0..n {
        for y in 0..n {
            if x == y {
                if d(x, y) != 0 {
                    report.fail(format!("delta({x},{x}) = {} != 0", d(x, y)));
                }
                continue;
            }
            pairs += 1;
            let dxy = d(x, y);
            if dxy != d(y, x) {
                report.fail(format!("symmetry: delta({x},{y}) != delta({y},{x})"));
            }
            let bx = (x >> (dxy - 1)) & 1;
            let by = (y >> (dxy - 1)) & 1;
            if (x < y) != (bx < by) {
                report.fail(format!("P1 at ({x},{y}): bits {bx},{by} at position {dxy}"));
            }
            let bound = ceil_log2(x.max(y) as u64 + 1);
            if dxy as u32 > bound {
                report.fail(format!("log bound at ({x},{y}): delta {dxy} > {bound}"));
            }
        }
    }
    report.record("p1_pairs", pairs);

    let mut triples = 0u64;
    let mut p2_bad: Option<(usize, usize, usize)> = None;
    for x in 0..n {
        for y in x..n {
            let a = d(x, y);
            let row = &table[y * n..(y + 1) * n];
            // z ranges over [y, n) excluding z == x (which forces x = y = z)
            let start = if x == y { y + 1 } else { y };
            let hits = row[start..].iter().filter(|&&v| v == a).count();
            triples += (n - start) as u64;
            if hits > 0 && p2_bad.is_none() {
                let z = (start..n).find(|&z| d(y, z) == a).unwrap();
                p2_bad = Some((x, y, z));
            }
        }
    }
    report.record("p2_triples", triples);
    if let Some((x, y, z)) = p2_bad {
        report.fail(format!("P2 at ({x},{y},{z})"));
    }

    // For fixed (x1, x3) the inner scan depends on x2 only through
    // b = max(delta(x1, x2), delta(x2, x3)), so each distinct b is scanned once.
    let mut tuples = 0u64;
    let mut p3_bad: Option<(usize, usize, usize, usize)> = None;
    let mut seen = [0usize; 256];
    for x1 in 0..p3_max {
        let row1 = &table[x1 * n..x1 * n + p3_max];
        for x3 in x1..p3_max {
            let row3 = &table[x3 * n..x3 * n + p3_max];
            seen.fill(0);
            let mut witness_x2 = [0usize; 256];
            for x2 in x1..=x3 {
                let b = d(x1, x2).max(d(x2, x3)) as usize;
                if seen[b] == 0 {
                    witness_x2[b] = x2;
                }
                seen[b] += 1;
            }
            for b in 0..256 {
                if seen[b] == 0 {
                    continue;
                }
                tuples += (seen[b] * (p3_max - x3)) as u64;
                let b8 = b as u8;
                let bad = row1[x3..].iter().zip(&row3[x3..]).any(|(&whole, &last)| whole != b8.max(last));
                if bad && p3_bad.is_none() {
                    let x4 = (x3..p3_max).find(|&x4| d(x1, x4) != b8.max(d(x3, x4))).unwrap();
                    p3_bad = Some((x1, witness_x2[b], x3, x4));
                }
            }
        }
    }
    report.record("p3_tuples", tuples);
    if let Some(t) = p3_bad {
        report.fail(format!("P3 at {t:?}"));
    }
    report
}
