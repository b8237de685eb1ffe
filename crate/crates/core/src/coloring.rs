//! The random base coloring of pairs, the stepped 4-coloring of multisets and
//! the lifted product coloring.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numeric::{delta, delta_u64, NonNegInt, Universe};
use crate::params::{ParamSet, Rational};
use crate::report::PropertyReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TwoColor {
    Red,
    Blue,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FourColor {
    C1,
    C2,
    C3,
    C4,
}

impl FourColor {
    pub const ALL: [FourColor; 4] = [FourColor::C1, FourColor::C2, FourColor::C3, FourColor::C4];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for FourColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", self.index() + 1)
    }
}

impl fmt::Display for TwoColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TwoColor::Red => "red",
            TwoColor::Blue => "blue",
        })
    }
}

/// Index of the unordered pair `{i, j}`, `i < j < s`, in lexicographic order.
#[inline]
pub fn pair_index(s: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < s);
    i * (2 * s - i - 1) / 2 + (j - i - 1)
}

/// A 2-coloring of the pairs of `[0, s)`, stored one bit per pair (red = 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseColoring {
    s: usize,
    seed: u64,
    words: Vec<u64>,
}

impl BaseColoring {
    pub fn pair_count(s: usize) -> usize {
        s * s.saturating_sub(1) / 2
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn pair_color(&self, i: usize, j: usize) -> TwoColor {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let p = pair_index(self.s, i, j);
        if (self.words[p / 64] >> (p % 64)) & 1 == 1 {
            TwoColor::Blue
        } else {
            TwoColor::Red
        }
    }

    /// Builds a coloring from an explicit rule; `seed` is recorded only.
    pub fn from_fn(s: usize, seed: u64, mut color: impl FnMut(usize, usize) -> TwoColor) -> Result<Self> {
        if s < 2 {
            return Err(Error::domain(format!("base coloring needs s >= 2, got {s}")));
        }
        let pairs = Self::pair_count(s);
        let mut words = vec![0u64; pairs.div_ceil(64)];
        let mut p = 0;
        for i in 0..s {
            for j in i + 1..s {
                if color(i, j) == TwoColor::Blue {
                    words[p / 64] |= 1 << (p % 64);
                }
                p += 1;
            }
        }
        Ok(BaseColoring { s, seed, words })
    }

    pub fn red_count(&self) -> usize {
        Self::pair_count(self.s) - self.words.iter().map(|w| w.count_ones() as usize).sum::<usize>()
    }

    /// Explicit bitmap, pairs in lexicographic order, packed most significant
    /// bit first, lowercase hex.
    pub fn bitmap_hex(&self) -> String {
        let pairs = Self::pair_count(self.s);
        let mut bytes = vec![0u8; pairs.div_ceil(8)];
        for p in 0..pairs {
            if (self.words[p / 64] >> (p % 64)) & 1 == 1 {
                bytes[p / 8] |= 0x80 >> (p % 8);
            }
        }
        bytes.iter().map(|b| format!("{b:02x}")).collect()
    }

    fn from_bitmap_hex(s: usize, seed: u64, hex: &str, line: usize) -> Result<Self> {
        let pairs = Self::pair_count(s);
        if hex.len() != pairs.div_ceil(8) * 2 {
            return Err(Error::parse(
                line,
                format!("bitmap has {} hex digits, expected {}", hex.len(), pairs.div_ceil(8) * 2),
            ));
        }
        let mut words = vec![0u64; pairs.div_ceil(64)];
        for (idx, chunk) in hex.as_bytes().chunks(2).enumerate() {
            let text = std::str::from_utf8(chunk).map_err(|_| Error::parse(line, "non-ascii bitmap"))?;
            let byte = u8::from_str_radix(text, 16).map_err(|_| Error::parse(line, format!("bad hex {text:?}")))?;
            for b in 0..8 {
                let p = idx * 8 + b;
                if byte & (0x80 >> b) != 0 {
                    if p >= pairs {
                        return Err(Error::parse(line, "padding bits must be zero"));
                    }
                    words[p / 64] |= 1 << (p % 64);
                }
            }
        }
        Ok(BaseColoring { s, seed, words })
    }

    pub fn to_text(&self, coeff: Rational, with_bitmap: bool) -> String {
        let mut out = format!("basecoloring s={} seed={} coeff={}\n", self.s, self.seed, coeff);
        if with_bitmap {
            out.push_str(&self.bitmap_hex());
            out.push('\n');
        }
        out
    }

    /// Parses the coloring file; without a bitmap the coloring is regenerated
    /// from `(s, seed)`.
    pub fn from_text(text: &str) -> Result<(Self, Rational)> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty coloring file"))?;
        let fields = header_fields(header, "basecoloring", 1)?;
        let s: usize = field(&fields, "s", 1)?;
        let seed: u64 = field(&fields, "seed", 1)?;
        let coeff_text = fields
            .iter()
            .find(|(k, _)| k == "coeff")
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| Error::parse(1, "missing coeff="))?;
        let coeff = parse_rational(coeff_text).ok_or_else(|| Error::parse(1, "bad coeff"))?;
        let coloring = match lines.next() {
            Some((idx, hex)) => Self::from_bitmap_hex(s, seed, hex.trim(), idx + 1)?,
            None => gen_base_coloring(s, seed)?,
        };
        if let Some((idx, _)) = lines.next() {
            return Err(Error::parse(idx + 1, "unexpected trailing content"));
        }
        Ok((coloring, coeff))
    }

    /// True when the stored bitmap is exactly what `(s, seed)` regenerates.
    pub fn matches_seed(&self) -> bool {
        gen_base_coloring(self.s, self.seed).is_ok_and(|g| g == *self)
    }
}

pub(crate) fn header_fields(line: &str, tag: &str, line_no: usize) -> Result<Vec<(String, String)>> {
    let mut parts = line.split_whitespace();
    if parts.next() != Some(tag) {
        return Err(Error::parse(line_no, format!("expected header starting with {tag:?}")));
    }
    parts
        .map(|p| {
            p.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| Error::parse(line_no, format!("bad header field {p:?}")))
        })
        .collect()
}

pub(crate) fn field<T: std::str::FromStr>(fields: &[(String, String)], key: &str, line_no: usize) -> Result<T> {
    fields
        .iter()
        .find(|(k, _)| k == key)
        .ok_or_else(|| Error::parse(line_no, format!("missing {key}=")))?
        .1
        .parse()
        .map_err(|_| Error::parse(line_no, format!("bad value for {key}")))
}

fn parse_rational(text: &str) -> Option<Rational> {
    match text.split_once('/') {
        Some((a, b)) => {
            let den: u64 = b.parse().ok()?;
            if den == 0 {
                return None;
            }
            Some(Rational::new(a.parse().ok()?, den))
        }
        None => Some(Rational::from_integer(text.parse().ok()?)),
    }
}

/// Independent fair colors for every pair, drawn from a ChaCha8 stream seeded
/// with `seed`; 64 pairs per generator word in lexicographic order.
pub fn gen_base_coloring(s: usize, seed: u64) -> Result<BaseColoring> {
    if s < 2 {
        return Err(Error::domain(format!("base coloring needs s >= 2, got {s}")));
    }
    let pairs = BaseColoring::pair_count(s);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut words: Vec<u64> = (0..pairs.div_ceil(64)).map(|_| rng.next_u64()).collect();
    if !pairs.is_multiple_of(64) {
        let last = words.len() - 1;
        words[last] &= (1u64 << (pairs % 64)) - 1;
    }
    Ok(BaseColoring { s, seed, words })
}

pub fn phi2(c: &BaseColoring, x: u64, y: u64) -> Result<TwoColor> {
    let s = c.s as u64;
    if x >= s || y >= s {
        return Err(Error::domain(format!("pair ({x}, {y}) outside [0, {s})")));
    }
    if x == y {
        return Ok(TwoColor::Red);
    }
    Ok(c.pair_color(x as usize, y as usize))
}

/// The stepped coloring `phi^(k)` for every uniformity `3..=k` over a fixed
/// base coloring of `[0, M_2)`.
#[derive(Clone, Debug)]
pub struct SteppedColoring {
    pub k: usize,
    pub params: ParamSet,
    pub universe: Universe,
    pub base: Arc<BaseColoring>,
}

impl SteppedColoring {
    pub fn new(params: ParamSet, base: BaseColoring) -> Result<Self> {
        let universe = Universe::from_params(&params);
        let m2 = universe.size_usize(2)?;
        if base.s() != m2 {
            return Err(Error::domain(format!(
                "base coloring has s = {} but M_2 = {m2}",
                base.s()
            )));
        }
        Ok(SteppedColoring {
            k: params.k,
            params,
            universe,
            base: Arc::new(base),
        })
    }

    /// Convenience: fresh base coloring of size `M_2` from `seed`.
    pub fn generate(params: ParamSet, seed: u64) -> Result<Self> {
        let m2 = Universe::from_params(&params).size_usize(2)?;
        let base = gen_base_coloring(m2, seed)?;
        Self::new(params, base)
    }

    /// Color of a multiset of size at least 3; values must lie in
    /// `[0, M_size)`.
    pub fn phi(&self, xs: &[NonNegInt]) -> Result<FourColor> {
        let size = xs.len();
        if size < 3 {
            return Err(Error::domain("phi_k needs at least 3 values; use phi2 for pairs"));
        }
        if size > self.k {
            return Err(Error::domain(format!("multiset of size {size} exceeds k = {}", self.k)));
        }
        if let Some(x) = xs.iter().find(|x| !self.universe.contains(size, x)) {
            return Err(Error::domain(format!("value {x} outside [0, M_{size})")));
        }
        let mut sorted: Vec<&NonNegInt> = xs.iter().collect();
        sorted.sort();
        let deltas: Vec<u64> = sorted.windows(2).map(|w| delta(w[0], w[1])).collect();
        self.color_from_deltas(size, sorted[0] == sorted[size - 1], &deltas)
    }

    /// Same as [`SteppedColoring::phi`] for word-sized values.
    pub fn phi_u64(&self, xs: &[u64]) -> Result<FourColor> {
        let size = xs.len();
        if size < 3 || size > self.k {
            let big: Vec<NonNegInt> = xs.iter().map(|&x| NonNegInt::from(x)).collect();
            return self.phi(&big);
        }
        if let Some(x) = xs.iter().find(|&&x| !self.universe.contains_u64(size, x)) {
            return Err(Error::domain(format!("value {x} outside [0, M_{size})")));
        }
        self.phi_small(xs)
    }

    fn phi_small(&self, xs: &[u64]) -> Result<FourColor> {
        let mut sorted = xs.to_vec();
        sorted.sort_unstable();
        let deltas: Vec<u64> = sorted.windows(2).map(|w| delta_u64(w[0], w[1]) as u64).collect();
        self.color_from_deltas(xs.len(), sorted[0] == sorted[xs.len() - 1], &deltas)
    }

    fn color_from_deltas(&self, size: usize, all_equal: bool, d: &[u64]) -> Result<FourColor> {
        if size == 3 {
            if all_equal {
                return Ok(FourColor::C1);
            }
            let red = phi2(&self.base, d[0], d[1])? == TwoColor::Red;
            return Ok(match (d[0] < d[1], red) {
                (true, true) => FourColor::C1,
                (true, false) => FourColor::C2,
                (false, true) => FourColor::C3,
                (false, false) => FourColor::C4,
            });
        }
        let monotone = d.windows(2).all(|w| w[0] <= w[1]) || d.windows(2).all(|w| w[0] >= w[1]);
        if monotone {
            return self.phi_small(d);
        }
        let max = *d.iter().max().expect("size >= 4");
        let mut hits = d.iter().enumerate().filter(|(_, &v)| v == max).map(|(i, _)| i);
        let arg = hits.next().expect("max exists");
        if hits.next().is_some() {
            return Err(Error::defect(format!("non-unique argmax in delta vector {d:?}")));
        }
        Ok(if arg == 0 || arg == size - 2 {
            FourColor::C1
        } else {
            FourColor::C2
        })
    }

    /// The lifted coloring on `[0, M_k) x [0, b)`: the color of the first
    /// coordinates.
    pub fn lifted_color(&self, b: u64, vertices: &[(NonNegInt, u64)]) -> Result<FourColor> {
        for (i, v) in vertices.iter().enumerate() {
            if v.1 >= b {
                return Err(Error::domain(format!("second coordinate {} outside [0, {b})", v.1)));
            }
            if vertices[..i].contains(v) {
                return Err(Error::domain(format!("duplicate vertex ({}, {})", v.0, v.1)));
            }
        }
        let xs: Vec<NonNegInt> = vertices.iter().map(|(x, _)| x.clone()).collect();
        self.phi(&xs)
    }
}

/// How hard `verify_base_coloring` looks for a heavy weight function.
#[derive(Clone, Debug)]
pub enum VerifyMode {
    /// All 0/1 weight vectors with support exactly `m`; needs `s <= 20`.
    Exhaustive,
    /// Random continuous weight vectors.
    Random { trials: usize },
    /// Coordinate ascent on the color-class ratio from random starts.
    Ascent { starts: usize },
    /// Random trials followed by ascent starts.
    Combined { trials: usize, starts: usize },
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub mode: VerifyMode,
    pub threshold: Rational,
    pub seed: u64,
}

impl VerifyConfig {
    pub fn new(mode: VerifyMode, seed: u64) -> Self {
        VerifyConfig {
            mode,
            threshold: Rational::new(51, 100),
            seed,
        }
    }
}

struct Worst {
    ratio: f64,
    color: TwoColor,
    witness: String,
}

fn binom2(x: f64) -> f64 {
    x * (x - 1.0) / 2.0
}

/// Color-class weights `(W_red, W_blue)` of a weight vector.
fn class_weights(c: &BaseColoring, w: &[f64]) -> (f64, f64) {
    let (mut red, mut blue) = (0.0, 0.0);
    for i in 0..c.s {
        if w[i] == 0.0 {
            continue;
        }
        for j in i + 1..c.s {
            let p = w[i] * w[j];
            match c.pair_color(i, j) {
                TwoColor::Red => red += p,
                TwoColor::Blue => blue += p,
            }
        }
    }
    (red, blue)
}

fn describe_weights(w: &[f64]) -> String {
    let support: Vec<String> = w
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > 0.0)
        .map(|(i, v)| format!("{i}:{v:.3}"))
        .collect();
    format!("w={{{}}}", support.join(","))
}

fn random_weights(rng: &mut ChaCha8Rng, s: usize, m: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..s).map(|_| rng.gen::<f64>()).collect();
    // Scale up (clamping at 1) until the total reaches m.
    for _ in 0..64 {
        let total: f64 = w.iter().sum();
        if total >= m as f64 {
            break;
        }
        let scale = m as f64 / total;
        for v in &mut w {
            *v = (*v * scale).min(1.0);
        }
    }
    if w.iter().sum::<f64>() < m as f64 {
        w.iter_mut().for_each(|v| *v = 1.0);
    }
    w
}

fn ascend(c: &BaseColoring, color: TwoColor, mut w: Vec<f64>, m: usize) -> (f64, Vec<f64>) {
    const GRID: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];
    let s = c.s;
    let mut x: f64 = w.iter().sum();
    let (red, blue) = class_weights(c, &w);
    let mut weight = if color == TwoColor::Red { red } else { blue };
    // a[i] = total weight of color-class neighbours of i
    let mut a = vec![0.0; s];
    for i in 0..s {
        for j in 0..s {
            if i != j && c.pair_color(i, j) == color {
                a[i] += w[j];
            }
        }
    }
    let ratio = |wt: f64, x: f64| if x > 1.0 { wt / binom2(x) } else { 0.0 };
    let mut best = ratio(weight, x);
    for _pass in 0..50 {
        let mut improved = false;
        for i in 0..s {
            let mut choice = None;
            for &t in &GRID {
                let nx = x + t - w[i];
                if nx < m as f64 || t == w[i] {
                    continue;
                }
                let r = ratio(weight + (t - w[i]) * a[i], nx);
                if r > best + 1e-12 {
                    best = r;
                    choice = Some(t);
                }
            }
            if let Some(t) = choice {
                let diff = t - w[i];
                weight += diff * a[i];
                x += diff;
                w[i] = t;
                for j in 0..s {
                    if j != i && c.pair_color(i, j) == color {
                        a[j] += diff;
                    }
                }
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    (best, w)
}

/// Searches for a weight function `w: [s] -> [0,1]` with total at least `m`
/// whose heavier color class reaches `threshold * C(x, 2)`.
///
/// PASS means no violation was found within the configured budget; for the
/// continuous strategies this is not a proof.
pub fn verify_base_coloring(c: &BaseColoring, m: usize, config: &VerifyConfig) -> PropertyReport {
    let mut report = PropertyReport::new("base-coloring-weights");
    report
        .record("s", c.s)
        .record("m", m)
        .record("seed", config.seed)
        .record("threshold", config.threshold);
    if m < 2 || c.s < m {
        report.fail(format!("need s >= m >= 2 (s = {}, m = {m})", c.s));
        return report;
    }
    let threshold = *config.threshold.numer() as f64 / *config.threshold.denom() as f64;
    let mut worst = Worst {
        ratio: 0.0,
        color: TwoColor::Red,
        witness: String::new(),
    };
    let mut consider = |ratio: f64, color: TwoColor, witness: &dyn Fn() -> String| {
        if ratio > worst.ratio {
            worst = Worst {
                ratio,
                color,
                witness: witness(),
            };
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (trials, starts, exhaustive) = match config.mode {
        VerifyMode::Exhaustive => (0, 0, true),
        VerifyMode::Random { trials } => (trials, 0, false),
        VerifyMode::Ascent { starts } => (0, starts, false),
        VerifyMode::Combined { trials, starts } => (trials, starts, false),
    };
    if exhaustive {
        if c.s > 20 {
            report.fail(format!("exhaustive mode needs s <= 20, got {}", c.s));
            return report;
        }
        let denom = binom2(m as f64);
        let mut subsets = 0u64;
        for mask in 0u32..(1u32 << c.s) {
            if mask.count_ones() as usize != m {
                continue;
            }
            subsets += 1;
            let members: Vec<usize> = (0..c.s).filter(|&i| mask >> i & 1 == 1).collect();
            let mut red = 0usize;
            for (a, &i) in members.iter().enumerate() {
                for &j in &members[a + 1..] {
                    if c.pair_color(i, j) == TwoColor::Red {
                        red += 1;
                    }
                }
            }
            let blue = members.len() * (members.len() - 1) / 2 - red;
            consider(red as f64 / denom, TwoColor::Red, &|| format!("support={members:?}"));
            consider(blue as f64 / denom, TwoColor::Blue, &|| format!("support={members:?}"));
        }
        report.record("budget", format!("exhaustive subsets={subsets}"));
    } else {
        for _ in 0..trials {
            let w = random_weights(&mut rng, c.s, m);
            let x: f64 = w.iter().sum();
            let (red, blue) = class_weights(c, &w);
            consider(red / binom2(x), TwoColor::Red, &|| describe_weights(&w));
            consider(blue / binom2(x), TwoColor::Blue, &|| describe_weights(&w));
        }
        for _ in 0..starts {
            let start = random_weights(&mut rng, c.s, m);
            for color in [TwoColor::Red, TwoColor::Blue] {
                let (r, w) = ascend(c, color, start.clone(), m);
                consider(r, color, &|| describe_weights(&w));
            }
        }
        report.record("budget", format!("random_trials={trials} ascent_starts={starts}"));
        report.definitive = false;
    }
    report
        .record("worst_ratio", format!("{:.6}", worst.ratio))
        .record("worst_color", worst.color);
    if worst.ratio >= threshold {
        report.fail(format!(
            "{} class reaches ratio {:.6} >= {threshold}: {}",
            worst.color, worst.ratio, worst.witness
        ));
    }
    report
}
