//! Named constants of the construction, in two profiles.
//!
//! The `paper` profile carries the literal asymptotic constants and is
//! mostly useful for reporting. The `desk` profile shrinks the constants so
//! that every object fits in memory while keeping the relative order of the
//! thresholds intact.

use std::fmt::Write as _;
use std::str::FromStr;

use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Rational = Ratio<u64>;

#[derive(Clone, Debug, PartialEq)]
pub struct ParamSet {
    pub profile: String,
    /// Uniformity of the top-level hypergraph.
    pub k: usize,
    pub m: u64,
    /// Coefficient `c` in `M_2(m) = 2^(c*m)`.
    pub base_exponent_coeff: Rational,
    /// Color-class weight threshold for the base coloring (0.51).
    pub weight_threshold: Rational,
    /// Cross-pair mass threshold of the partition property (0.55).
    pub partition_threshold: Rational,
    pub epsilon: f64,
    /// Block size is `s_coeff * m`.
    pub s_coeff: f64,
    pub alpha_base: u64,
    pub stop_divisor: u64,
    pub gap_divisor: u64,
    /// Divisor bounding the total size of big intervals.
    pub big_mass_divisor: u64,
    /// Overrides `(16/alpha)^(5k)` when set.
    pub goodness_c: Option<f64>,
    /// Multiplicity cap `C` of the template family.
    pub template_degree_cap: u64,
    /// Number of candidate blocks is `template_count_coeff * n / s`.
    pub template_count_coeff: f64,
    pub expander_degree: u64,
}

impl ParamSet {
    pub fn paper(k: usize, m: u64) -> Self {
        let eps = 10f64.powi(-6 * k as i32);
        ParamSet {
            profile: "paper".into(),
            k,
            m,
            base_exponent_coeff: Rational::new(1, 100_000_000),
            weight_threshold: Rational::new(51, 100),
            partition_threshold: Rational::new(55, 100),
            epsilon: eps,
            s_coeff: 10f64.powi(20 * k as i32),
            alpha_base: 100_000,
            stop_divisor: 2000,
            gap_divisor: 1024,
            big_mass_divisor: 10_000,
            goodness_c: None,
            template_degree_cap: 1_000_000,
            template_count_coeff: 1000.0,
            expander_degree: 12,
        }
    }

    pub fn desk(k: usize, m: u64) -> Self {
        ParamSet {
            profile: "desk".into(),
            k,
            m,
            base_exponent_coeff: Rational::from_integer(1),
            weight_threshold: Rational::new(51, 100),
            partition_threshold: Rational::new(55, 100),
            epsilon: 0.1,
            s_coeff: 10.0,
            alpha_base: 2,
            stop_divisor: 2000,
            gap_divisor: 1024,
            big_mass_divisor: 10_000,
            goodness_c: Some(8.0),
            template_degree_cap: 5,
            template_count_coeff: 0.5,
            expander_degree: 12,
        }
    }

    pub fn by_name(name: &str, k: usize, m: u64) -> Option<Self> {
        match name {
            "paper" => Some(Self::paper(k, m)),
            "desk" => Some(Self::desk(k, m)),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let zero = Rational::from_integer(0);
        let one = Rational::from_integer(1);
        if self.k < 2 {
            return Err(Error::infeasible(format!("k = {} < 2", self.k)));
        }
        if self.m == 0 {
            return Err(Error::infeasible("m must be positive"));
        }
        if !(zero < self.weight_threshold
            && self.weight_threshold < self.partition_threshold
            && self.partition_threshold < one)
        {
            return Err(Error::infeasible(format!(
                "need 0 < weight_threshold ({}) < partition_threshold ({}) < 1",
                self.weight_threshold, self.partition_threshold
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::infeasible(format!(
                "epsilon = {} outside (0, 1)",
                self.epsilon
            )));
        }
        if self.alpha_base < 2 {
            return Err(Error::infeasible("alpha_base must be at least 2"));
        }
        if self.stop_divisor == 0 || self.gap_divisor == 0 || self.big_mass_divisor == 0 {
            return Err(Error::infeasible("divisors must be positive"));
        }
        // 1/256 > 2/gap + 1/stop keeps all five rounds of the triple search placeable.
        let (g, s) = (self.gap_divisor as u128, self.stop_divisor as u128);
        if g * s <= 512 * s + 256 * g {
            return Err(Error::infeasible(format!(
                "triple search needs 1/256 > 2/gap_divisor + 1/stop_divisor (gap={}, stop={})",
                self.gap_divisor, self.stop_divisor
            )));
        }
        if self.template_count_coeff <= 0.0 || self.s_coeff <= 0.0 {
            return Err(Error::infeasible("template coefficients must be positive"));
        }
        Ok(())
    }

    /// Exponent `e` with `M_2 = 2^e`: `floor(coeff * m)`, at least 1.
    pub fn m2_exponent(&self) -> u64 {
        let e = (self.base_exponent_coeff * Rational::from_integer(self.m)).to_integer();
        e.max(1)
    }

    /// `C = (16/alpha)^(5k)` unless overridden.
    pub fn goodness_c(&self, alpha: f64) -> f64 {
        self.goodness_c
            .unwrap_or_else(|| (16.0 / alpha).powi(5 * self.k as i32))
    }

    /// `alpha_u = alpha_base^(u - k)`.
    pub fn alpha(&self, u: usize) -> f64 {
        (self.alpha_base as f64).powi(u as i32 - self.k as i32)
    }

    /// Size of the level-`u` vertex set, `floor(alpha_u * n)`.
    pub fn level_size(&self, u: usize, n: usize) -> usize {
        (self.alpha(u) * n as f64).floor() as usize
    }

    /// Multiplicity cap `b_u = alpha_base^(4 - k - u) * n / m`, floored, at least 1.
    pub fn cap(&self, u: usize, n: usize) -> usize {
        let exp = 4 - self.k as i32 - u as i32;
        let b = (self.alpha_base as f64).powi(exp) * n as f64 / self.m as f64;
        (b.floor() as usize).max(1)
    }

    /// Block size `s = s_coeff * m`, rounded to the nearest integer.
    pub fn block_size(&self) -> usize {
        (self.s_coeff * self.m as f64).round() as usize
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "profile = {}", self.profile);
        let _ = writeln!(out, "k = {}", self.k);
        let _ = writeln!(out, "m = {}", self.m);
        let _ = writeln!(out, "base_exponent_coeff = {}", self.base_exponent_coeff);
        let _ = writeln!(out, "weight_threshold = {}", self.weight_threshold);
        let _ = writeln!(out, "partition_threshold = {}", self.partition_threshold);
        let _ = writeln!(out, "epsilon = {:e}", self.epsilon);
        let _ = writeln!(out, "s_coeff = {:e}", self.s_coeff);
        let _ = writeln!(out, "alpha_base = {}", self.alpha_base);
        let _ = writeln!(out, "stop_divisor = {}", self.stop_divisor);
        let _ = writeln!(out, "gap_divisor = {}", self.gap_divisor);
        let _ = writeln!(out, "big_mass_divisor = {}", self.big_mass_divisor);
        match self.goodness_c {
            Some(c) => {
                let _ = writeln!(out, "goodness_c = {c:e}");
            }
            None => {
                let _ = writeln!(out, "goodness_c = formula");
            }
        }
        let _ = writeln!(out, "template_degree_cap = {}", self.template_degree_cap);
        let _ = writeln!(out, "template_count_coeff = {:e}", self.template_count_coeff);
        let _ = writeln!(out, "expander_degree = {}", self.expander_degree);
        out
    }

    /// Parses `key = value` lines. Unknown keys are errors; keys missing from
    /// the text keep the desk defaults (or the named `profile`'s defaults).
    pub fn from_text(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(idx + 1, format!("expected key = value, got {line:?}")))?;
            pairs.push((idx + 1, key.trim().to_string(), value.trim().to_string()));
        }
        let lookup = |name: &str| pairs.iter().find(|(_, k, _)| k == name);
        let k: usize = match lookup("k") {
            Some((l, _, v)) => parse_val(*l, v)?,
            None => 3,
        };
        let m: u64 = match lookup("m") {
            Some((l, _, v)) => parse_val(*l, v)?,
            None => 4,
        };
        let profile = lookup("profile").map(|(_, _, v)| v.clone()).unwrap_or_else(|| "desk".into());
        let mut p = ParamSet::by_name(&profile, k, m).unwrap_or_else(|| {
            let mut d = ParamSet::desk(k, m);
            d.profile = profile.clone();
            d
        });
        for (line, key, v) in &pairs {
            let line = *line;
            match key.as_str() {
                "profile" | "k" | "m" => {}
                "base_exponent_coeff" => p.base_exponent_coeff = parse_ratio(line, v)?,
                "weight_threshold" => p.weight_threshold = parse_ratio(line, v)?,
                "partition_threshold" => p.partition_threshold = parse_ratio(line, v)?,
                "epsilon" => p.epsilon = parse_val(line, v)?,
                "s_coeff" => p.s_coeff = parse_val(line, v)?,
                "alpha_base" => p.alpha_base = parse_val(line, v)?,
                "stop_divisor" => p.stop_divisor = parse_val(line, v)?,
                "gap_divisor" => p.gap_divisor = parse_val(line, v)?,
                "big_mass_divisor" => p.big_mass_divisor = parse_val(line, v)?,
                "goodness_c" => {
                    p.goodness_c = if v == "formula" {
                        None
                    } else {
                        Some(parse_val(line, v)?)
                    }
                }
                "template_degree_cap" => p.template_degree_cap = parse_val(line, v)?,
                "template_count_coeff" => p.template_count_coeff = parse_val(line, v)?,
                "expander_degree" => p.expander_degree = parse_val(line, v)?,
                other => return Err(Error::parse(line, format!("unknown parameter {other:?}"))),
            }
        }
        Ok(p)
    }
}

fn parse_val<T: FromStr>(line: usize, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::parse(line, format!("cannot parse value {v:?}")))
}

fn parse_ratio(line: usize, v: &str) -> Result<Rational> {
    match v.split_once('/') {
        Some((a, b)) => {
            let den: u64 = parse_val(line, b.trim())?;
            if den == 0 {
                return Err(Error::parse(line, "zero denominator"));
            }
            Ok(Rational::new(parse_val(line, a.trim())?, den))
        }
        None => Ok(Rational::from_integer(parse_val(line, v)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_and_desk_profiles_validate() {
        ParamSet::paper(3, 1_000_000_000).validate().unwrap();
        ParamSet::desk(3, 4).validate().unwrap();
    }

    #[test]
    fn exponent_rounds_down_with_floor_one() {
        let p = ParamSet::paper(2, 1_000_000_000);
        assert_eq!(p.m2_exponent(), 10);
        let p = ParamSet::paper(2, 5);
        assert_eq!(p.m2_exponent(), 1);
    }

    #[test]
    fn infeasible_triple_search_rejected() {
        let mut p = ParamSet::desk(3, 4);
        p.gap_divisor = 8;
        let err = p.validate().unwrap_err().to_string();
        assert!(err.contains("1/256"), "{err}");
    }

    #[test]
    fn thresholds_must_be_ordered() {
        let mut p = ParamSet::desk(3, 4);
        p.weight_threshold = Rational::new(6, 10);
        assert!(p.validate().is_err());
    }

    #[test]
    fn text_round_trip() {
        let mut p = ParamSet::desk(4, 7);
        p.epsilon = 0.125;
        p.goodness_c = None;
        let text = p.to_text();
        let q = ParamSet::from_text(&text).unwrap();
        assert_eq!(p, q);
        assert_eq!(q.to_text(), text);
    }

    #[test]
    fn caps_and_alphas() {
        let p = ParamSet::desk(3, 8);
        assert_eq!(p.alpha(3), 1.0);
        assert_eq!(p.alpha(2), 0.5);
        // b_3 = 2^-2 * 4096 / 8, b_2 = 2^-1 * 4096 / 8 = alpha_2 * n / m
        assert_eq!(p.cap(3, 4096), 128);
        assert_eq!(p.cap(2, 4096), 256);
        assert_eq!(p.cap(2, 4096), (p.alpha(2) * 4096.0 / 8.0) as usize);
        assert_eq!(p.level_size(2, 4096), 2048);
    }
}
