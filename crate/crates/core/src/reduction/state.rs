use std::fmt::Write as _;

use super::{Direction, StepRecord};
use crate::coloring::{field, header_fields};
use crate::embedding::CappedEmbedding;
use crate::error::{Error, Result};
use crate::graph::{join, parse_indices};
use crate::numeric::{NonNegInt, Universe};
use crate::params::ParamSet;
use crate::report::PropertyReport;
use crate::template::TemplateFamily;

const VERSION_LINE: &str = "reduction-state v1";

/// Level-`u` data: `U^u`, the reserved sets `W_{u+1..k}`, the blocks `B_i^u`
/// and `h^u`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionState {
    pub k: usize,
    pub u: usize,
    /// Size of the full vertex set.
    pub n: usize,
    pub params: ParamSet,
    /// `U^u` in increasing vertex order.
    pub vertices: Vec<usize>,
    /// `h^u`, aligned with `vertices`; its cap is `b_u`.
    pub embedding: CappedEmbedding,
    /// `(i, W_i)` for `i` in `u+1..=k`.
    pub witness_sets: Vec<(usize, Vec<usize>)>,
    /// `B_i^u`, indexed like the template blocks.
    pub blocks: Vec<Vec<usize>>,
    /// The trace that produced this state, empty at the top level.
    pub steps: Vec<StepRecord>,
    pub audit: Vec<(String, String)>,
}

impl ReductionState {
    /// The top level: `U^k = [n]`, `B_i^k = B_i`, `b_k` from the parameters.
    pub fn initial(params: &ParamSet, values: Vec<NonNegInt>, template: &TemplateFamily) -> Result<Self> {
        let n = values.len();
        if template.n != n {
            return Err(Error::domain(format!("template is on {} vertices, embedding on {n}", template.n)));
        }
        let embedding = CappedEmbedding::new(values, params.cap(params.k, n))?;
        Ok(ReductionState {
            k: params.k,
            u: params.k,
            n,
            params: params.clone(),
            vertices: (0..n).collect(),
            embedding,
            witness_sets: Vec::new(),
            blocks: template.blocks.clone(),
            steps: Vec::new(),
            audit: Vec::new(),
        })
    }

    pub fn value_of(&self, vertex: usize) -> Option<&NonNegInt> {
        self.vertices.binary_search(&vertex).ok().map(|i| self.embedding.value(i))
    }

    /// Vertices of `U^u` sorted by `(h^u, vertex)`; position `i` is entry `i - 1`.
    pub fn sorted_vertices(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.vertices.len()).collect();
        idx.sort_by(|&a, &b| self.embedding.value(a).cmp(self.embedding.value(b)).then(a.cmp(&b)));
        idx.into_iter().map(|i| self.vertices[i]).collect()
    }

    /// Checks the level invariants: set sizes, disjointness, block
    /// containment and sizes, the empty-block count, range and cap of `h^u`.
    pub fn audit_invariants(&self, template: &TemplateFamily) -> PropertyReport {
        let p = &self.params;
        let (k, u, n) = (self.k, self.u, self.n);
        let eps = p.epsilon;
        let s = template.s as f64;
        let mut rep = PropertyReport::new(format!("state-u{u}"));
        let want = p.level_size(u, n);
        rep.record("U.size", self.vertices.len()).record("U.bound", want);
        if self.vertices.len() != want {
            rep.fail(format!("|U^{u}| = {} but alpha_{u} n = {want}", self.vertices.len()));
        }
        let mut owner = vec![false; n];
        for &v in &self.vertices {
            owner[v] = true;
        }
        for (i, w) in &self.witness_sets {
            let want = p.level_size(i - 1, n);
            if w.len() != want {
                rep.fail(format!("|W_{i}| = {} but alpha_{} n = {want}", w.len(), i - 1));
            }
            for &v in w {
                if std::mem::replace(&mut owner[v], true) {
                    rep.fail(format!("vertex {v} lies in two of the level sets"));
                }
            }
        }
        let in_u = |v: usize| self.vertices.binary_search(&v).is_ok();
        let alpha = p.alpha(u);
        let size_bound = (1.0 - eps) * alpha * s;
        let missing_bound = 2.0 * (k - u) as f64 * eps * s;
        let mut empty = 0;
        let mut worst_missing = 0usize;
        let mut smallest = usize::MAX;
        for (i, (b, full)) in self.blocks.iter().zip(&template.blocks).enumerate() {
            if b.is_empty() {
                empty += 1;
                continue;
            }
            if let Some(v) = b.iter().find(|&&v| !in_u(v) || full.binary_search(&v).is_err()) {
                rep.fail(format!("block {i}: vertex {v} outside B_i ∩ U^{u}"));
            }
            let inside = full.iter().filter(|&&v| in_u(v)).count();
            smallest = smallest.min(inside);
            worst_missing = worst_missing.max(inside - b.len().min(inside));
        }
        let empty_bound = 4.0 * (k - u) as f64 * eps * self.blocks.len() as f64;
        rep.record("blocks.empty", empty)
            .record("blocks.empty_bound", empty_bound)
            .record("blocks.min_inside", if smallest == usize::MAX { 0 } else { smallest })
            .record("blocks.min_inside_bound", format!("{size_bound:.3}"))
            .record("blocks.max_missing", worst_missing)
            .record("blocks.max_missing_bound", format!("{missing_bound:.3}"));
        if smallest != usize::MAX && (smallest as f64) < size_bound {
            rep.fail(format!("a nonempty block meets U^{u} in {smallest} < {size_bound:.3} vertices"));
        }
        if worst_missing as f64 > missing_bound {
            rep.fail(format!("a block misses {worst_missing} > {missing_bound:.3} vertices of U^{u}"));
        }
        if empty as f64 > empty_bound {
            rep.fail(format!("{empty} empty blocks > {empty_bound:.3}"));
        }
        let universe = Universe::from_params(p);
        if let Some(x) = self.embedding.values().iter().find(|x| !universe.contains(u, x)) {
            rep.fail(format!("h^{u} value {x:x} outside [0, M_{u})"));
        }
        let cap = p.cap(u, n);
        if self.embedding.cap() != cap {
            rep.fail(format!("embedding cap {} differs from b_{u} = {cap}", self.embedding.cap()));
        }
        rep
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{VERSION_LINE}");
        let _ = writeln!(
            out,
            "state k={} u={} n={} cap={} vertices={} blocks={}",
            self.k,
            self.u,
            self.n,
            self.embedding.cap(),
            self.vertices.len(),
            self.blocks.len()
        );
        out.push_str("[params]\n");
        out.push_str(&self.params.to_text());
        out.push_str("[end]\n[vertices]\n");
        for (v, x) in self.vertices.iter().zip(self.embedding.values()) {
            let _ = writeln!(out, "{v} 0x{x:x}");
        }
        out.push_str("[witness]\n");
        for (i, w) in &self.witness_sets {
            let _ = writeln!(out, "{i} : {}", join(w));
        }
        out.push_str("[blocks]\n");
        for b in &self.blocks {
            let _ = writeln!(out, "{}", if b.is_empty() { "-".to_string() } else { join(b) });
        }
        out.push_str("[steps]\n");
        for s in &self.steps {
            let p = s.p.map_or("-".to_string(), |p| p.to_string());
            let d = s.dir.map_or("-".to_string(), |d| d.to_string());
            let _ = writeln!(out, "{} {} {p} {d} {}", s.l, s.r, u8::from(s.ambiguous));
        }
        out.push_str("[audit]\n");
        for (k, v) in &self.audit {
            let _ = writeln!(out, "{k}={v}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        match lines.next() {
            Some((_, VERSION_LINE)) => {}
            _ => return Err(Error::parse(1, format!("expected {VERSION_LINE:?}"))),
        }
        let (hno, header) = lines.next().ok_or_else(|| Error::parse(2, "missing state header"))?;
        let f = header_fields(header, "state", hno)?;
        let k: usize = field(&f, "k", hno)?;
        let u: usize = field(&f, "u", hno)?;
        let n: usize = field(&f, "n", hno)?;
        let cap: usize = field(&f, "cap", hno)?;
        let vertex_count: usize = field(&f, "vertices", hno)?;
        let block_count: usize = field(&f, "blocks", hno)?;

        let mut section = String::new();
        let mut params_text = String::new();
        let mut vertices = Vec::new();
        let mut values = Vec::new();
        let mut witness_sets = Vec::new();
        let mut blocks = Vec::new();
        let mut steps = Vec::new();
        let mut audit = Vec::new();
        for (no, line) in lines {
            if line.starts_with('[') {
                section = line.to_string();
                continue;
            }
            match section.as_str() {
                "[params]" => {
                    params_text.push_str(line);
                    params_text.push('\n');
                }
                "[end]" if line.trim().is_empty() => {}
                "[vertices]" => {
                    let (v, x) = line
                        .split_once(' ')
                        .ok_or_else(|| Error::parse(no, "expected `vertex 0xvalue`"))?;
                    let v: usize = v.parse().map_err(|_| Error::parse(no, "bad vertex"))?;
                    if v >= n || vertices.last().is_some_and(|&last| last >= v) {
                        return Err(Error::parse(no, "vertices must increase within [0, n)"));
                    }
                    let hex = x.strip_prefix("0x").ok_or_else(|| Error::parse(no, "value needs a 0x prefix"))?;
                    let x = NonNegInt::parse_bytes(hex.as_bytes(), 16)
                        .ok_or_else(|| Error::parse(no, "bad hex value"))?;
                    vertices.push(v);
                    values.push(x);
                }
                "[witness]" => {
                    let (i, rest) = line.split_once(" : ").ok_or_else(|| Error::parse(no, "expected `i : ids`"))?;
                    let i: usize = i.parse().map_err(|_| Error::parse(no, "bad level index"))?;
                    witness_sets.push((i, parse_indices(rest, no)?));
                }
                "[blocks]" => blocks.push(if line.trim() == "-" { Vec::new() } else { parse_indices(line, no)? }),
                "[steps]" => steps.push(parse_step(line, no)?),
                "[audit]" => {
                    let (k, v) = line.split_once('=').ok_or_else(|| Error::parse(no, "expected key=value"))?;
                    audit.push((k.to_string(), v.to_string()));
                }
                other => return Err(Error::parse(no, format!("unexpected line in section {other:?}"))),
            }
        }
        if vertices.len() != vertex_count || blocks.len() != block_count {
            return Err(Error::parse(hno, "vertex or block count does not match the header"));
        }
        let params = ParamSet::from_text(&params_text)?;
        Ok(ReductionState {
            k,
            u,
            n,
            params,
            vertices,
            embedding: CappedEmbedding::new(values, cap)?,
            witness_sets,
            blocks,
            steps,
            audit,
        })
    }
}

fn parse_step(line: &str, no: usize) -> Result<StepRecord> {
    let parts: Vec<&str> = line.split_whitespace().collect();
    if parts.len() != 5 {
        return Err(Error::parse(no, "expected `l r p dir ambiguous`"));
    }
    let num = |s: &str| s.parse::<usize>().map_err(|_| Error::parse(no, format!("bad number {s:?}")));
    let p = match parts[2] {
        "-" => None,
        s => Some(num(s)?),
    };
    let dir = match parts[3] {
        "-" => None,
        "left" => Some(Direction::Left),
        "right" => Some(Direction::Right),
        other => return Err(Error::parse(no, format!("bad direction {other:?}"))),
    };
    Ok(StepRecord { l: num(parts[0])?, r: num(parts[1])?, p, dir, ambiguous: parts[4] == "1" })
}
