//! Final assembly `H = H_R ∪ H_E`.

use std::fmt;

use crate::coloring::{field, header_fields};
use crate::error::{Error, Result};
use crate::expander::{gen_random_regular, lambda2, verify_neighbor_expansion, ExpansionMode};
use crate::gadget::{gadget_degree_bound, gadget_family};
use crate::goodness::gen_good_kgraph;
use crate::graph::{Graph, Hypergraph};
use crate::params::ParamSet;
use crate::report::PropertyReport;
use crate::template::{gen_template, TemplateFamily};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Seeds {
    pub kgraph: u64,
    pub expander: u64,
    pub template: u64,
}

impl Seeds {
    /// Three independent seeds from one.
    pub fn from_master(seed: u64) -> Self {
        Seeds {
            kgraph: seed,
            expander: seed.wrapping_add(0x5851_F42D_4C95_7F2D),
            template: seed.wrapping_add(0x1405_7B7E_F767_814F),
        }
    }

    pub fn parse(line: &str) -> Result<Self> {
        let f = header_fields(line, "seeds", 1)?;
        Ok(Seeds {
            kgraph: field(&f, "kgraph", 1)?,
            expander: field(&f, "expander", 1)?,
            template: field(&f, "template", 1)?,
        })
    }
}

impl fmt::Display for Seeds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "seeds kgraph={} expander={} template={}", self.kgraph, self.expander, self.template)
    }
}

#[derive(Clone, Debug)]
pub struct ConstructionBundle {
    pub h_r: Hypergraph,
    pub h_e: Hypergraph,
    pub h: Hypergraph,
    pub template: TemplateFamily,
    pub f: Graph,
    pub params: ParamSet,
    pub seeds: Seeds,
    /// The profile's own degree constant: `Δ(H) <= c_k * m` is audited.
    pub c_k: f64,
    pub audit: PropertyReport,
}

pub fn assemble(n: usize, k: usize, m: u64, params: &ParamSet, seeds: Seeds) -> Result<ConstructionBundle> {
    params.validate().map_err(|e| e.at("params"))?;
    if params.k != k || params.m != m {
        return Err(Error::domain(format!(
            "parameter set is for k = {}, m = {} but assembly asked for k = {k}, m = {m}",
            params.k, params.m
        )));
    }
    let eps = params.epsilon;
    let s = params.block_size();
    let d = params.expander_degree as usize;
    let mut audit = PropertyReport::new("bundle");
    audit
        .record("profile", &params.profile)
        .record("n", n)
        .record("k", k)
        .record("m", m)
        .record("s", s)
        .record("eps", eps)
        .record("seeds", seeds);

    let good = gen_good_kgraph(n, k, m, eps, params, seeds.kgraph).map_err(|e| e.at("random k-graph"))?;
    audit
        .record("h_r.edges", good.hypergraph.edge_count())
        .record("h_r.max_degree", good.hypergraph.max_degree())
        .record("h_r.degree_bound", good.degree_bound)
        .record("h_r.p", format!("{:e}", good.p))
        .record("h_r.resamples", good.resamples);

    let f = gen_random_regular(s, d, seeds.expander).map_err(|e| e.at("expander"))?;
    let lambda = lambda2(&f).map_err(|e| e.at("expander"))?;
    audit.record("f.lambda", format!("{lambda:.6}"));
    let expansion = verify_neighbor_expansion(
        &f,
        eps,
        k,
        ExpansionMode::Sampled { trials: 200, seed: seeds.expander },
    );
    // Recorded, not enforced: the property needs d large against k and eps.
    audit.record("f.expansion", expansion.status.as_str());
    audit.record("f.expansion.worst_violators", expansion.get("worst_violators").unwrap_or("-"));

    let template = gen_template(n, s, eps, params, seeds.template)
        .and_then(|t| t.with_copies(&f))
        .map_err(|e| e.at("template"))?;
    audit
        .record("template.blocks", template.block_count())
        .record("template.attempts", template.log.len());

    let h_e = gadget_family(k, n, &template.copies, &template.blocks).map_err(|e| e.at("gadget"))?;
    let h = good.hypergraph.union(&h_e).map_err(|e| e.at("union"))?;

    let (dr, de, dh) = (good.hypergraph.max_degree(), h_e.max_degree(), h.max_degree());
    let gadget_max = gadget_degree_bound(k, &f).into_iter().max().unwrap_or(0);
    let c_k = good.degree_bound / m as f64 + (template.cap as usize * gadget_max) as f64 / m as f64;
    audit
        .record("h_e.edges", h_e.edge_count())
        .record("h_e.max_degree", de)
        .record("h.edges", h.edge_count())
        .record("h.max_degree", dh)
        .record("c_k", format!("{c_k:.3}"));
    if dh > dr + de {
        audit.fail(format!("degree {dh} exceeds the union bound {dr} + {de}"));
    }
    if dh as f64 > c_k * m as f64 {
        audit.fail(format!("degree {dh} exceeds C_k m = {}", c_k * m as f64));
    }
    if h.edge_count() != union_size(&good.hypergraph, &h_e) {
        audit.fail("union edge count mismatch");
    }

    Ok(ConstructionBundle {
        h_r: good.hypergraph,
        h_e,
        h,
        template,
        f,
        params: params.clone(),
        seeds,
        c_k,
        audit,
    })
}

fn union_size(a: &Hypergraph, b: &Hypergraph) -> usize {
    a.edge_count() + b.edges().iter().filter(|e| !a.contains_edge(e)).count()
}
