//! The partition property of graphs and (alpha, m)-goodness of k-graphs.
//!
//! cargo run --release --example good_kgraph

use ramsey_stepup::goodness::{gen_good_kgraph, gm_member, is_alpha_m_good, CheckMode};
use ramsey_stepup::{Graph, Hypergraph, ParamSet};

fn main() {
    let params = ParamSet::desk(3, 3);
    let k6 = gm_member(&Graph::complete(6), 3, &params, CheckMode::Exact);
    let empty = gm_member(&Graph::empty(6), 1, &params, CheckMode::Exact);
    println!("K6 in G_3: {}, empty graph in G_1: {}", k6.passed(), empty.passed());
    let g = Graph::gnp(200, 0.2, 1).unwrap();
    print!("{}", gm_member(&g, 4, &params, CheckMode::Sampled { trials: 200, seed: 1 }));

    let complete = Hypergraph::complete(7, 3);
    print!("{}", is_alpha_m_good(&complete, 0.5, 2, &params, CheckMode::Exact));

    // At desk scale the sampled k-graph is very sparse.
    let params = ParamSet::desk(3, 2);
    let good = gen_good_kgraph(40, 3, 2, 0.1, &params, 4).unwrap();
    println!(
        "gen_good_kgraph: C = {}, p = {:.3e}, {} edges, max degree {} <= {}",
        good.c,
        good.p,
        good.hypergraph.edge_count(),
        good.hypergraph.max_degree(),
        good.degree_bound
    );
}
