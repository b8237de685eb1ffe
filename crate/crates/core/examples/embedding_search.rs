//! Searching for a monochromatic capped embedding, and checking it through
//! the lifted coloring.
//!
//! cargo run --release --example embedding_search

use ramsey_stepup::coloring::SteppedColoring;
use ramsey_stepup::embedding::{psi_equivalence_check, search_mono_embedding, SearchOutcome};
use ramsey_stepup::{Hypergraph, ParamSet};

fn main() {
    // M_3 = 8 at coeff * m = 2.
    let sc = SteppedColoring::generate(ParamSet::desk(3, 2), 11).unwrap();
    let loose_path = Hypergraph::from_edges(5, 3, [vec![0, 1, 2], vec![2, 3, 4]]).unwrap();
    let complete = Hypergraph::complete(6, 3);
    for (name, h) in [("loose path", loose_path), ("K6 (3)", complete)] {
        for b in [1, 2] {
            match search_mono_embedding(&h, &sc, b, 1_000_000).unwrap() {
                SearchOutcome::Found { embedding, color, nodes } => {
                    let psi = psi_equivalence_check(&h, &embedding, &sc, b as u64).unwrap();
                    println!("{name}, b = {b}: {color} via {:?} after {nodes} nodes, lifted check {psi}", embedding.values());
                }
                SearchOutcome::Absent { nodes } => println!("{name}, b = {b}: none ({nodes} nodes)"),
                SearchOutcome::Exhausted { nodes } => println!("{name}, b = {b}: budget out after {nodes} nodes"),
            }
        }
    }
}
