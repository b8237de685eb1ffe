//! The gadget k-graph of a small graph: connected (k-1)-sets plus one more
//! vertex.
//!
//! cargo run --release --example gadget

use ramsey_stepup::gadget::{connected_subsets, gadget, gadget_degree_bound};
use ramsey_stepup::Graph;

fn main() {
    let path = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
    println!("connected pairs of P5: {:?}", connected_subsets(&path, 2));
    let h = gadget(3, &path).unwrap();
    print!("{}", h.to_text());
    println!("degrees {:?}, bound {:?}", h.degrees(), gadget_degree_bound(3, &path));

    let cycle = Graph::cycle(8).unwrap();
    let h4 = gadget(4, &cycle).unwrap();
    println!("C8 gives a 4-graph with {} edges, max degree {}", h4.edge_count(), h4.max_degree());
}
