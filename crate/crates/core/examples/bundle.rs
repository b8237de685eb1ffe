//! The assembled construction H = H_R + H_E with its audit.
//!
//! cargo run --release --example bundle

use ramsey_stepup::assemble::{assemble, Seeds};
use ramsey_stepup::ParamSet;

fn main() {
    let (n, k, m) = (2000, 3, 4);
    let params = ParamSet::desk(k, m);
    match assemble(n, k, m, &params, Seeds::from_master(2)) {
        Ok(b) => {
            println!(
                "H_R: {} edges, H_E: {} edges, H: {} edges, max degree {} (c_k m = {})",
                b.h_r.edge_count(),
                b.h_e.edge_count(),
                b.h.edge_count(),
                b.h.max_degree(),
                b.c_k * m as f64
            );
            println!("{} template blocks, F has {} edges", b.template.block_count(), b.f.edge_count());
            print!("{}", b.audit);
        }
        Err(e) => println!("assembly failed: {e}"),
    }
}
