//! A random regular graph, its second eigenvalue and neighbor expansion.
//!
//! cargo run --release --example expander

use ramsey_stepup::expander::{gen_random_regular, lambda2, verify_neighbor_expansion, ExpansionMode};

fn main() {
    let (m, d) = (200, 12);
    let g = gen_random_regular(m, d, 5).unwrap();
    let lambda = lambda2(&g).unwrap();
    let bound = 2.0 * ((d - 1) as f64).sqrt();
    println!("M = {m}, d = {d}: lambda = {lambda:.4}, 2 sqrt(d - 1) = {bound:.4}");

    let report = verify_neighbor_expansion(&g, 0.5, 3, ExpansionMode::Sampled { trials: 300, seed: 1 });
    print!("{report}");
}
