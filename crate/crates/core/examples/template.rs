//! Template blocks of size s on [n]: multiplicity and intersection caps and
//! the correlation audit.
//!
//! cargo run --release --example template

use ramsey_stepup::template::{gen_template, verify_template};
use ramsey_stepup::ParamSet;

fn main() {
    let params = ParamSet::desk(3, 4);
    let t = gen_template(2000, 40, 0.1, &params, 8).unwrap();
    for attempt in &t.log {
        println!(
            "seed {}: {} candidates, {} good ({} repeated, {} intersecting, {} heavy)",
            attempt.seed, attempt.multisets, attempt.good, attempt.bad_repeat, attempt.bad_intersect, attempt.bad_heavy
        );
    }
    let (inter, pair) = t.max_intersection();
    println!("{} blocks, largest intersection {inter} at {pair:?}", t.block_count());
    // The union-of-blocks adversary usually defeats this few blocks.
    print!("{}", verify_template(&t, 0.1, 100, 8));
}
