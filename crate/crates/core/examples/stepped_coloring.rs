//! A base 2-coloring, the colors it steps up to on triples and quadruples,
//! and the balance check.
//!
//! cargo run --release --example stepped_coloring

use ramsey_stepup::coloring::{phi2, verify_base_coloring, SteppedColoring, VerifyConfig, VerifyMode};
use ramsey_stepup::ParamSet;

fn main() {
    // coeff * m = 3: M_2 = 8, M_3 = 128, M_4 = 2^127
    let sc = SteppedColoring::generate(ParamSet::desk(4, 3), 42).unwrap();
    println!("base coloring on [0, {}), {} red pairs", sc.base.s(), sc.base.red_count());
    println!("phi2(3, 1) = {:?}", phi2(&sc.base, 3, 1).unwrap());

    for xs in [[0u64, 4, 5], [5, 4, 0], [0, 1, 2], [9, 9, 9]] {
        println!("phi{xs:?} = {}", sc.phi_u64(&xs).unwrap());
    }
    // Monotone delta vector (5, 3, 1) recurses; a peak in the middle does not.
    for xs in [[0u64, 16, 20, 21], [0, 1, 16, 17]] {
        println!("phi{xs:?} = {}", sc.phi_u64(&xs).unwrap());
    }

    // At s = 8 some 3-set is monochromatic, so the balance check fails here.
    let config = VerifyConfig::new(VerifyMode::Exhaustive, 1);
    print!("{}", verify_base_coloring(&sc.base, 3, &config));
}
