//! Bit positions of first difference, and the property suite on a small range.
//!
//! cargo run --release --example delta

use ramsey_stepup::numeric::{check_delta_properties_with, delta, delta_vector};
use ramsey_stepup::NonNegInt;

fn main() {
    for (x, y) in [(0u32, 1u32), (6, 7), (0, 3), (5, 6), (3, 4), (2, 7)] {
        println!("delta({x}, {y}) = {}", delta(&NonNegInt::from(x), &NonNegInt::from(y)));
    }

    let xs: Vec<NonNegInt> = [0u32, 1, 2, 3, 4, 5, 6, 7].iter().map(|&x| x.into()).collect();
    let dv = delta_vector(&xs).unwrap();
    println!("delta vector of 0..8: {:?}", dv.entries());

    print!("{}", check_delta_properties_with(512, 128));
}
