//! Small Ramsey numbers by exhaustive enumeration, with certificates.
//!
//! cargo run --release --example ramsey

use ramsey_stepup::ramsey::{named_target, ramsey_oracle, Certificate, CopySearch, RamseyOutcome};

fn main() {
    for (target, q, n_max) in [("K3", 2u8, 7usize), ("P3", 3, 6), ("E3", 2, 6)] {
        let h = named_target(target).unwrap();
        match ramsey_oracle(&h, q, n_max, 1 << 22, CopySearch::Backtrack).unwrap() {
            RamseyOutcome::Value { n, witness, colorings_checked } => {
                println!("r({target}; {q}) = {n}, {colorings_checked} colorings checked");
                let cert = Certificate::LowerBound { target: target.into(), q, coloring: witness };
                println!("  lower-bound certificate verifies: {}", cert.verify(&h, CopySearch::Enumerate));
            }
            RamseyOutcome::LowerBound { witness } => println!("r({target}; {q}) > {}", witness.n),
            RamseyOutcome::Exhausted { reached, .. } => println!("r({target}; {q}): budget out at n = {reached}"),
        }
    }
}
