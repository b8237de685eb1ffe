//! One induction step on the two fixed instances: one ends in a
//! counterexample, the other advances to the next level.
//!
//! cargo run --release --example reduction_step

use ramsey_stepup::reduction::{regression, step_down, StepOutcome};

fn main() {
    let (state, sc, template) = regression::counterexample_instance().unwrap();
    match step_down(&state, &sc, &template).unwrap() {
        StepOutcome::Counterexample { separation, .. } => {
            for w in separation.witnesses.iter().take(2) {
                println!("{}", w.describe());
            }
        }
        other => println!("unexpected: {}", other.label()),
    }

    let (state, sc, template) = regression::advanced_instance().unwrap();
    let out = step_down(&state, &sc, &template).unwrap();
    println!("advanced instance: {} (exit {})", out.label(), out.exit_code());
    if let StepOutcome::Advanced { next, .. } = &out {
        let values: Vec<String> = next.embedding.values().iter().map(|x| x.to_string()).collect();
        println!("U^{} = {:?} with values {}", next.u, next.vertices, values.join(", "));
        println!("W sets: {:?}", next.witness_sets);
    }
}
