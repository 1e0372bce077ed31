//! Builds the store-backed factorial directly from the combinator
//! algebra and runs it with a step trace.
//!
//! ```sh
//! cargo run -p gitree --example store_factorial -- 5
//! ```

use gitree::engine::{run, Outcome};
use gitree::programs::fact;
use gitree::reify::{combine_reifiers, store_reifier};
use gitree::signature::StoreOps;

fn main() {
    let n: u64 = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(5);

    let reifier = combine_reifiers(vec![store_reifier()]);
    let store = StoreOps::embedded_in(&reifier.signatures()).expect("store family");
    let (outcome, trace) = run(&reifier, fact(n, store), reifier.initial_state(), 1_000_000, &[]);

    print!("{}", trace.render());
    match outcome {
        Outcome::Value { tree, steps, .. } => {
            println!("fact({n}) = {:?} in {steps} steps", tree);
        }
        other => println!("did not finish: {other:?}"),
    }
}
