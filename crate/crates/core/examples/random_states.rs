//! Convergence of the estimate for Haar-random states: median error against
//! iteration for several qubit counts.
//!
//! ```text
//! cargo run --release --example random_states
//! ```

use vdge::experiments::{random_bench, RandomBenchArgs, VdgeOptions};

fn main() -> vdge::Result<()> {
    let rows = random_bench(&RandomBenchArgs {
        qubits: vec![3, 4, 5],
        states: 10,
        vdge: VdgeOptions {
            iterations: Some(150),
            repetitions: Some(10),
            seed: 3,
            ..VdgeOptions::default()
        },
    })?;
    println!("{:>2}  {:>4}  {:>9}  {:>9}  {:>9}", "n", "k", "median", "q1", "q3");
    for r in rows.iter().filter(|r| r.k % 25 == 0 || r.k == 150) {
        println!(
            "{:>2}  {:>4}  {:>9.5}  {:>9.5}  {:>9.5}",
            r.n, r.k, r.err_median, r.err_q1, r.err_q3
        );
    }
    Ok(())
}
