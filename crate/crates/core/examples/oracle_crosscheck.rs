//! The alternating rank-one solver against closed forms: Schmidt coefficients
//! for two qubits and the symmetric W optimum.
//!
//! ```text
//! cargo run --release --example oracle_crosscheck
//! ```

use vdge::dense::{haar_random_state, make_w};
use vdge::oracle::{reference_gme, schmidt_gme_2q, w_eigenvalue, OracleConfig};
use vdge::seed::task_rng;

fn main() -> vdge::Result<()> {
    let cfg = OracleConfig::default();
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let state = haar_random_state(2, &mut task_rng(5, i))?;
        let diff = (reference_gme(&state, &cfg)?.gme - schmidt_gme_2q(&state)?).abs();
        worst = worst.max(diff);
    }
    println!("two qubits, 200 Haar states: max |oracle - schmidt| = {worst:.2e}");

    for n in 3..=8 {
        let r = reference_gme(&make_w(n)?, &cfg)?;
        println!(
            "W_{n}: oracle {:.12}  closed form {:.12}  (best start {})",
            r.gme,
            1.0 - w_eigenvalue(n),
            r.start
        );
    }
    Ok(())
}
