//! Sweep the three-qubit family `√s|GHZ⟩ + e^{iφ}√(1−s)|W⟩` over `s` and
//! print the VDGE median next to the reference value.
//!
//! ```text
//! cargo run --release --example gw_family [phi]
//! ```

use vdge::experiments::{gw_sweep, GwSweepArgs, VdgeOptions};

fn main() -> vdge::Result<()> {
    let phi: f64 = std::env::args()
        .nth(1)
        .map(|a| a.parse().expect("phi must be a number"))
        .unwrap_or(0.0);
    let args = GwSweepArgs {
        phis: vec![phi],
        s_count: 11,
        trials: 5,
        bootstrap: 200,
        vdge: VdgeOptions {
            iterations: Some(150),
            repetitions: Some(5),
            ..VdgeOptions::default()
        },
    };
    let rows = gw_sweep(&args)?;
    println!("{:>5}  {:>8}  {:>8}  {:>19}", "s", "E_ref", "median", "IQR");
    for r in &rows {
        println!(
            "{:>5.2}  {:>8.5}  {:>8.5}  [{:.5}, {:.5}]",
            r.s, r.e_oracle, r.e_vdge_median, r.e_vdge_q1, r.e_vdge_q3
        );
    }
    let mean_err =
        rows.iter().map(|r| (r.e_vdge_median - r.e_oracle).abs()).sum::<f64>() / rows.len() as f64;
    println!("mean |median - E_ref| = {mean_err:.5}");
    Ok(())
}
