//! Variational GME of GHZ states of growing size, against the exact value 1/2.
//!
//! ```text
//! cargo run --release --example ghz_estimate
//! ```

use vdge::dense::make_ghz;
use vdge::oracle::{reference_gme, OracleConfig};
use vdge::{run_vdge, CspsaConfig, ShotConfig};

fn main() -> vdge::Result<()> {
    let cfg = CspsaConfig {
        seed: 7,
        ..CspsaConfig::default()
    };
    println!("{:>2}  {:>8}  {:>8}  {:>8}", "n", "E_vdge", "E_ref", "|diff|");
    for n in 2..=6 {
        let state = make_ghz(n)?;
        let est = run_vdge(&state, ShotConfig::default().into(), &cfg, 5, None)?;
        let reference = reference_gme(&state, &OracleConfig::default())?;
        println!(
            "{n:>2}  {:>8.5}  {:>8.5}  {:>8.5}",
            est.estimate,
            reference.gme,
            (est.estimate - reference.gme).abs()
        );
    }
    Ok(())
}
