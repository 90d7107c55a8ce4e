//! Perturbed GHZ and W chains: the optimizer starts at the unperturbed
//! optimum and tracks the shifted maximum using only MPS contractions.
//!
//! ```text
//! cargo run --release --example mps_perturbed [n]
//! ```

use vdge::experiments::{family_state, Family};
use vdge::mps::perturb_mps;
use vdge::oracle::{reference_gme, OracleConfig};
use vdge::seed::task_rng;
use vdge::{run_vdge, CspsaConfig, ShotConfig};

fn main() -> vdge::Result<()> {
    let n: usize = std::env::args()
        .nth(1)
        .map(|a| a.parse().expect("n must be an integer"))
        .unwrap_or(12);
    let cfg = CspsaConfig {
        iterations: 2000,
        ..CspsaConfig::warm_start()
    };
    for family in [Family::Ghz, Family::W] {
        let (base, optimum) = family_state(family, n)?;
        let state = perturb_mps(&base, 0.1, &mut task_rng(11, 0))?;
        let reference = reference_gme(&state, &OracleConfig::default())?;
        let est = run_vdge(&state, ShotConfig::default().into(), &cfg, 1, Some(&optimum))?;
        let curve = est.selected_curve();
        println!(
            "{family:?} n={n} bonds={:?}\n  E_ref {:.5}  start err {:.5}  final err {:.5}",
            state.bond_dims(),
            reference.gme,
            (curve[0] - reference.gme).abs(),
            (est.estimate - reference.gme).abs()
        );
    }
    Ok(())
}
