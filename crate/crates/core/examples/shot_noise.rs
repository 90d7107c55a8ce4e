//! Finite-shot fidelity estimates: empirical mean and variance against the
//! binomial law, and the bias introduced by readout flips.
//!
//! ```text
//! cargo run --release --example shot_noise
//! ```

use vdge::dense::make_ghz;
use vdge::shots::{sample_fidelity, ShotConfig};
use vdge::stats::mean;
use vdge::seed::task_rng;
use vdge::{run_vdge, CspsaConfig, Measurement};

fn main() -> vdge::Result<()> {
    let cfg = ShotConfig::default();
    let mut rng = task_rng(1, 0);
    for f in [0.1, 0.5, 0.9] {
        let draws = (0..100_000)
            .map(|_| sample_fidelity(f, &cfg, 3, &mut rng))
            .collect::<vdge::Result<Vec<_>>>()?;
        let m = mean(&draws)?;
        let var = draws.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (draws.len() - 1) as f64;
        let expected = f * (1.0 - f) / cfg.shots as f64;
        println!("f={f}: mean {m:.6}  var {var:.3e}  binomial var {expected:.3e}");
    }

    let state = make_ghz(3)?;
    let gains = CspsaConfig::default();
    for flip in [0.0, 1e-3, 1e-2] {
        let m = Measurement::Sampled(ShotConfig::new(cfg.shots, flip)?);
        let est = run_vdge(&state, m, &gains, 5, None)?;
        println!("readout flip {flip:>6}: E_vdge {:.5}  (exact 0.5)", est.estimate);
    }
    Ok(())
}
