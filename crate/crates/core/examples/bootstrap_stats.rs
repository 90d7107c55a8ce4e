//! Spread of repeated best-of-R estimates, summarized by quartiles and a
//! bootstrap interval on the median.
//!
//! ```text
//! cargo run --release --example bootstrap_stats
//! ```

use vdge::dense::make_w;
use vdge::seed::task_rng;
use vdge::stats::summarize_with_bootstrap;
use vdge::{run_vdge, CspsaConfig, ShotConfig};

fn main() -> vdge::Result<()> {
    let state = make_w(3)?;
    let estimates = (0..40)
        .map(|t| {
            let cfg = CspsaConfig {
                seed: t,
                ..CspsaConfig::default()
            };
            Ok(run_vdge(&state, ShotConfig::default().into(), &cfg, 5, None)?.estimate)
        })
        .collect::<vdge::Result<Vec<f64>>>()?;
    let s = summarize_with_bootstrap(&estimates, 2000, 0.95, &mut task_rng(0, 0))?;
    let (lo, hi) = s.bootstrap_ci.expect("requested");
    println!("W_3 over {} trials (exact 5/9 = {:.5})", estimates.len(), 5.0 / 9.0);
    println!("median {:.5}  IQR {:.5} [{:.5}, {:.5}]", s.median, s.iqr, s.q1, s.q3);
    println!("95% bootstrap interval of the median: [{lo:.5}, {hi:.5}]");
    Ok(())
}
