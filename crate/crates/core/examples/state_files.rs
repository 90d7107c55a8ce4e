//! Round trip through the JSON state formats, then estimate from the files
//! as the `estimate` subcommand does.
//!
//! ```text
//! cargo run --release --example state_files [dir]
//! ```

use std::path::PathBuf;

use vdge::dense::make_w;
use vdge::experiments::{estimate, BackendKind, EstimateArgs, Experiment, VdgeOptions};
use vdge::mps::mps_w;

fn main() -> vdge::Result<()> {
    let dir: PathBuf = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    let dense_path = dir.join("w3.json");
    let mps_path = dir.join("w5_mps.json");
    make_w(3)?.write(&dense_path)?;
    mps_w(5)?.write(&mps_path)?;

    for (path, backend) in [(dense_path, BackendKind::Dense), (mps_path, BackendKind::Mps)] {
        let args = EstimateArgs {
            input: path.clone(),
            backend,
            vdge: VdgeOptions {
                iterations: Some(150),
                repetitions: Some(5),
                ..VdgeOptions::default()
            },
        };
        let config = Experiment::Estimate(args.clone());
        let report = estimate(&args, &config)?;
        println!(
            "{}: n={} E_vdge {:.5}  E_ref {:.5}  |diff| {:.5}",
            path.display(),
            report.n_qubits,
            report.estimate,
            report.oracle.gme,
            report.abs_error
        );
    }
    Ok(())
}
