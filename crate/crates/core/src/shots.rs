//! Finite-shot fidelity estimates.
//!
//! Measuring `U†(θ)|ψ⟩` in the computational basis `N` times and counting the
//! all-zeros outcome gives `n₀ ~ Binomial(N, F)`. Only that count enters the
//! estimate `n₀/N`, so the full `2^n`-outcome multinomial is never sampled.
//!
//! # Readout noise
//!
//! With a per-qubit readout flip probability `p > 0`, the success probability
//! is replaced by
//!
//! ```text
//! f_eff = F·(1 − p)^n + (1 − F)·p
//! ```
//!
//! The first term keeps a true all-zeros outcome only if no qubit flips; the
//! second assumes every other outcome sits one flip away from all-zeros, the
//! worst case. This is a qualitative knob for reproducing the order of
//! magnitude of hardware readout error, not a calibrated noise model.

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::{GmeError, Result};

/// `2^13`, a typical per-circuit shot budget on open hardware.
pub const DEFAULT_SHOTS: u64 = 8192;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShotConfig {
    pub shots: u64,
    pub readout_flip: f64,
}

impl Default for ShotConfig {
    fn default() -> Self {
        Self {
            shots: DEFAULT_SHOTS,
            readout_flip: 0.0,
        }
    }
}

impl ShotConfig {
    pub fn new(shots: u64, readout_flip: f64) -> Result<Self> {
        let cfg = Self { shots, readout_flip };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(GmeError::OutOfRange {
                what: "shots",
                value: 0.0,
                range: "≥ 1",
            });
        }
        if !(0.0..=0.5).contains(&self.readout_flip) {
            return Err(GmeError::OutOfRange {
                what: "readout_flip",
                value: self.readout_flip,
                range: "[0, 0.5]",
            });
        }
        Ok(())
    }

    /// All-zeros probability after readout flips on `n_qubits` qubits.
    pub fn effective_probability(&self, f_exact: f64, n_qubits: usize) -> f64 {
        let p = self.readout_flip;
        if p == 0.0 {
            return f_exact;
        }
        let survive = (1.0 - p).powi(n_qubits as i32);
        (f_exact * survive + (1.0 - f_exact) * p).clamp(0.0, 1.0)
    }
}

/// Draws `n₀ ~ Binomial(N, f_eff)` and returns `n₀ / N`.
pub fn sample_fidelity<R: Rng + ?Sized>(
    f_exact: f64,
    cfg: &ShotConfig,
    n_qubits: usize,
    rng: &mut R,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&f_exact) {
        return Err(GmeError::OutOfRange {
            what: "fidelity",
            value: f_exact,
            range: "[0, 1]",
        });
    }
    cfg.validate()?;
    let p = cfg.effective_probability(f_exact, n_qubits);
    let counts = Binomial::new(cfg.shots, p)
        .expect("probability validated")
        .sample(rng);
    Ok(counts as f64 / cfg.shots as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn degenerate_fidelities_are_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for shots in [1, 17, 8192] {
            let cfg = ShotConfig::new(shots, 0.0).unwrap();
            assert_eq!(sample_fidelity(1.0, &cfg, 3, &mut rng).unwrap(), 1.0);
            assert_eq!(sample_fidelity(0.0, &cfg, 3, &mut rng).unwrap(), 0.0);
        }
    }

    #[test]
    fn averaged_half_fidelity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let cfg = ShotConfig::default();
        let draws = 10_000;
        let mean = (0..draws)
            .map(|_| sample_fidelity(0.5, &cfg, 3, &mut rng).unwrap())
            .sum::<f64>()
            / draws as f64;
        assert!((mean - 0.5).abs() < 0.001, "mean {mean}");
    }

    #[test]
    fn deterministic_for_a_seed() {
        let cfg = ShotConfig::default();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..10)
                .map(|_| sample_fidelity(0.3, &cfg, 2, &mut rng).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(5), draw(5));
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let cfg = ShotConfig::default();
        assert!(sample_fidelity(1.5, &cfg, 1, &mut rng).is_err());
        assert!(sample_fidelity(-0.1, &cfg, 1, &mut rng).is_err());
        assert!(ShotConfig::new(0, 0.0).is_err());
        assert!(ShotConfig::new(10, 0.6).is_err());
    }

    #[test]
    fn readout_formula() {
        let cfg = ShotConfig::new(8192, 0.01).unwrap();
        let f = 0.5;
        let expected = 0.5 * 0.99f64.powi(3) + 0.5 * 0.01;
        assert!((cfg.effective_probability(f, 3) - expected).abs() < 1e-15);
        assert_eq!(cfg.effective_probability(1.0, 5), 0.99f64.powi(5));
        assert_eq!(cfg.effective_probability(0.0, 5), 0.01);
        assert_eq!(ShotConfig::default().effective_probability(0.37, 9), 0.37);
    }
}
