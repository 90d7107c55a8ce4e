//! Classical reference for the entanglement eigenvalue.
//!
//! The best product approximation is found by alternating (higher-order
//! power) iteration: with every other qubit fixed, the fidelity is maximized
//! over qubit `i` in closed form by the normalized partial contraction of `ψ`
//! against the other pairs. Sweeps repeat to convergence from many Haar
//! starts and the best value wins.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ansatz::{haar_random_params, FidelityBackend, ProductParams};
use crate::dense::PureState;
use crate::mps::MpsState;
use crate::seed::task_rng;
use crate::{GmeError, Result, C64};

/// Environment norms² at or below this re-randomize the qubit.
const ZERO_ENVIRONMENT: f64 = 1e-300;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OracleConfig {
    pub starts: usize,
    pub max_sweeps: usize,
    /// Sweeps stop once the fidelity changes by less than this.
    pub tol: f64,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            starts: 50,
            max_sweeps: 500,
            tol: 1e-12,
            seed: 0,
        }
    }
}

/// A state whose single-qubit environments can be contracted.
pub trait RankOneTarget: FidelityBackend {
    /// `⟨φ_{≠i}|ψ⟩` as a vector over qubit `qubit`'s basis states; `pairs`
    /// must be normalized.
    fn environment(&self, pairs: &[(C64, C64)], qubit: usize) -> [C64; 2];
}

impl RankOneTarget for PureState {
    fn environment(&self, pairs: &[(C64, C64)], qubit: usize) -> [C64; 2] {
        PureState::environment(self, pairs, qubit)
    }
}

impl RankOneTarget for MpsState {
    fn environment(&self, pairs: &[(C64, C64)], qubit: usize) -> [C64; 2] {
        MpsState::environment(self, pairs, qubit)
    }
}

/// One pass of conditional updates over qubits `1..=n` in order.
///
/// The returned fidelity never decreases relative to the input unless an
/// environment vanished and the corresponding pair had to be redrawn.
pub fn alternating_sweep<T, R>(
    state: &T,
    params: &ProductParams,
    rng: &mut R,
) -> Result<(ProductParams, f64)>
where
    T: RankOneTarget + ?Sized,
    R: Rng + ?Sized,
{
    params.check_qubits(state.n_qubits())?;
    let mut pairs = params.normalized_pairs();
    for i in 0..pairs.len() {
        let [e0, e1] = state.environment(&pairs, i);
        let norm_sqr = e0.norm_sqr() + e1.norm_sqr();
        pairs[i] = if norm_sqr > ZERO_ENVIRONMENT {
            let norm = norm_sqr.sqrt();
            (e0 / norm, e1 / norm)
        } else {
            haar_random_params(1, rng).normalized_pairs()[0]
        };
    }
    let updated = ProductParams::new(pairs)?;
    let fidelity = state.exact_fidelity(&updated)?;
    Ok((updated, fidelity))
}

/// Outcome of [`reference_gme`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceGme {
    /// `E = 1 − Λ²`.
    pub gme: f64,
    /// `Λ²`, the best fidelity found.
    pub eigenvalue: f64,
    pub params: ProductParams,
    /// Index of the winning start.
    pub start: usize,
}

/// Ascends from `params` until the fidelity gain per sweep drops below `tol`.
pub fn ascend<T, R>(
    state: &T,
    params: ProductParams,
    cfg: &OracleConfig,
    rng: &mut R,
) -> Result<(ProductParams, f64)>
where
    T: RankOneTarget + ?Sized,
    R: Rng + ?Sized,
{
    let mut fidelity = state.exact_fidelity(&params)?;
    let mut current = params;
    for _ in 0..cfg.max_sweeps {
        let (next, f) = alternating_sweep(state, &current, rng)?;
        let change = (f - fidelity).abs();
        current = next;
        fidelity = f;
        if change < cfg.tol {
            break;
        }
    }
    Ok((current, fidelity))
}

/// Multi-start alternating ascent; ties go to the lowest start index.
pub fn reference_gme<T>(state: &T, cfg: &OracleConfig) -> Result<ReferenceGme>
where
    T: RankOneTarget + Sync + ?Sized,
{
    if cfg.starts == 0 {
        return Err(GmeError::OutOfRange {
            what: "starts",
            value: 0.0,
            range: "≥ 1",
        });
    }
    if !(cfg.tol > 0.0) {
        return Err(GmeError::OutOfRange {
            what: "tol",
            value: cfg.tol,
            range: "(0, ∞)",
        });
    }
    let n = state.n_qubits();
    let results = (0..cfg.starts)
        .into_par_iter()
        .map(|start| {
            let mut rng = task_rng(cfg.seed, start as u64);
            let init = haar_random_params(n, &mut rng);
            ascend(state, init, cfg, &mut rng)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut best = 0;
    for (i, (_, f)) in results.iter().enumerate() {
        if *f > results[best].1 {
            best = i;
        }
    }
    let (params, eigenvalue) = results.into_iter().nth(best).expect("at least one start");
    Ok(ReferenceGme {
        gme: 1.0 - eigenvalue,
        eigenvalue,
        params,
        start: best,
    })
}

/// Two-qubit GME from the largest Schmidt coefficient:
/// `E = 1 − σ²_max`, with `σ²_max` the top eigenvalue of the 2×2 Gram matrix
/// of the coefficient matrix.
pub fn schmidt_gme_2q(state: &PureState) -> Result<f64> {
    if state.n_qubits() != 2 {
        return Err(GmeError::DimensionMismatch {
            expected: 2,
            found: state.n_qubits(),
        });
    }
    let c = state.amplitudes();
    let g00 = c[0].norm_sqr() + c[1].norm_sqr();
    let g11 = c[2].norm_sqr() + c[3].norm_sqr();
    let g01 = c[0] * c[2].conj() + c[1] * c[3].conj();
    let trace = g00 + g11;
    let gap = ((g00 - g11).powi(2) + 4.0 * g01.norm_sqr()).sqrt();
    Ok((1.0 - 0.5 * (trace + gap)).max(0.0))
}

/// `|0…0⟩`, a maximizer for GHZ states.
pub fn ghz_optimum(n: usize) -> Result<ProductParams> {
    ProductParams::basis(&vec![0; n])
}

/// Symmetric maximizer `(√((n−1)/n), √(1/n))⊗n` for W states.
pub fn w_optimum(n: usize) -> Result<ProductParams> {
    let nf = n as f64;
    ProductParams::uniform(
        n,
        C64::new(((nf - 1.0) / nf).sqrt(), 0.0),
        C64::new((1.0 / nf).sqrt(), 0.0),
    )
}

/// `Λ² = ((n−1)/n)^{n−1}` for the `n`-qubit W state.
pub fn w_eigenvalue(n: usize) -> f64 {
    let nf = n as f64;
    ((nf - 1.0) / nf).powi(n as i32 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::params_to_dense_product;
    use crate::dense::{haar_random_state, make_ghz, make_w};
    use crate::mps::{mps_ghz, mps_to_dense, mps_w, perturb_mps};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn bell() -> PureState {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let z = C64::new(0.0, 0.0);
        PureState::from_amplitudes(vec![h, z, z, h]).unwrap()
    }

    #[test]
    fn known_maximizers_are_fixed_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let ghz = make_ghz(3).unwrap();
        let start = ghz_optimum(3).unwrap();
        let (p, f) = alternating_sweep(&ghz, &start, &mut rng).unwrap();
        assert!((f - 0.5).abs() < 1e-15);
        assert_eq!(p.normalized_pairs(), start.normalized_pairs());

        let ones = ProductParams::basis(&[1, 1]).unwrap();
        let (p, f) = alternating_sweep(&bell(), &ones, &mut rng).unwrap();
        assert!((f - 0.5).abs() < 1e-15);
        assert_eq!(p.normalized_pairs(), ones.normalized_pairs());
    }

    #[test]
    fn sweeps_never_lose_fidelity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for i in 0..100 {
            let n = 2 + i % 5;
            let psi = haar_random_state(n, &mut rng).unwrap();
            let p = haar_random_params(n, &mut rng);
            let before = psi.exact_fidelity(&p).unwrap();
            let (_, after) = alternating_sweep(&psi, &p, &mut rng).unwrap();
            assert!(after >= before - 1e-14, "{before} -> {after}");
        }
    }

    #[test]
    fn zero_environment_is_redrawn() {
        // From |010⟩ the environment of qubit 1 on GHZ₃ vanishes.
        let ghz = make_ghz(3).unwrap();
        let start = ProductParams::basis(&[0, 1, 0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (p, f) = alternating_sweep(&ghz, &start, &mut rng).unwrap();
        assert_eq!(p.n_qubits(), 3);
        assert!((0.0..=1.0).contains(&f));
    }

    #[test]
    fn ghz_gme_is_one_half() {
        for n in 2..=6 {
            let r = reference_gme(&make_ghz(n).unwrap(), &OracleConfig::default()).unwrap();
            assert!((r.gme - 0.5).abs() < 1e-9, "n={n}: {}", r.gme);
        }
    }

    #[test]
    fn w3_gme_is_five_ninths() {
        let r = reference_gme(&make_w(3).unwrap(), &OracleConfig::default()).unwrap();
        assert!((r.gme - 5.0 / 9.0).abs() < 1e-9, "{}", r.gme);
    }

    #[test]
    fn w3_symmetric_grid_brute_force() {
        // Symmetric real ansatz (cos t, sin t)⊗3: F(t) = 3 cos⁴t sin²t.
        let w = make_w(3).unwrap();
        let steps = 200_000;
        let best = (0..=steps)
            .map(|i| {
                let t = std::f64::consts::FRAC_PI_2 * i as f64 / steps as f64;
                let p = ProductParams::uniform(3, C64::new(t.cos(), 0.0), C64::new(t.sin(), 0.0));
                match p {
                    Ok(p) => w.exact_fidelity(&p).unwrap(),
                    Err(_) => 0.0,
                }
            })
            .fold(0.0, f64::max);
        let r = reference_gme(&w, &OracleConfig::default()).unwrap();
        assert!((best - r.eigenvalue).abs() < 1e-9, "{best} vs {}", r.eigenvalue);
        assert!((w_eigenvalue(3) - 4.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn product_states_have_zero_gme() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 2..=6 {
            let prod = params_to_dense_product(&haar_random_params(n, &mut rng)).unwrap();
            let r = reference_gme(&prod, &OracleConfig::default()).unwrap();
            assert!(r.gme.abs() < 1e-9, "n={n}: {}", r.gme);
        }
    }

    #[test]
    fn schmidt_examples() {
        assert!((schmidt_gme_2q(&bell()).unwrap() - 0.5).abs() < 1e-15);
        let p01 = params_to_dense_product(&ProductParams::basis(&[0, 1]).unwrap()).unwrap();
        assert!(schmidt_gme_2q(&p01).unwrap().abs() < 1e-15);
        let z = C64::new(0.0, 0.0);
        let skewed = PureState::from_amplitudes(vec![
            C64::new(0.8f64.sqrt(), 0.0),
            z,
            z,
            C64::new(0.2f64.sqrt(), 0.0),
        ])
        .unwrap();
        assert!((schmidt_gme_2q(&skewed).unwrap() - 0.2).abs() < 1e-12);
        assert!(schmidt_gme_2q(&make_ghz(3).unwrap()).is_err());
    }

    #[test]
    fn more_starts_never_hurt() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..5 {
            let psi = haar_random_state(5, &mut rng).unwrap();
            let gmes: Vec<f64> = [1, 10, 50]
                .iter()
                .map(|&starts| {
                    let cfg = OracleConfig {
                        starts,
                        ..OracleConfig::default()
                    };
                    reference_gme(&psi, &cfg).unwrap().gme
                })
                .collect();
            assert!(gmes[1] <= gmes[0] && gmes[2] <= gmes[1], "{gmes:?}");
        }
    }

    #[test]
    fn mps_and_dense_paths_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (n, family) in [(6, 0), (9, 1), (12, 0)] {
            let base = if family == 0 { mps_ghz(n) } else { mps_w(n) }.unwrap();
            let mps = perturb_mps(&base, 0.1, &mut rng).unwrap();
            let dense = mps_to_dense(&mps).unwrap();
            let a = reference_gme(&mps, &OracleConfig::default()).unwrap().gme;
            let b = reference_gme(&dense, &OracleConfig::default()).unwrap().gme;
            assert!((a - b).abs() < 1e-8, "n={n}: {a} vs {b}");
        }
    }

    #[test]
    fn known_optima_match_eigenvalues() {
        for n in 2..=12 {
            let f = mps_w(n).unwrap().exact_fidelity(&w_optimum(n).unwrap()).unwrap();
            assert!((f - w_eigenvalue(n)).abs() < 1e-12);
            let g = mps_ghz(n).unwrap().exact_fidelity(&ghz_optimum(n).unwrap()).unwrap();
            assert!((g - 0.5).abs() < 1e-12);
        }
    }
}
