//! Complex simultaneous perturbation stochastic approximation (CSPSA) and the
//! multi-start estimation loop built on it.
//!
//! Each iteration perturbs all `2n` complex coordinates at once along a random
//! direction `Δ` with entries in `{±1, ±i}`, measures the objective at
//! `θ ± c_k Δ`, and moves along
//!
//! ```text
//! ĝᵢ = (F₊ − F₋) / (2 c_k conj(Δᵢ)),    θ_{k+1} = θ_k + a_k ĝ
//! ```
//!
//! which is an unbiased (to first order) estimate of the Wirtinger ascent
//! direction `∂F/∂θ̄`. The optimizer maximizes fidelity.
//!
//! [`run_vdge`] repeats the optimization from independent starts and keeps the
//! repetition whose final measured fidelity is highest, i.e. the lowest
//! estimated entanglement.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ansatz::{haar_random_params, FidelityBackend, ProductParams};
use crate::seed::{derive_seed, task_rng};
use crate::shots::{sample_fidelity, ShotConfig};
use crate::{GmeError, Result, C64};

/// Perturbation redraws allowed when a step lands on a degenerate pair.
pub const MAX_DEGENERATE_RETRIES: usize = 10;

/// Gain schedule and budget.
///
/// `a_k = a / (k + 1 + A)^s` and `c_k = b / (k + 1)^t`.
///
/// The default is `a = 3`, `b = 0.1`, `A = 10`, `s = 1`, `t = 1/6`. With
/// `A = 0` ([`CspsaConfig::one_over_k`]) the first steps are large enough to
/// throw iterates onto saddles that the `1/k` tail cannot leave within a few
/// hundred iterations. [`CspsaConfig::warm_start`] suits long runs that start
/// near an optimum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CspsaConfig {
    pub a: f64,
    pub b: f64,
    /// Stability offset `A`.
    pub stability: f64,
    /// Gain exponent `s`.
    pub gain_exponent: f64,
    /// Perturbation exponent `t`.
    pub perturbation_exponent: f64,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for CspsaConfig {
    fn default() -> Self {
        Self {
            a: 3.0,
            b: 0.1,
            stability: 10.0,
            gain_exponent: 1.0,
            perturbation_exponent: 1.0 / 6.0,
            iterations: 150,
            seed: 0,
        }
    }
}

impl CspsaConfig {
    /// `a = 3`, `b = 0.1`, `A = 0`, `s = 1`, `t = 1/6`.
    pub fn one_over_k() -> Self {
        Self {
            stability: 0.0,
            ..Self::default()
        }
    }

    /// `a = 3`, `b = 0.1`, `A = 20`, `s = 0.602`, `t = 0.101`: steps decay
    /// slowly enough to keep tracking over thousands of iterations without
    /// kicking a well-placed start away.
    pub fn warm_start() -> Self {
        Self {
            stability: 20.0,
            gain_exponent: 0.602,
            perturbation_exponent: 0.101,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |what, value: f64| {
            if value > 0.0 && value.is_finite() {
                Ok(())
            } else {
                Err(GmeError::OutOfRange {
                    what,
                    value,
                    range: "(0, ∞)",
                })
            }
        };
        positive("a", self.a)?;
        positive("b", self.b)?;
        if !(self.stability >= 0.0) {
            return Err(GmeError::OutOfRange {
                what: "stability",
                value: self.stability,
                range: "[0, ∞)",
            });
        }
        if self.iterations == 0 {
            return Err(GmeError::OutOfRange {
                what: "iterations",
                value: 0.0,
                range: "≥ 1",
            });
        }
        Ok(())
    }
}

/// `(a_k, c_k)` for iteration `k ≥ 0`.
pub fn gains(k: usize, cfg: &CspsaConfig) -> (f64, f64) {
    let k = k as f64;
    (
        cfg.a / (k + 1.0 + cfg.stability).powf(cfg.gain_exponent),
        cfg.b / (k + 1.0).powf(cfg.perturbation_exponent),
    )
}

/// Random direction with entries uniform over `{+1, −1, +i, −i}`.
pub fn perturbation<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C64> {
    const SYMBOLS: [C64; 4] = [
        C64::new(1.0, 0.0),
        C64::new(-1.0, 0.0),
        C64::new(0.0, 1.0),
        C64::new(0.0, -1.0),
    ];
    (0..dim).map(|_| SYMBOLS[rng.random_range(0..4)]).collect()
}

/// The two measured fidelities of one iteration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub k: usize,
    pub f_plus: f64,
    pub f_minus: f64,
}

impl TraceRecord {
    /// `1 − (F₊ + F₋)/2`, the entanglement estimate around `θ_k`.
    pub fn estimate(&self) -> f64 {
        1.0 - 0.5 * (self.f_plus + self.f_minus)
    }
}

/// One CSPSA iteration from the flat coordinates `theta`.
///
/// Calls `objective` exactly twice unless a perturbed or updated point is
/// degenerate, in which case `Δ` is redrawn.
pub fn cspsa_step<F, R>(
    theta: &[C64],
    k: usize,
    cfg: &CspsaConfig,
    objective: &mut F,
    rng: &mut R,
) -> Result<(Vec<C64>, TraceRecord)>
where
    F: FnMut(&ProductParams) -> Result<f64>,
    R: Rng + ?Sized,
{
    let (a_k, c_k) = gains(k, cfg);
    let shifted = |delta: &[C64], sign: f64| -> Vec<C64> {
        theta
            .iter()
            .zip(delta)
            .map(|(t, d)| t + d * (sign * c_k))
            .collect()
    };
    for _ in 0..=MAX_DEGENERATE_RETRIES {
        let delta = perturbation(theta.len(), rng);
        let (Ok(plus), Ok(minus)) = (
            ProductParams::from_flat(&shifted(&delta, 1.0)),
            ProductParams::from_flat(&shifted(&delta, -1.0)),
        ) else {
            continue;
        };
        let f_plus = objective(&plus)?;
        let f_minus = objective(&minus)?;
        let diff = f_plus - f_minus;
        let next: Vec<C64> = theta
            .iter()
            .zip(&delta)
            .map(|(t, d)| t + (diff / (2.0 * c_k)) / d.conj() * a_k)
            .collect();
        if ProductParams::from_flat(&next).is_err() {
            continue;
        }
        return Ok((next, TraceRecord { k, f_plus, f_minus }));
    }
    Err(GmeError::DegenerateRun {
        retries: MAX_DEGENERATE_RETRIES,
    })
}

/// How the objective turns an exact fidelity into what the optimizer sees.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measurement {
    /// Noiseless objective, for diagnostics.
    Exact,
    /// Finite-shot estimate `n₀/N`.
    Sampled(ShotConfig),
}

impl From<ShotConfig> for Measurement {
    fn from(cfg: ShotConfig) -> Self {
        Measurement::Sampled(cfg)
    }
}

impl Measurement {
    pub fn measure<B, R>(&self, backend: &B, params: &ProductParams, rng: &mut R) -> Result<f64>
    where
        B: FidelityBackend + ?Sized,
        R: Rng + ?Sized,
    {
        let exact = backend.exact_fidelity(params)?;
        match self {
            Measurement::Exact => Ok(exact),
            Measurement::Sampled(cfg) => sample_fidelity(exact, cfg, backend.n_qubits(), rng),
        }
    }
}

/// One repetition of the optimizer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub records: Vec<TraceRecord>,
    pub initial_params: ProductParams,
    pub final_params: ProductParams,
    /// Fidelity measured at `θ_K`.
    pub final_fidelity: f64,
    /// `1 − final_fidelity`.
    pub estimate: f64,
}

impl RunTrace {
    /// Entanglement estimate at every `k = 0..=K`: the trace estimate for
    /// `k < K`, the final measurement at `k = K`.
    pub fn estimate_curve(&self) -> Vec<f64> {
        self.records
            .iter()
            .map(TraceRecord::estimate)
            .chain(std::iter::once(self.estimate))
            .collect()
    }

    /// Noiseless fidelity at the final parameters.
    pub fn exact_final_fidelity<B: FidelityBackend + ?Sized>(&self, backend: &B) -> Result<f64> {
        backend.exact_fidelity(&self.final_params)
    }
}

/// Multi-start result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GmeEstimate {
    /// `Ê_j` per repetition.
    pub estimates: Vec<f64>,
    /// Index of the repetition with the highest final fidelity.
    pub selected: usize,
    /// `Ê_*`.
    pub estimate: f64,
    /// `Λ̂² = 1 − Ê_*`.
    pub eigenvalue: f64,
    pub repetitions: usize,
    pub traces: Vec<RunTrace>,
}

impl GmeEstimate {
    /// Curve of the selected repetition, see [`RunTrace::estimate_curve`].
    pub fn selected_curve(&self) -> Vec<f64> {
        self.traces[self.selected].estimate_curve()
    }
}

/// Runs a single repetition from `init`.
pub fn run_repetition<B>(
    backend: &B,
    measurement: Measurement,
    cfg: &CspsaConfig,
    init: ProductParams,
    seed: u64,
) -> Result<RunTrace>
where
    B: FidelityBackend + ?Sized,
{
    init.check_qubits(backend.n_qubits())?;
    let mut delta_rng = task_rng(seed, 1);
    let mut shot_rng = task_rng(seed, 2);
    let mut objective = |p: &ProductParams| measurement.measure(backend, p, &mut shot_rng);

    let mut theta = init.to_flat();
    let mut records = Vec::with_capacity(cfg.iterations);
    for k in 0..cfg.iterations {
        let (next, record) = cspsa_step(&theta, k, cfg, &mut objective, &mut delta_rng)?;
        theta = next;
        records.push(record);
    }
    let final_params = ProductParams::from_flat(&theta)?;
    let final_fidelity = objective(&final_params)?;
    Ok(RunTrace {
        records,
        initial_params: init,
        final_params,
        final_fidelity,
        estimate: 1.0 - final_fidelity,
    })
}

/// Multi-start estimate of the GME of `backend`'s state.
///
/// Repetition `j` draws its generators from `(cfg.seed, j)`, starting from
/// Haar-random unit-norm pairs unless `init` is given. Repetitions run in
/// parallel; the result does not depend on scheduling.
pub fn run_vdge<B>(
    backend: &B,
    measurement: Measurement,
    cfg: &CspsaConfig,
    repetitions: usize,
    init: Option<&ProductParams>,
) -> Result<GmeEstimate>
where
    B: FidelityBackend + Sync + ?Sized,
{
    cfg.validate()?;
    if repetitions == 0 {
        return Err(GmeError::OutOfRange {
            what: "repetitions",
            value: 0.0,
            range: "≥ 1",
        });
    }
    if let Measurement::Sampled(shots) = &measurement {
        shots.validate()?;
    }
    let n = backend.n_qubits();
    if let Some(p) = init {
        p.check_qubits(n)?;
    }
    let traces = (0..repetitions)
        .into_par_iter()
        .map(|j| {
            let seed = derive_seed(cfg.seed, j as u64);
            let start = match init {
                Some(p) => p.clone(),
                None => haar_random_params(n, &mut task_rng(seed, 0)).unit_pairs(),
            };
            run_repetition(backend, measurement, cfg, start, seed)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut selected = 0;
    for (j, trace) in traces.iter().enumerate() {
        if trace.final_fidelity > traces[selected].final_fidelity {
            selected = j;
        }
    }
    let estimate = traces[selected].estimate;
    Ok(GmeEstimate {
        estimates: traces.iter().map(|t| t.estimate).collect(),
        selected,
        estimate,
        eigenvalue: 1.0 - estimate,
        repetitions,
        traces,
    })
}
