//! Benchmark campaigns and single-state estimation, as driven by the `vdge`
//! binary.
//!
//! Every command is described by an [`Experiment`] value. Its resolved form is
//! embedded in all output: as the `config` field of JSON reports, and as the
//! first line of CSV files:
//!
//! ```text
//! # vdge-csv schema=1 command=gw-sweep config={"command":"gw-sweep",...}
//! ```
//!
//! Feeding either document back through [`load_config`] reproduces the run
//! bit for bit. Independent tasks run in parallel, but all aggregation is
//! ordered by task index, so thread count never changes the output.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::io::Write;

use clap::{Args, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ansatz::{haar_random_params, params_to_dense_product, ProductParams};
use crate::cspsa::{run_vdge, CspsaConfig, GmeEstimate, Measurement};
use crate::dense::{haar_random_state, make_ghz, make_gw, make_w, PureState};
use crate::mps::{mps_ghz, mps_w, perturb_mps, MpsState};
use crate::oracle::{ghz_optimum, reference_gme, w_optimum, OracleConfig, RankOneTarget, ReferenceGme};
use crate::seed::{derive_seed, task_rng};
use crate::shots::{ShotConfig, DEFAULT_SHOTS};
use crate::stats::{bootstrap, median, summarize};
use crate::{GmeError, Result};

/// Version of the CSV and report layouts.
pub const SCHEMA_VERSION: u32 = 1;

/// Offsets the oracle's seed stream away from the optimizer's.
const ORACLE_STREAM: u64 = 1 << 40;

/// Options shared by every command that runs the optimizer.
///
/// Unset budgets and gains take command-specific defaults when the experiment
/// is resolved.
#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VdgeOptions {
    /// CSPSA iterations K per repetition.
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Multi-start repetitions R.
    #[arg(long)]
    pub repetitions: Option<usize>,
    /// Shots N per fidelity estimate.
    #[arg(long, default_value_t = DEFAULT_SHOTS)]
    pub shots: u64,
    /// Per-qubit readout flip probability (qualitative noise knob).
    #[arg(long, default_value_t = 0.0)]
    pub readout_flip: f64,
    /// Evaluate fidelities exactly instead of sampling shots.
    #[arg(long)]
    pub exact: bool,
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Gain numerator a.
    #[arg(long)]
    pub gain_a: Option<f64>,
    /// Perturbation numerator b.
    #[arg(long)]
    pub gain_b: Option<f64>,
    /// Stability offset A.
    #[arg(long)]
    pub gain_stability: Option<f64>,
    /// Gain exponent s.
    #[arg(long)]
    pub gain_exponent: Option<f64>,
    /// Perturbation exponent t.
    #[arg(long)]
    pub perturbation_exponent: Option<f64>,
    /// Multi-start count of the reference solver.
    #[arg(long, default_value_t = OracleConfig::default().starts)]
    pub oracle_starts: usize,
}

impl Default for VdgeOptions {
    fn default() -> Self {
        Self {
            iterations: None,
            repetitions: None,
            shots: DEFAULT_SHOTS,
            readout_flip: 0.0,
            exact: false,
            seed: 0,
            gain_a: None,
            gain_b: None,
            gain_stability: None,
            gain_exponent: None,
            perturbation_exponent: None,
            oracle_starts: OracleConfig::default().starts,
        }
    }
}

impl VdgeOptions {
    fn with_defaults(mut self, iterations: usize, repetitions: usize, gains: CspsaConfig) -> Self {
        self.iterations.get_or_insert(iterations);
        self.repetitions.get_or_insert(repetitions);
        self.gain_a.get_or_insert(gains.a);
        self.gain_b.get_or_insert(gains.b);
        self.gain_stability.get_or_insert(gains.stability);
        self.gain_exponent.get_or_insert(gains.gain_exponent);
        self.perturbation_exponent.get_or_insert(gains.perturbation_exponent);
        self
    }

    pub fn iterations(&self) -> usize {
        self.iterations.unwrap_or(150)
    }

    pub fn repetitions(&self) -> usize {
        self.repetitions.unwrap_or(5)
    }

    pub fn cspsa(&self, seed: u64) -> CspsaConfig {
        let d = CspsaConfig::default();
        CspsaConfig {
            a: self.gain_a.unwrap_or(d.a),
            b: self.gain_b.unwrap_or(d.b),
            stability: self.gain_stability.unwrap_or(d.stability),
            gain_exponent: self.gain_exponent.unwrap_or(d.gain_exponent),
            perturbation_exponent: self.perturbation_exponent.unwrap_or(d.perturbation_exponent),
            iterations: self.iterations(),
            seed,
        }
    }

    pub fn measurement(&self) -> Result<Measurement> {
        if self.exact {
            return Ok(Measurement::Exact);
        }
        Ok(Measurement::Sampled(ShotConfig::new(self.shots, self.readout_flip)?))
    }

    pub fn oracle(&self, seed: u64) -> OracleConfig {
        OracleConfig {
            starts: self.oracle_starts,
            seed,
            ..OracleConfig::default()
        }
    }

    fn validate(&self) -> Result<()> {
        self.cspsa(0).validate()?;
        self.measurement()?;
        if self.repetitions() == 0 {
            return Err(GmeError::format("repetitions", "must be at least 1"));
        }
        if self.oracle_starts == 0 {
            return Err(GmeError::format("oracle_starts", "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BackendKind {
    Dense,
    Mps,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Ghz,
    W,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateKind {
    Ghz,
    W,
    Gw,
    Haar,
    Product,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateArgs {
    /// Dense (`amplitudes`) or MPS (`tensors`) state file.
    pub input: std::path::PathBuf,
    /// Backend used for fidelities; MPS files may run on either.
    #[arg(long, value_enum, default_value_t = BackendKind::Dense)]
    pub backend: BackendKind,
    #[command(flatten)]
    #[serde(flatten)]
    pub vdge: VdgeOptions,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GwSweepArgs {
    /// Relative phases φ, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, FRAC_PI_4, FRAC_PI_2, PI])]
    pub phis: Vec<f64>,
    /// Number of equally spaced s values in [0, 1].
    #[arg(long, default_value_t = 31)]
    pub s_count: usize,
    /// Independent best-of-R estimates per state; median and quartiles are
    /// taken over these.
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    /// Bootstrap resamples for the interval on the median.
    #[arg(long, default_value_t = 1000)]
    pub bootstrap: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub vdge: VdgeOptions,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomBenchArgs {
    /// Qubit counts, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [3usize, 4, 5, 6])]
    pub qubits: Vec<usize>,
    /// Haar-random states per qubit count.
    #[arg(long, default_value_t = 20)]
    pub states: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub vdge: VdgeOptions,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MpsBenchArgs {
    #[arg(long, default_value_t = 12)]
    pub n: usize,
    /// Variance of the Gaussian tensor perturbation.
    #[arg(long, default_value_t = 0.1)]
    pub lambda: f64,
    #[arg(long, value_enum, default_value_t = Family::Ghz)]
    pub family: Family,
    /// Perturbed states in the ensemble.
    #[arg(long, default_value_t = 20)]
    pub states: usize,
    /// Full-size run: 25 qubits, 1000 states, 10⁴ iterations (long).
    #[arg(long)]
    #[serde(default)]
    pub full_scale: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub vdge: VdgeOptions,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MakeStateArgs {
    #[arg(long, value_enum)]
    pub kind: StateKind,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// GHZ weight for `gw`.
    #[arg(long, default_value_t = 0.5)]
    pub s: f64,
    /// Relative phase for `gw`.
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl EstimateArgs {
    pub fn options(&self) -> VdgeOptions {
        self.vdge.clone().with_defaults(150, 5, CspsaConfig::default())
    }
}

impl GwSweepArgs {
    pub fn options(&self) -> VdgeOptions {
        self.vdge.clone().with_defaults(150, 5, CspsaConfig::default())
    }
}

impl RandomBenchArgs {
    pub fn options(&self) -> VdgeOptions {
        self.vdge.clone().with_defaults(150, 20, CspsaConfig::default())
    }
}

impl MpsBenchArgs {
    /// Applies `full_scale` and the warm-start defaults.
    pub fn resolved(&self) -> MpsBenchArgs {
        let mut out = self.clone();
        if out.full_scale {
            out.n = 25;
            out.states = 1000;
            out.vdge.iterations = Some(10_000);
        }
        out.vdge = out.vdge.with_defaults(2000, 1, CspsaConfig::warm_start());
        out
    }
}

/// A fully described run.
#[derive(Subcommand, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Experiment {
    /// Estimate the GME of a state file and compare with the reference.
    Estimate(EstimateArgs),
    /// GHZ/W superposition sweep over s for several phases.
    GwSweep(GwSweepArgs),
    /// Error versus iteration for Haar-random states.
    RandomBench(RandomBenchArgs),
    /// Error versus iteration for perturbed GHZ or W matrix product states.
    MpsBench(MpsBenchArgs),
    /// Write a state file for one of the built-in families.
    MakeState(MakeStateArgs),
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Estimate(_) => "estimate",
            Experiment::GwSweep(_) => "gw-sweep",
            Experiment::RandomBench(_) => "random-bench",
            Experiment::MpsBench(_) => "mps-bench",
            Experiment::MakeState(_) => "make-state",
        }
    }

    /// Fills every command-specific default so the value fully determines
    /// the run.
    pub fn resolved(&self) -> Experiment {
        let mut out = self.clone();
        match &mut out {
            Experiment::Estimate(a) => a.vdge = a.options(),
            Experiment::GwSweep(a) => a.vdge = a.options(),
            Experiment::RandomBench(a) => a.vdge = a.options(),
            Experiment::MpsBench(a) => *a = a.resolved(),
            Experiment::MakeState(_) => {}
        }
        out
    }

    /// Runs the experiment and writes its document to `out`.
    pub fn run(&self, out: &mut dyn Write) -> Result<()> {
        let resolved = self.resolved();
        match &resolved {
            Experiment::Estimate(args) => {
                let report = estimate(args, &resolved)?;
                serde_json::to_writer_pretty(&mut *out, &report)?;
                writeln!(out)?;
            }
            Experiment::GwSweep(args) => write_csv(out, &resolved, &gw_sweep(args)?)?,
            Experiment::RandomBench(args) => write_csv(out, &resolved, &random_bench(args)?)?,
            Experiment::MpsBench(args) => write_csv(out, &resolved, &mps_bench(args)?)?,
            Experiment::MakeState(args) => {
                writeln!(out, "{}", make_state(args)?.to_json())?;
            }
        }
        Ok(())
    }
}

/// Parses a config document: a bare [`Experiment`], a JSON report with a
/// `config` field, or a CSV produced by this module.
pub fn load_config(text: &str) -> Result<Experiment> {
    let trimmed = text.trim_start();
    if let Some(header) = trimmed.strip_prefix('#') {
        let line = header.lines().next().unwrap_or_default();
        let json = line
            .split_once("config=")
            .map(|(_, j)| j)
            .ok_or_else(|| GmeError::format("config", "CSV header has no config= field"))?;
        return Ok(serde_json::from_str(json)?);
    }
    let value: serde_json::Value = serde_json::from_str(trimmed)?;
    match value.get("config") {
        Some(config) => Ok(serde_json::from_value(config.clone())?),
        None => Ok(serde_json::from_value(value)?),
    }
}

/// Tabular output rows.
pub trait CsvRow: Serialize {}

fn write_csv<T: CsvRow>(out: &mut dyn Write, config: &Experiment, rows: &[T]) -> Result<()> {
    writeln!(
        out,
        "# vdge-csv schema={SCHEMA_VERSION} command={} config={}",
        config.name(),
        serde_json::to_string(config)?
    )?;
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

/// A state loaded for estimation.
pub enum LoadedState {
    Dense(PureState),
    Mps(MpsState),
}

/// Reads either state file layout, choosing by the presence of `tensors`.
pub fn load_state(text: &str) -> Result<LoadedState> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.get("tensors").is_some() {
        Ok(LoadedState::Mps(MpsState::from_json(text)?))
    } else {
        Ok(LoadedState::Dense(PureState::from_json(text)?))
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct OracleSummary {
    pub gme: f64,
    pub eigenvalue: f64,
    pub params: ProductParams,
}

impl From<ReferenceGme> for OracleSummary {
    fn from(r: ReferenceGme) -> Self {
        Self {
            gme: r.gme,
            eigenvalue: r.eigenvalue,
            params: r.params,
        }
    }
}

/// JSON document written by `estimate`.
#[derive(Debug, Serialize, Deserialize)]
pub struct EstimateReport {
    pub schema: u32,
    pub config: Experiment,
    pub seed: u64,
    pub n_qubits: usize,
    /// `Ê_*`.
    pub estimate: f64,
    /// `Λ̂²`.
    pub eigenvalue: f64,
    pub estimates: Vec<f64>,
    pub selected: usize,
    pub oracle: OracleSummary,
    pub abs_error: f64,
    pub vdge: GmeEstimate,
}

fn estimate_on<T>(state: &T, args: &EstimateArgs, config: &Experiment) -> Result<EstimateReport>
where
    T: RankOneTarget + Sync,
{
    let opts = &args.options();
    opts.validate()?;
    let vdge = run_vdge(
        state,
        opts.measurement()?,
        &opts.cspsa(opts.seed),
        opts.repetitions(),
        None,
    )?;
    let oracle = reference_gme(state, &opts.oracle(derive_seed(opts.seed, ORACLE_STREAM)))?;
    Ok(EstimateReport {
        schema: SCHEMA_VERSION,
        config: config.clone(),
        seed: opts.seed,
        n_qubits: state.n_qubits(),
        estimate: vdge.estimate,
        eigenvalue: vdge.eigenvalue,
        estimates: vdge.estimates.clone(),
        selected: vdge.selected,
        abs_error: (vdge.estimate - oracle.gme).abs(),
        oracle: oracle.into(),
        vdge,
    })
}

/// Runs the multi-start estimate and the reference solver on one state file.
pub fn estimate(args: &EstimateArgs, config: &Experiment) -> Result<EstimateReport> {
    let text = std::fs::read_to_string(&args.input)?;
    match (load_state(&text)?, args.backend) {
        (LoadedState::Dense(s), BackendKind::Dense) => estimate_on(&s, args, config),
        (LoadedState::Mps(m), BackendKind::Mps) => estimate_on(&m, args, config),
        (LoadedState::Mps(m), BackendKind::Dense) => {
            estimate_on(&crate::mps::mps_to_dense(&m)?, args, config)
        }
        (LoadedState::Dense(_), BackendKind::Mps) => Err(GmeError::format(
            "backend",
            "dense state files run on the dense backend only",
        )),
    }
}

/// One `(φ, s)` point of the GHZ/W sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GwRow {
    pub phi: f64,
    pub s: f64,
    #[serde(rename = "E_oracle")]
    pub e_oracle: f64,
    #[serde(rename = "E_vdge_median")]
    pub e_vdge_median: f64,
    #[serde(rename = "E_vdge_q1")]
    pub e_vdge_q1: f64,
    #[serde(rename = "E_vdge_q3")]
    pub e_vdge_q3: f64,
    pub reps: usize,
    pub iters: usize,
    pub shots: u64,
    pub seed: u64,
    pub trials: usize,
    /// 95 % percentile-bootstrap interval of the median.
    #[serde(rename = "E_vdge_ci_lo")]
    pub ci_lo: f64,
    #[serde(rename = "E_vdge_ci_hi")]
    pub ci_hi: f64,
}

impl CsvRow for GwRow {}

/// `s` grid point `i` of `count` equally spaced values in `[0, 1]`.
fn s_value(i: usize, count: usize) -> f64 {
    if count == 1 {
        return 1.0;
    }
    i as f64 / (count - 1) as f64
}

pub fn gw_sweep(args: &GwSweepArgs) -> Result<Vec<GwRow>> {
    let opts = &args.options();
    opts.validate()?;
    if args.s_count == 0 || args.trials == 0 || args.bootstrap == 0 {
        return Err(GmeError::format("s_count/trials/bootstrap", "must be at least 1"));
    }
    let measurement = opts.measurement()?;
    let points: Vec<(f64, f64)> = args
        .phis
        .iter()
        .flat_map(|&phi| (0..args.s_count).map(move |i| (phi, s_value(i, args.s_count))))
        .collect();
    points
        .par_iter()
        .enumerate()
        .map(|(idx, &(phi, s))| {
            let state = make_gw(s, phi)?;
            let point_seed = derive_seed(opts.seed, idx as u64);
            let oracle = reference_gme(&state, &opts.oracle(derive_seed(point_seed, ORACLE_STREAM)))?;
            let trials = (0..args.trials)
                .map(|t| {
                    let cfg = opts.cspsa(derive_seed(point_seed, t as u64));
                    Ok(run_vdge(&state, measurement, &cfg, opts.repetitions(), None)?.estimate)
                })
                .collect::<Result<Vec<f64>>>()?;
            let summary = summarize(&trials)?;
            let (ci_lo, ci_hi) = bootstrap(
                &trials,
                |v| median(v).expect("non-empty"),
                args.bootstrap,
                0.95,
                &mut task_rng(point_seed, ORACLE_STREAM + 1),
            )?;
            Ok(GwRow {
                phi,
                s,
                e_oracle: oracle.gme,
                e_vdge_median: summary.median,
                e_vdge_q1: summary.q1,
                e_vdge_q3: summary.q3,
                reps: opts.repetitions(),
                iters: opts.iterations(),
                shots: opts.shots,
                seed: opts.seed,
                trials: args.trials,
                ci_lo,
                ci_hi,
            })
        })
        .collect()
}

/// Median and quartiles of `|Ê_k − E|` across an ensemble at iteration `k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    /// `dense` or the MPS family name.
    pub ensemble: String,
    pub n: usize,
    pub k: usize,
    pub err_median: f64,
    pub err_q1: f64,
    pub err_q3: f64,
    pub states: usize,
    pub reps: usize,
    pub iters: usize,
    pub shots: u64,
    pub seed: u64,
    pub lambda: f64,
}

impl CsvRow for CurveRow {}

/// Error curves for one state: `|Ê_k − E|` for `k = 0..=K` along the selected
/// repetition.
pub fn error_curve(estimate: &GmeEstimate, reference: f64) -> Vec<f64> {
    estimate
        .selected_curve()
        .into_iter()
        .map(|e| (e - reference).abs())
        .collect()
}

/// Summarizes per-state curves into `K + 1` rows.
fn aggregate_curves(curves: &[Vec<f64>], template: &CurveRow) -> Result<Vec<CurveRow>> {
    let points = curves.first().map(Vec::len).ok_or(GmeError::EmptyInput)?;
    (0..points)
        .map(|k| {
            let column: Vec<f64> = curves.iter().map(|c| c[k]).collect();
            let s = summarize(&column)?;
            Ok(CurveRow {
                k,
                err_median: s.median,
                err_q1: s.q1,
                err_q3: s.q3,
                ..template.clone()
            })
        })
        .collect()
}

pub fn random_bench(args: &RandomBenchArgs) -> Result<Vec<CurveRow>> {
    let opts = &args.options();
    opts.validate()?;
    if args.states == 0 {
        return Err(GmeError::format("states", "must be at least 1"));
    }
    let measurement = opts.measurement()?;
    let mut rows = Vec::new();
    for &n in &args.qubits {
        if n == 0 || n > crate::dense::MAX_DENSE_QUBITS {
            return Err(GmeError::format("qubits", format!("{n} is not a supported qubit count")));
        }
        let n_seed = derive_seed(opts.seed, n as u64);
        let curves = (0..args.states)
            .into_par_iter()
            .map(|i| {
                let state_seed = derive_seed(n_seed, i as u64);
                let state = haar_random_state(n, &mut task_rng(state_seed, ORACLE_STREAM + 2))?;
                let oracle = reference_gme(&state, &opts.oracle(derive_seed(state_seed, ORACLE_STREAM)))?;
                let est = run_vdge(&state, measurement, &opts.cspsa(state_seed), opts.repetitions(), None)?;
                Ok(error_curve(&est, oracle.gme))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.extend(aggregate_curves(
            &curves,
            &CurveRow {
                ensemble: "dense".into(),
                n,
                k: 0,
                err_median: 0.0,
                err_q1: 0.0,
                err_q3: 0.0,
                states: args.states,
                reps: opts.repetitions(),
                iters: opts.iterations(),
                shots: opts.shots,
                seed: opts.seed,
                lambda: 0.0,
            },
        )?);
    }
    Ok(rows)
}

/// Unperturbed family state and its known maximizer.
pub fn family_state(family: Family, n: usize) -> Result<(MpsState, ProductParams)> {
    match family {
        Family::Ghz => Ok((mps_ghz(n)?, ghz_optimum(n)?)),
        Family::W => Ok((mps_w(n)?, w_optimum(n)?)),
    }
}

pub fn mps_bench(args: &MpsBenchArgs) -> Result<Vec<CurveRow>> {
    let args = &args.resolved();
    let opts = &args.vdge;
    opts.validate()?;
    if args.states == 0 {
        return Err(GmeError::format("states", "must be at least 1"));
    }
    let measurement = opts.measurement()?;
    let (base, init) = family_state(args.family, args.n)?;
    let curves = (0..args.states)
        .into_par_iter()
        .map(|i| {
            let state_seed = derive_seed(opts.seed, i as u64);
            let state = perturb_mps(&base, args.lambda, &mut task_rng(state_seed, ORACLE_STREAM + 2))?;
            let oracle = reference_gme(&state, &opts.oracle(derive_seed(state_seed, ORACLE_STREAM)))?;
            let est = run_vdge(
                &state,
                measurement,
                &opts.cspsa(state_seed),
                opts.repetitions(),
                Some(&init),
            )?;
            Ok(error_curve(&est, oracle.gme))
        })
        .collect::<Result<Vec<_>>>()?;
    aggregate_curves(
        &curves,
        &CurveRow {
            ensemble: match args.family {
                Family::Ghz => "mps-ghz".into(),
                Family::W => "mps-w".into(),
            },
            n: args.n,
            k: 0,
            err_median: 0.0,
            err_q1: 0.0,
            err_q3: 0.0,
            states: args.states,
            reps: opts.repetitions(),
            iters: opts.iterations(),
            shots: opts.shots,
            seed: opts.seed,
            lambda: args.lambda,
        },
    )
}

pub fn make_state(args: &MakeStateArgs) -> Result<PureState> {
    match args.kind {
        StateKind::Ghz => make_ghz(args.n),
        StateKind::W => make_w(args.n),
        StateKind::Gw => make_gw(args.s, args.phi),
        StateKind::Haar => haar_random_state(args.n, &mut task_rng(args.seed, 0)),
        StateKind::Product => {
            params_to_dense_product(&haar_random_params(args.n, &mut task_rng(args.seed, 0)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_opts() -> VdgeOptions {
        VdgeOptions {
            iterations: Some(20),
            repetitions: Some(2),
            oracle_starts: 5,
            ..VdgeOptions::default()
        }
    }

    #[test]
    fn gw_grid_shape_and_endpoint() {
        let args = GwSweepArgs {
            phis: vec![0.0, PI],
            s_count: 3,
            trials: 2,
            bootstrap: 10,
            vdge: quick_opts(),
        };
        let rows = gw_sweep(&args).unwrap();
        assert_eq!(rows.len(), 6);
        let ghz_row = rows.iter().find(|r| r.phi == 0.0 && r.s == 1.0).unwrap();
        assert!((ghz_row.e_oracle - 0.5).abs() < 1e-9);
        assert!(rows.iter().all(|r| r.e_vdge_q1 <= r.e_vdge_median && r.e_vdge_median <= r.e_vdge_q3));
    }

    #[test]
    fn s_grid_is_equally_spaced() {
        let grid: Vec<f64> = (0..31).map(|i| s_value(i, 31)).collect();
        assert_eq!(grid[0], 0.0);
        assert_eq!(grid[30], 1.0);
        assert!((grid[3] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn curve_rows_cover_every_iteration() {
        let args = RandomBenchArgs {
            qubits: vec![3],
            states: 2,
            vdge: quick_opts(),
        };
        let rows = random_bench(&args).unwrap();
        assert_eq!(rows.len(), 21);
        assert_eq!(rows.first().unwrap().k, 0);
        assert_eq!(rows.last().unwrap().k, 20);
    }

    #[test]
    fn unperturbed_mps_starts_at_the_optimum() {
        let args = MpsBenchArgs {
            n: 6,
            lambda: 0.0,
            family: Family::W,
            states: 3,
            full_scale: false,
            vdge: VdgeOptions {
                exact: true,
                iterations: Some(200),
                ..quick_opts()
            },
        };
        let rows = mps_bench(&args).unwrap();
        assert!(rows[0].err_median < 0.05, "{}", rows[0].err_median);
        assert!(rows.last().unwrap().err_median < 1e-3, "{}", rows.last().unwrap().err_median);
    }

    #[test]
    fn resolution_fills_defaults() {
        let exp = Experiment::MpsBench(MpsBenchArgs {
            n: 12,
            lambda: 0.1,
            family: Family::Ghz,
            states: 5,
            full_scale: true,
            vdge: VdgeOptions::default(),
        });
        match exp.resolved() {
            Experiment::MpsBench(a) => {
                assert_eq!((a.n, a.states), (25, 1000));
                assert_eq!(a.vdge.iterations, Some(10_000));
                assert_eq!(a.vdge.repetitions, Some(1));
                assert_eq!(a.vdge.cspsa(0), CspsaConfig { iterations: 10_000, ..CspsaConfig::warm_start() });
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn configs_round_trip_through_csv_headers() {
        let exp = Experiment::RandomBench(RandomBenchArgs {
            qubits: vec![3],
            states: 1,
            vdge: quick_opts(),
        })
        .resolved();
        let mut buf = Vec::new();
        exp.run(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# vdge-csv schema=1 command=random-bench"));
        assert_eq!(load_config(&text).unwrap(), exp);

        let mut again = Vec::new();
        load_config(&text).unwrap().run(&mut again).unwrap();
        assert_eq!(String::from_utf8(again).unwrap(), text);
    }

    #[test]
    fn bare_json_config_parses_with_defaults() {
        let exp = load_config(r#"{"command": "gw-sweep", "phis": [0.0], "s_count": 2, "trials": 1, "bootstrap": 5, "shots": 1024, "readout_flip": 0.0, "exact": false, "seed": 4, "gain_exponent": 0.602, "oracle_starts": 3}"#).unwrap();
        match exp {
            Experiment::GwSweep(a) => {
                assert_eq!(a.vdge.shots, 1024);
                assert_eq!(a.vdge.iterations, None);
                assert_eq!(a.vdge.cspsa(0).gain_exponent, 0.602);
                assert_eq!(a.vdge.cspsa(0).a, CspsaConfig::default().a);
            }
            _ => panic!("wrong command"),
        }
    }
}
