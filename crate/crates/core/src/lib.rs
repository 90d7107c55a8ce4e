//! Variational estimation of the geometric measure of entanglement (GME).
//!
//! The GME of an `n`-qubit pure state `|ψ⟩` is `E = 1 − Λ²`, where the
//! entanglement eigenvalue `Λ²` is the largest fidelity `|⟨φ|ψ⟩|²` over all
//! product states `|φ⟩`. This crate estimates it the way a quantum device
//! would: a product-state ansatz is projected onto `|ψ⟩`, the all-zeros
//! frequency `n₀/N` of a finite number of shots gives a noisy fidelity, and a
//! complex simultaneous-perturbation optimizer ([`cspsa`]) climbs it from
//! several random starts.
//!
//! Two state backends implement [`FidelityBackend`]:
//!
//! * [`PureState`]: a dense `2^n` amplitude vector (`n ≤ 26`);
//! * [`MpsState`]: a matrix product state, for chains far beyond dense reach.
//!
//! [`oracle`] provides a classical reference value of `E` via multi-start
//! alternating rank-one approximation, and [`experiments`] bundles the
//! benchmark campaigns driven by the `vdge` binary.
//!
//! Basis ordering is fixed crate-wide: the index of `|α₁…αₙ⟩` is
//! `Σ αᵢ 2^{n−i}`, so qubit 1 is the most significant bit.
//!
//! ```
//! use vdge::{dense, oracle::{reference_gme, OracleConfig}};
//!
//! let ghz = dense::make_ghz(3).unwrap();
//! let reference = reference_gme(&ghz, &OracleConfig::default()).unwrap();
//! assert!((reference.gme - 0.5).abs() < 1e-9);
//! ```

pub mod ansatz;
pub mod cspsa;
pub mod dense;
mod error;
pub mod experiments;
pub mod mps;
pub mod oracle;
pub mod seed;
pub mod shots;
pub mod stats;

pub use ansatz::{FidelityBackend, ProductParams};
pub use cspsa::{run_vdge, CspsaConfig, GmeEstimate, Measurement, RunTrace};
pub use dense::PureState;
pub use error::{GmeError, Result};
pub use mps::MpsState;
pub use shots::ShotConfig;

/// Complex scalar used for every amplitude and parameter.
pub type C64 = num_complex::Complex64;
