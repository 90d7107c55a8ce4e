//! Separable-state ansatz.
//!
//! A product state `⊗ᵢ (αᵢ|0⟩ + βᵢ|1⟩)` is stored as `n` unnormalized complex
//! pairs, i.e. `2n` complex coordinates. Only the direction of each pair is
//! physical: every backend normalizes the pairs before contracting, so scaling
//! a pair by any nonzero complex number leaves every fidelity unchanged.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::dense::PureState;
use crate::{GmeError, Result, C64};

/// Pairs with `|α|² + |β|²` at or below this value are degenerate.
pub const EPSILON_NORM: f64 = 1e-12;

/// Parameters of the product-state ansatz, one `(α, β)` pair per qubit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductParams {
    pairs: Vec<(C64, C64)>,
}

impl ProductParams {
    /// Validates that there is at least one pair and none is degenerate.
    pub fn new(pairs: Vec<(C64, C64)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(GmeError::InvalidQubitCount {
                n: 0,
                reason: "an ansatz needs at least one qubit",
            });
        }
        for (qubit, &(alpha, beta)) in pairs.iter().enumerate() {
            check_pair(qubit, alpha, beta)?;
        }
        Ok(Self { pairs })
    }

    /// The same pair on every qubit.
    pub fn uniform(n: usize, alpha: C64, beta: C64) -> Result<Self> {
        Self::new(vec![(alpha, beta); n])
    }

    /// Computational basis product state; `bits[i]` is qubit `i + 1`.
    pub fn basis(bits: &[u8]) -> Result<Self> {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        Self::new(
            bits.iter()
                .map(|&b| if b == 0 { (one, zero) } else { (zero, one) })
                .collect(),
        )
    }

    /// Rebuilds parameters from the flat layout `[α₁, β₁, α₂, β₂, …]`.
    pub fn from_flat(flat: &[C64]) -> Result<Self> {
        if flat.is_empty() || flat.len() % 2 != 0 {
            return Err(GmeError::DimensionMismatch {
                expected: 2 * (flat.len() / 2).max(1),
                found: flat.len(),
            });
        }
        Self::new(flat.chunks_exact(2).map(|c| (c[0], c[1])).collect())
    }

    pub fn n_qubits(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(C64, C64)] {
        &self.pairs
    }

    /// Flat layout `[α₁, β₁, α₂, β₂, …]` walked by the optimizer.
    pub fn to_flat(&self) -> Vec<C64> {
        self.pairs.iter().flat_map(|&(a, b)| [a, b]).collect()
    }

    /// Every pair normalized to unit length, phases kept.
    pub fn normalized_pairs(&self) -> Vec<(C64, C64)> {
        self.pairs
            .iter()
            .map(|&(a, b)| {
                let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
                (a / norm, b / norm)
            })
            .collect()
    }

    /// Same state with every pair rescaled to unit norm.
    pub fn unit_pairs(&self) -> Self {
        Self {
            pairs: self.normalized_pairs(),
        }
    }

    /// Copy with pair `qubit` multiplied by `factor`.
    pub fn with_scaled_pair(&self, qubit: usize, factor: C64) -> Result<Self> {
        let mut pairs = self.pairs.clone();
        let (a, b) = pairs[qubit];
        pairs[qubit] = (a * factor, b * factor);
        Self::new(pairs)
    }

    /// Copy with pair `qubit` replaced.
    pub fn with_pair(&self, qubit: usize, pair: (C64, C64)) -> Result<Self> {
        let mut pairs = self.pairs.clone();
        pairs[qubit] = pair;
        Self::new(pairs)
    }

    pub(crate) fn check_qubits(&self, n: usize) -> Result<()> {
        if self.pairs.len() != n {
            return Err(GmeError::DimensionMismatch {
                expected: n,
                found: self.pairs.len(),
            });
        }
        Ok(())
    }
}

fn check_pair(qubit: usize, alpha: C64, beta: C64) -> Result<f64> {
    let norm = alpha.norm_sqr() + beta.norm_sqr();
    // NaN fails this comparison too.
    if !(norm > EPSILON_NORM) || !norm.is_finite() {
        return Err(GmeError::DegeneratePair { qubit, norm });
    }
    Ok(norm)
}

/// Rescales `(α, β)` by a positive real so that `|α|² + |β|² = 1`.
pub fn normalize_pair(pair: (C64, C64)) -> Result<(C64, C64)> {
    let norm = check_pair(0, pair.0, pair.1)?.sqrt();
    Ok((pair.0 / norm, pair.1 / norm))
}

/// Standard complex Gaussian for each coordinate; the normalized pairs are
/// Haar-distributed single-qubit states.
pub fn haar_random_params<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ProductParams {
    assert!(n >= 1, "haar_random_params needs at least one qubit");
    let mut pairs = Vec::with_capacity(n);
    while pairs.len() < n {
        let alpha = standard_complex(rng);
        let beta = standard_complex(rng);
        // Probability zero, but keeps the invariant unconditional.
        if alpha.norm_sqr() + beta.norm_sqr() > EPSILON_NORM {
            pairs.push((alpha, beta));
        }
    }
    ProductParams { pairs }
}

/// Complex number with independent standard normal real and imaginary parts.
pub(crate) fn standard_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Dense `2^n` amplitude vector of the (normalized) product state.
pub fn params_to_dense_product(params: &ProductParams) -> Result<PureState> {
    let mut amplitudes = vec![C64::new(1.0, 0.0)];
    for (alpha, beta) in params.normalized_pairs() {
        amplitudes = amplitudes
            .iter()
            .flat_map(|&c| [c * alpha, c * beta])
            .collect();
    }
    PureState::from_amplitudes(amplitudes)
}

/// A state representation that can evaluate `|⟨φ(θ)|ψ⟩|²` exactly.
///
/// Implementations must normalize the pairs before contracting, return a value
/// clamped to `[0, 1]`, and reject parameter sets whose length differs from
/// [`n_qubits`](Self::n_qubits).
pub trait FidelityBackend {
    fn n_qubits(&self) -> usize;

    fn exact_fidelity(&self, params: &ProductParams) -> Result<f64>;
}

impl<T: FidelityBackend + ?Sized> FidelityBackend for &T {
    fn n_qubits(&self) -> usize {
        (**self).n_qubits()
    }

    fn exact_fidelity(&self, params: &ProductParams) -> Result<f64> {
        (**self).exact_fidelity(params)
    }
}
