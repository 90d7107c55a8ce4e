//! Dense statevector backend.

use std::f64::consts::FRAC_1_SQRT_2;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::ansatz::{standard_complex, FidelityBackend, ProductParams};
use crate::{GmeError, Result, C64};

/// Largest register the dense backend accepts (16 bytes per amplitude).
pub const MAX_DENSE_QUBITS: usize = 26;

const NORM_TOL: f64 = 1e-10;
/// Tolerance on the norm of amplitudes read from a state file.
pub const FILE_NORM_TOL: f64 = 1e-6;

/// Normalized `n`-qubit pure state, qubit 1 most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    n: usize,
    amplitudes: Vec<C64>,
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(GmeError::format(
            "amplitudes",
            format!("length {len} is not a power of two ≥ 2"),
        ));
    }
    let n = len.trailing_zeros() as usize;
    if n > MAX_DENSE_QUBITS {
        return Err(GmeError::TooLarge {
            n,
            limit: MAX_DENSE_QUBITS,
            what: "the dense backend",
        });
    }
    Ok(n)
}

fn norm_sqr(amplitudes: &[C64]) -> f64 {
    amplitudes.iter().map(C64::norm_sqr).sum()
}

impl PureState {
    /// Wraps amplitudes that are already normalized to within `1e-10`.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let n = qubits_for_len(amplitudes.len())?;
        let norm = norm_sqr(&amplitudes).sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(GmeError::OutOfRange {
                what: "state norm",
                value: norm,
                range: "1 ± 1e-10",
            });
        }
        Ok(Self { n, amplitudes })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self> {
        let n = qubits_for_len(amplitudes.len())?;
        let norm = norm_sqr(&amplitudes).sqrt();
        if !(norm > 1e-300) || !norm.is_finite() {
            return Err(GmeError::ZeroNorm);
        }
        amplitudes.iter_mut().for_each(|c| *c /= norm);
        Ok(Self { n, amplitudes })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        norm_sqr(&self.amplitudes).sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.n != other.n {
            return Err(GmeError::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Applies the 2×2 matrix `u` (row-major) to qubit `qubit` (0-based).
    pub fn apply_single_qubit(&self, qubit: usize, u: [[C64; 2]; 2]) -> Result<Self> {
        if qubit >= self.n {
            return Err(GmeError::DimensionMismatch {
                expected: self.n,
                found: qubit + 1,
            });
        }
        let stride = 1usize << (self.n - 1 - qubit);
        let mut out = self.amplitudes.clone();
        for block in (0..out.len()).step_by(2 * stride) {
            for j in block..block + stride {
                let (x0, x1) = (self.amplitudes[j], self.amplitudes[j + stride]);
                out[j] = u[0][0] * x0 + u[0][1] * x1;
                out[j + stride] = u[1][0] * x0 + u[1][1] * x1;
            }
        }
        Self::normalized(out)
    }

    /// Multiplies every amplitude by `e^{iγ}`.
    pub fn with_global_phase(&self, gamma: f64) -> Self {
        let phase = C64::from_polar(1.0, gamma);
        Self {
            n: self.n,
            amplitudes: self.amplitudes.iter().map(|c| c * phase).collect(),
        }
    }

    /// Contraction of `⟨φ|` on every qubit except `qubit`, leaving a
    /// two-component vector indexed by that qubit's basis state.
    pub(crate) fn environment(&self, pairs: &[(C64, C64)], qubit: usize) -> [C64; 2] {
        let mut v = self.amplitudes.clone();
        // Leading qubits, qubit 1 first.
        for &pair in &pairs[..qubit] {
            v = contract_qubit(&v, 1, v.len() / 2, pair);
        }
        // Trailing qubits, last qubit first.
        for &pair in pairs[qubit + 1..].iter().rev() {
            v = contract_qubit(&v, v.len() / 2, 1, pair);
        }
        [v[0], v[1]]
    }
}

/// Contracts `conj(α)⟨0| + conj(β)⟨1|` into the middle axis of `v`, viewed
/// with shape `(left, 2, right)`.
fn contract_qubit(v: &[C64], left: usize, right: usize, (alpha, beta): (C64, C64)) -> Vec<C64> {
    let (ca, cb) = (alpha.conj(), beta.conj());
    let mut out = Vec::with_capacity(left * right);
    for l in 0..left {
        let base = l * 2 * right;
        for r in 0..right {
            out.push(ca * v[base + r] + cb * v[base + right + r]);
        }
    }
    out
}

impl FidelityBackend for PureState {
    fn n_qubits(&self) -> usize {
        self.n
    }

    /// Contracts the normalized conjugate pairs one qubit at a time, qubit 1
    /// first; total cost `O(2^n)`.
    fn exact_fidelity(&self, params: &ProductParams) -> Result<f64> {
        params.check_qubits(self.n)?;
        let mut v = contract_qubit(
            &self.amplitudes,
            1,
            self.amplitudes.len() / 2,
            params.normalized_pairs()[0],
        );
        for pair in params.normalized_pairs().into_iter().skip(1) {
            v = contract_qubit(&v, 1, v.len() / 2, pair);
        }
        Ok(v[0].norm_sqr().clamp(0.0, 1.0))
    }
}

fn check_min_qubits(n: usize) -> Result<()> {
    if n < 2 {
        return Err(GmeError::InvalidQubitCount {
            n,
            reason: "at least 2 qubits are required",
        });
    }
    if n > MAX_DENSE_QUBITS {
        return Err(GmeError::TooLarge {
            n,
            limit: MAX_DENSE_QUBITS,
            what: "the dense backend",
        });
    }
    Ok(())
}

/// `(|0…0⟩ + |1…1⟩)/√2`.
pub fn make_ghz(n: usize) -> Result<PureState> {
    check_min_qubits(n)?;
    let mut amplitudes = vec![C64::new(0.0, 0.0); 1 << n];
    amplitudes[0] = C64::new(FRAC_1_SQRT_2, 0.0);
    amplitudes[(1 << n) - 1] = C64::new(FRAC_1_SQRT_2, 0.0);
    Ok(PureState { n, amplitudes })
}

/// Uniform superposition of the `n` single-excitation basis states.
pub fn make_w(n: usize) -> Result<PureState> {
    check_min_qubits(n)?;
    let mut amplitudes = vec![C64::new(0.0, 0.0); 1 << n];
    let weight = C64::new(1.0 / (n as f64).sqrt(), 0.0);
    for k in 0..n {
        amplitudes[1 << k] = weight;
    }
    Ok(PureState { n, amplitudes })
}

/// Three-qubit `√s |GHZ⟩ + e^{iφ} √(1−s) |W⟩`.
pub fn make_gw(s: f64, phi: f64) -> Result<PureState> {
    if !(0.0..=1.0).contains(&s) {
        return Err(GmeError::OutOfRange {
            what: "s",
            value: s,
            range: "[0, 1]",
        });
    }
    let ghz = make_ghz(3)?;
    let w = make_w(3)?;
    let w_weight = C64::from_polar((1.0 - s).sqrt(), phi);
    let amplitudes = ghz
        .amplitudes
        .iter()
        .zip(&w.amplitudes)
        .map(|(g, w)| g * s.sqrt() + w * w_weight)
        .collect();
    // Disjoint supports keep the sum normalized.
    Ok(PureState { n: 3, amplitudes })
}

/// Haar-random state from normalized i.i.d. standard complex Gaussians.
pub fn haar_random_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<PureState> {
    if n == 0 {
        return Err(GmeError::InvalidQubitCount {
            n,
            reason: "at least 1 qubit is required",
        });
    }
    if n > MAX_DENSE_QUBITS {
        return Err(GmeError::TooLarge {
            n,
            limit: MAX_DENSE_QUBITS,
            what: "the dense backend",
        });
    }
    let amplitudes = (0..1usize << n).map(|_| standard_complex(rng)).collect();
    PureState::normalized(amplitudes)
}

/// Function-style alias for [`FidelityBackend::exact_fidelity`] on a dense state.
pub fn exact_fidelity(state: &PureState, params: &ProductParams) -> Result<f64> {
    state.exact_fidelity(params)
}

/// On-disk layout: `{"n": 3, "amplitudes": [[re, im], …]}` in basis index order.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub n: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

impl From<&PureState> for StateFile {
    fn from(state: &PureState) -> Self {
        Self {
            n: state.n,
            amplitudes: state.amplitudes.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl TryFrom<StateFile> for PureState {
    type Error = GmeError;

    /// Rejects wrong lengths and norms off by more than `1e-6`; renormalizes
    /// anything inside that band.
    fn try_from(file: StateFile) -> Result<Self> {
        if file.n == 0 || file.n > MAX_DENSE_QUBITS {
            return Err(GmeError::format(
                "n",
                format!("{} is outside 1..={MAX_DENSE_QUBITS}", file.n),
            ));
        }
        let expected = 1usize << file.n;
        if file.amplitudes.len() != expected {
            return Err(GmeError::format(
                "amplitudes",
                format!(
                    "expected {expected} entries for n = {}, found {}",
                    file.n,
                    file.amplitudes.len()
                ),
            ));
        }
        let amplitudes: Vec<C64> = file
            .amplitudes
            .iter()
            .map(|&[re, im]| C64::new(re, im))
            .collect();
        if amplitudes.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(GmeError::format("amplitudes", "non-finite entry"));
        }
        let norm = norm_sqr(&amplitudes).sqrt();
        if (norm - 1.0).abs() > FILE_NORM_TOL {
            return Err(GmeError::format(
                "amplitudes",
                format!("norm {norm} differs from 1 by more than {FILE_NORM_TOL:e}"),
            ));
        }
        PureState::normalized(amplitudes)
    }
}

impl PureState {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str::<StateFile>(text)?.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&StateFile::from(self)).expect("state serializes")
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::{haar_random_params, params_to_dense_product};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn nonzero(state: &PureState) -> Vec<usize> {
        (0..state.amplitudes().len())
            .filter(|&i| state.amplitudes()[i].norm() > 0.0)
            .collect()
    }

    #[test]
    fn ghz_examples() {
        for (n, last) in [(2, 3), (3, 7)] {
            let ghz = make_ghz(n).unwrap();
            assert_eq!(nonzero(&ghz), vec![0, last]);
            assert!((ghz.amplitudes()[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
        }
        assert!((make_ghz(5).unwrap().norm() - 1.0).abs() < 1e-12);
        assert!(matches!(make_ghz(1), Err(GmeError::InvalidQubitCount { .. })));
    }

    #[test]
    fn w_examples() {
        let w = make_w(3).unwrap();
        assert_eq!(nonzero(&w), vec![1, 2, 4]);
        assert!((w.amplitudes()[1].re - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(nonzero(&make_w(2).unwrap()), vec![1, 2]);
        for n in 2..9 {
            assert_eq!(nonzero(&make_w(n).unwrap()).len(), n);
        }
        assert!(make_w(0).is_err());
    }

    #[test]
    fn gw_limits_and_arithmetic() {
        let ghz = make_gw(1.0, 1.234).unwrap();
        for (a, b) in ghz.amplitudes().iter().zip(make_ghz(3).unwrap().amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
        assert_eq!(make_gw(0.0, 0.0).unwrap(), make_w(3).unwrap());

        let mixed = make_gw(0.5, PI).unwrap();
        assert!((mixed.amplitudes()[0].re - 0.5).abs() < 1e-12);
        assert!((mixed.amplitudes()[1].re + 0.408_248_29).abs() < 1e-8);
        assert!(mixed.amplitudes()[1].im.abs() < 1e-12);

        assert!(matches!(make_gw(1.5, 0.0), Err(GmeError::OutOfRange { .. })));
        assert!(make_gw(-0.1, 0.0).is_err());
    }

    #[test]
    fn gw_norm_over_random_parameters() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let s: f64 = rng.random();
            let phi = rng.random_range(0.0..2.0 * PI);
            assert!((make_gw(s, phi).unwrap().norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn haar_state_norm_and_determinism() {
        let a = haar_random_state(4, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = haar_random_state(4, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert!((a.norm() - 1.0).abs() < 1e-12);
        assert_eq!(a, b);
    }

    #[test]
    fn haar_state_marginal_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let draws = 100_000;
        let mean: f64 = (0..draws)
            .map(|_| haar_random_state(1, &mut rng).unwrap().amplitudes()[0].norm_sqr())
            .sum::<f64>()
            / draws as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn fidelity_examples() {
        let ghz = make_ghz(3).unwrap();
        let zeros = ProductParams::basis(&[0, 0, 0]).unwrap();
        assert!((ghz.exact_fidelity(&zeros).unwrap() - 0.5).abs() < 1e-15);

        let w = make_w(3).unwrap();
        let p = ProductParams::basis(&[0, 0, 1]).unwrap();
        assert!((w.exact_fidelity(&p).unwrap() - 1.0 / 3.0).abs() < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let params = haar_random_params(5, &mut rng);
        let product = params_to_dense_product(&params).unwrap();
        assert!((product.exact_fidelity(&params).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn fidelity_rejects_wrong_length() {
        let ghz = make_ghz(3).unwrap();
        let p = ProductParams::basis(&[0, 0]).unwrap();
        assert!(matches!(
            ghz.exact_fidelity(&p),
            Err(GmeError::DimensionMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn fast_contraction_matches_naive_inner_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for n in 1..=10 {
            for _ in 0..5 {
                let psi = haar_random_state(n, &mut rng).unwrap();
                let params = haar_random_params(n, &mut rng);
                let phi = params_to_dense_product(&params).unwrap();
                let naive = phi.inner(&psi).unwrap().norm_sqr();
                let fast = psi.exact_fidelity(&params).unwrap();
                assert!((naive - fast).abs() < 1e-12, "n={n}: {naive} vs {fast}");

                let rotated = psi.with_global_phase(rng.random_range(0.0..6.3));
                assert!((rotated.exact_fidelity(&params).unwrap() - fast).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn environment_contracts_to_fidelity() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let psi = haar_random_state(5, &mut rng).unwrap();
        let params = haar_random_params(5, &mut rng);
        let pairs = params.normalized_pairs();
        let f = psi.exact_fidelity(&params).unwrap();
        for q in 0..5 {
            let env = psi.environment(&pairs, q);
            let (a, b) = pairs[q];
            let overlap = a.conj() * env[0] + b.conj() * env[1];
            assert!((overlap.norm_sqr() - f).abs() < 1e-12);
        }
    }

    #[test]
    fn single_qubit_gate_acts_on_the_right_bit() {
        // X on qubit 1 of |00⟩ gives |10⟩ = index 2.
        let zero = params_to_dense_product(&ProductParams::basis(&[0, 0]).unwrap()).unwrap();
        let one = C64::new(1.0, 0.0);
        let z = C64::new(0.0, 0.0);
        let flipped = zero.apply_single_qubit(0, [[z, one], [one, z]]).unwrap();
        assert_eq!(nonzero(&flipped), vec![2]);
    }

    #[test]
    fn state_file_round_trip_and_validation() {
        let w = make_w(3).unwrap();
        let back = PureState::from_json(&w.to_json()).unwrap();
        assert_eq!(back, w);

        let short = r#"{"n": 3, "amplitudes": [[1, 0], [0, 0]]}"#;
        let err = PureState::from_json(short).unwrap_err().to_string();
        assert!(err.contains("amplitudes"), "{err}");

        let off = r#"{"n": 1, "amplitudes": [[1.1, 0], [0, 0]]}"#;
        assert!(PureState::from_json(off).unwrap_err().to_string().contains("norm"));

        let nearly = r#"{"n": 1, "amplitudes": [[1.0000001, 0], [0, 0]]}"#;
        let s = PureState::from_json(nearly).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-15);

        let missing = r#"{"amplitudes": [[1, 0], [0, 0]]}"#;
        assert!(PureState::from_json(missing).unwrap_err().to_string().contains("`n`"));
    }
}
