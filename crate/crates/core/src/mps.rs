//! Matrix product state backend.
//!
//! Site tensors have shape `(left bond, 2, right bond)` with unit boundary
//! bonds; entry `(l, p, r)` lives at `(l * 2 + p) * right + r`. Product-state
//! overlaps are a left-to-right transfer contraction costing `O(n·χ²)`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::path::Path;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::ansatz::{FidelityBackend, ProductParams};
use crate::dense::{PureState, FILE_NORM_TOL};
use crate::{GmeError, Result, C64};

/// Largest chain [`mps_to_dense`] will expand.
pub const MAX_DENSE_CONVERSION: usize = 20;

const ZERO: C64 = C64::new(0.0, 0.0);

/// One rank-3 site tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct SiteTensor {
    left: usize,
    right: usize,
    data: Vec<C64>,
}

impl SiteTensor {
    pub fn zeros(left: usize, right: usize) -> Self {
        Self {
            left,
            right,
            data: vec![ZERO; left * 2 * right],
        }
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn get(&self, l: usize, p: usize, r: usize) -> C64 {
        self.data[(l * 2 + p) * self.right + r]
    }

    pub fn set(&mut self, l: usize, p: usize, r: usize, value: C64) {
        self.data[(l * 2 + p) * self.right + r] = value;
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    fn scale(&mut self, factor: f64) {
        self.data.iter_mut().for_each(|c| *c *= factor);
    }
}

/// Open-boundary matrix product state.
#[derive(Clone, Debug, PartialEq)]
pub struct MpsState {
    tensors: Vec<SiteTensor>,
}

impl MpsState {
    /// Checks boundary bonds and that adjacent bonds agree.
    pub fn new(tensors: Vec<SiteTensor>) -> Result<Self> {
        if tensors.is_empty() {
            return Err(GmeError::InvalidQubitCount {
                n: 0,
                reason: "an MPS needs at least one site",
            });
        }
        let last = tensors.len() - 1;
        if tensors[0].left != 1 || tensors[last].right != 1 {
            return Err(GmeError::format("bond_dims", "boundary bonds must have size 1"));
        }
        for (j, pair) in tensors.windows(2).enumerate() {
            if pair[0].right != pair[1].left {
                return Err(GmeError::format(
                    format!("tensors[{}]", j + 1),
                    format!(
                        "left bond {} does not match previous right bond {}",
                        pair[1].left, pair[0].right
                    ),
                ));
            }
        }
        Ok(Self { tensors })
    }

    pub fn n_qubits(&self) -> usize {
        self.tensors.len()
    }

    pub fn tensors(&self) -> &[SiteTensor] {
        &self.tensors
    }

    /// Bond sizes including both unit boundaries (`n + 1` entries).
    pub fn bond_dims(&self) -> Vec<usize> {
        std::iter::once(1)
            .chain(self.tensors.iter().map(|t| t.right))
            .collect()
    }

    pub fn max_bond(&self) -> usize {
        self.tensors.iter().map(|t| t.right.max(t.left)).max().unwrap_or(1)
    }

    /// `⟨ψ|ψ⟩` by transfer matrices.
    pub fn norm_sqr(&self) -> f64 {
        let mut env = vec![C64::new(1.0, 0.0)];
        let mut dim = 1;
        for t in &self.tensors {
            let mut next = vec![ZERO; t.right * t.right];
            for r in 0..t.right {
                for rp in 0..t.right {
                    let mut acc = ZERO;
                    for l in 0..dim {
                        for lp in 0..dim {
                            let e = env[l * dim + lp];
                            if e == ZERO {
                                continue;
                            }
                            for p in 0..2 {
                                acc += t.get(l, p, r).conj() * e * t.get(lp, p, rp);
                            }
                        }
                    }
                    next[r * t.right + rp] = acc;
                }
            }
            env = next;
            dim = t.right;
        }
        env[0].re
    }

    /// Left boundary vectors: entry `j` is the contraction of sites `< j`.
    fn left_vectors(&self, pairs: &[(C64, C64)]) -> Vec<Vec<C64>> {
        let mut out = Vec::with_capacity(self.tensors.len() + 1);
        out.push(vec![C64::new(1.0, 0.0)]);
        for (t, &(a, b)) in self.tensors.iter().zip(pairs) {
            let v = out.last().expect("non-empty");
            let (ca, cb) = (a.conj(), b.conj());
            let next = (0..t.right)
                .map(|r| {
                    (0..t.left)
                        .map(|l| v[l] * (ca * t.get(l, 0, r) + cb * t.get(l, 1, r)))
                        .sum()
                })
                .collect();
            out.push(next);
        }
        out
    }

    /// Contraction of `⟨φ|` on every site but `qubit`.
    pub(crate) fn environment(&self, pairs: &[(C64, C64)], qubit: usize) -> [C64; 2] {
        let left = &self.left_vectors(&pairs[..qubit])[qubit];
        let mut right = vec![C64::new(1.0, 0.0)];
        for (t, &(a, b)) in self.tensors[qubit + 1..]
            .iter()
            .zip(&pairs[qubit + 1..])
            .rev()
        {
            let (ca, cb) = (a.conj(), b.conj());
            right = (0..t.left)
                .map(|l| {
                    (0..t.right)
                        .map(|r| (ca * t.get(l, 0, r) + cb * t.get(l, 1, r)) * right[r])
                        .sum()
                })
                .collect();
        }
        let t = &self.tensors[qubit];
        let mut env = [ZERO; 2];
        for (p, slot) in env.iter_mut().enumerate() {
            for (l, &lv) in left.iter().enumerate() {
                for (r, &rv) in right.iter().enumerate() {
                    *slot += lv * t.get(l, p, r) * rv;
                }
            }
        }
        env
    }
}

impl FidelityBackend for MpsState {
    fn n_qubits(&self) -> usize {
        self.tensors.len()
    }

    fn exact_fidelity(&self, params: &ProductParams) -> Result<f64> {
        params.check_qubits(self.n_qubits())?;
        let pairs = params.normalized_pairs();
        let left = self.left_vectors(&pairs);
        Ok(left[self.tensors.len()][0].norm_sqr().clamp(0.0, 1.0))
    }
}

fn check_family_size(n: usize) -> Result<()> {
    if n < 2 {
        return Err(GmeError::InvalidQubitCount {
            n,
            reason: "at least 2 qubits are required",
        });
    }
    Ok(())
}

/// Bond-dimension-2 GHZ chain; the `1/√2` sits on the first site.
pub fn mps_ghz(n: usize) -> Result<MpsState> {
    check_family_size(n)?;
    let one = C64::new(1.0, 0.0);
    let mut tensors = Vec::with_capacity(n);
    let mut first = SiteTensor::zeros(1, 2);
    first.set(0, 0, 0, C64::new(FRAC_1_SQRT_2, 0.0));
    first.set(0, 1, 1, C64::new(FRAC_1_SQRT_2, 0.0));
    tensors.push(first);
    for _ in 1..n - 1 {
        let mut mid = SiteTensor::zeros(2, 2);
        mid.set(0, 0, 0, one);
        mid.set(1, 1, 1, one);
        tensors.push(mid);
    }
    let mut last = SiteTensor::zeros(2, 1);
    last.set(0, 0, 0, one);
    last.set(1, 1, 0, one);
    tensors.push(last);
    MpsState::new(tensors)
}

/// Bond-dimension-2 W chain; the bond records whether an excitation has
/// already appeared to the left.
pub fn mps_w(n: usize) -> Result<MpsState> {
    check_family_size(n)?;
    let one = C64::new(1.0, 0.0);
    let weight = C64::new(1.0 / (n as f64).sqrt(), 0.0);
    let mut tensors = Vec::with_capacity(n);
    let mut first = SiteTensor::zeros(1, 2);
    first.set(0, 0, 0, weight);
    first.set(0, 1, 1, weight);
    tensors.push(first);
    for _ in 1..n - 1 {
        let mut mid = SiteTensor::zeros(2, 2);
        mid.set(0, 0, 0, one);
        mid.set(0, 1, 1, one);
        mid.set(1, 0, 1, one);
        tensors.push(mid);
    }
    let mut last = SiteTensor::zeros(2, 1);
    last.set(0, 1, 0, one);
    last.set(1, 0, 0, one);
    tensors.push(last);
    MpsState::new(tensors)
}

/// Rescales every site by the same real factor so that `⟨ψ|ψ⟩ = 1`.
pub fn normalize_mps(mps: &MpsState) -> Result<MpsState> {
    let norm_sqr = mps.norm_sqr();
    if !(norm_sqr > 1e-300) || !norm_sqr.is_finite() {
        return Err(GmeError::ZeroNorm);
    }
    let factor = norm_sqr.powf(-0.5 / mps.n_qubits() as f64);
    let mut out = mps.clone();
    out.tensors.iter_mut().for_each(|t| t.scale(factor));
    Ok(out)
}

/// Adds complex Gaussian noise to every tensor entry (real and imaginary
/// parts independent, each with mean 0 and variance `lambda`), then
/// normalizes.
pub fn perturb_mps<R: Rng + ?Sized>(mps: &MpsState, lambda: f64, rng: &mut R) -> Result<MpsState> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(GmeError::OutOfRange {
            what: "lambda",
            value: lambda,
            range: "[0, ∞)",
        });
    }
    let noise = Normal::new(0.0, lambda.sqrt()).expect("finite standard deviation");
    let mut out = mps.clone();
    for t in &mut out.tensors {
        for c in &mut t.data {
            *c += C64::new(noise.sample(rng), noise.sample(rng));
        }
    }
    normalize_mps(&out)
}

/// Expands the chain into its `2^n` amplitudes; the MPS must be normalized.
pub fn mps_to_dense(mps: &MpsState) -> Result<PureState> {
    PureState::from_amplitudes(mps.dense_amplitudes()?)
}

impl MpsState {
    /// Raw `2^n` amplitudes, without any normalization.
    pub fn dense_amplitudes(&self) -> Result<Vec<C64>> {
        let n = self.n_qubits();
        if n > MAX_DENSE_CONVERSION {
            return Err(GmeError::TooLarge {
                n,
                limit: MAX_DENSE_CONVERSION,
                what: "dense conversion",
            });
        }
        // Row-major (basis prefix, bond).
        let mut v = vec![C64::new(1.0, 0.0)];
        let mut bond = 1;
        for t in &self.tensors {
            let prefixes = v.len() / bond;
            let mut next = vec![ZERO; prefixes * 2 * t.right];
            for idx in 0..prefixes {
                for l in 0..bond {
                    let x = v[idx * bond + l];
                    if x == ZERO {
                        continue;
                    }
                    for p in 0..2 {
                        for r in 0..t.right {
                            next[(idx * 2 + p) * t.right + r] += x * t.get(l, p, r);
                        }
                    }
                }
            }
            v = next;
            bond = t.right;
        }
        Ok(v)
    }
}

/// On-disk layout: `tensors[j][l][p][r] = [re, im]`, with `bond_dims` listing
/// all `n + 1` bonds including the unit boundaries.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MpsFile {
    pub n: usize,
    pub bond_dims: Vec<usize>,
    pub tensors: Vec<Vec<Vec<Vec<[f64; 2]>>>>,
}

impl From<&MpsState> for MpsFile {
    fn from(mps: &MpsState) -> Self {
        let tensors = mps
            .tensors
            .iter()
            .map(|t| {
                (0..t.left)
                    .map(|l| {
                        (0..2)
                            .map(|p| {
                                (0..t.right)
                                    .map(|r| {
                                        let c = t.get(l, p, r);
                                        [c.re, c.im]
                                    })
                                    .collect()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Self {
            n: mps.n_qubits(),
            bond_dims: mps.bond_dims(),
            tensors,
        }
    }
}

impl TryFrom<MpsFile> for MpsState {
    type Error = GmeError;

    fn try_from(file: MpsFile) -> Result<Self> {
        if file.n == 0 {
            return Err(GmeError::format("n", "must be at least 1"));
        }
        if file.tensors.len() != file.n {
            return Err(GmeError::format(
                "tensors",
                format!("expected {} site tensors, found {}", file.n, file.tensors.len()),
            ));
        }
        if file.bond_dims.len() != file.n + 1 {
            return Err(GmeError::format(
                "bond_dims",
                format!("expected {} entries, found {}", file.n + 1, file.bond_dims.len()),
            ));
        }
        let mut tensors = Vec::with_capacity(file.n);
        for (j, raw) in file.tensors.iter().enumerate() {
            let (left, right) = (file.bond_dims[j], file.bond_dims[j + 1]);
            let field = format!("tensors[{j}]");
            let shape_err = || {
                GmeError::format(
                    field.clone(),
                    format!("expected shape ({left}, 2, {right}) from bond_dims"),
                )
            };
            if raw.len() != left {
                return Err(shape_err());
            }
            let mut t = SiteTensor::zeros(left, right);
            for (l, by_phys) in raw.iter().enumerate() {
                if by_phys.len() != 2 {
                    return Err(shape_err());
                }
                for (p, by_right) in by_phys.iter().enumerate() {
                    if by_right.len() != right {
                        return Err(shape_err());
                    }
                    for (r, &[re, im]) in by_right.iter().enumerate() {
                        if !re.is_finite() || !im.is_finite() {
                            return Err(GmeError::format(field.clone(), "non-finite entry"));
                        }
                        t.set(l, p, r, C64::new(re, im));
                    }
                }
            }
            tensors.push(t);
        }
        let mps = MpsState::new(tensors)?;
        let norm = mps.norm_sqr().sqrt();
        if (norm - 1.0).abs() > FILE_NORM_TOL {
            return Err(GmeError::format(
                "tensors",
                format!("state norm {norm} differs from 1 by more than {FILE_NORM_TOL:e}"),
            ));
        }
        normalize_mps(&mps)
    }
}

impl MpsState {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str::<MpsFile>(text)?.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&MpsFile::from(self)).expect("mps serializes")
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}
