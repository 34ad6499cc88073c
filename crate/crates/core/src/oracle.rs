//! Brute-force reference implementation over the full `D^N` coefficient
//! tensor. Used only to cross-check the compressed representation on small
//! instances.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::basis::OrbitalBasisIndex;
use crate::error::{Error, Result};
use crate::rdm::ReducedDensityMatrix;
use crate::state::{FermionState, LocalUnitary};

/// Default cap on the number of tensor entries, `D^N`.
pub const DEFAULT_ORACLE_CAP: u128 = 1_000_000;

/// Environment variable overriding [`DEFAULT_ORACLE_CAP`].
pub const ORACLE_CAP_ENV: &str = "FERMISEP_ORACLE_CAP";

/// The cap from `FERMISEP_ORACLE_CAP`, or the default when unset.
pub fn oracle_cap_from_env() -> Result<u128> {
    match std::env::var(ORACLE_CAP_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Error::InvalidParameter(format!("{ORACLE_CAP_ENV}={v:?} is not an integer"))
        }),
        Err(_) => Ok(DEFAULT_ORACLE_CAP),
    }
}

/// `D^N`, or `None` if it overflows.
pub fn tensor_len(d: usize, n: usize) -> Option<u128> {
    (d as u128).checked_pow(n as u32)
}

/// Full antisymmetric coefficient tensor `w_{i_1 … i_N}`, row-major with
/// `i_1` slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseWavefunction {
    d: usize,
    n: usize,
    tensor: Vec<Complex64>,
}

impl DenseWavefunction {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tensor(&self) -> &[Complex64] {
        &self.tensor
    }

    pub fn get(&self, indices: &[usize]) -> Complex64 {
        self.tensor[self.flat(indices)]
    }

    fn flat(&self, indices: &[usize]) -> usize {
        indices.iter().fold(0, |acc, &i| acc * self.d + i)
    }

    fn unflat(&self, mut flat: usize, out: &mut [usize]) {
        for slot in out.iter_mut().rev() {
            *slot = flat % self.d;
            flat /= self.d;
        }
    }

    /// `Σ |w|²` over all index tuples; `1/N!` for a normalized state.
    pub fn norm_sqr(&self) -> f64 {
        self.tensor.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Largest `|w(…, i, j, …) + w(…, j, i, …)|` over all tuples and
    /// adjacent positions.
    pub fn antisymmetry_defect(&self) -> f64 {
        let mut idx = vec![0; self.n];
        let mut worst: f64 = 0.0;
        for flat in 0..self.tensor.len() {
            self.unflat(flat, &mut idx);
            for p in 0..self.n.saturating_sub(1) {
                idx.swap(p, p + 1);
                let swapped = self.tensor[self.flat(&idx)];
                idx.swap(p, p + 1);
                worst = worst.max((self.tensor[flat] + swapped).norm());
            }
        }
        worst
    }

    /// Applies `U` to every tensor leg:
    /// `w'(i…) = Σ_k U_{i_1 k_1} … U_{i_N k_N} w(k…)`.
    pub fn apply_local_unitary(&self, u: &LocalUnitary) -> Result<Self> {
        if u.dim() != self.d {
            return Err(Error::Dimension(format!(
                "unitary is {0}x{0}, tensor has D = {1}",
                u.dim(),
                self.d
            )));
        }
        let m = u.matrix();
        let d = self.d;
        let mut current = self.tensor.clone();
        let mut idx = vec![0; self.n];
        for leg in 0..self.n {
            let stride = d.pow((self.n - 1 - leg) as u32);
            let mut next = vec![Complex64::new(0.0, 0.0); current.len()];
            for (flat, slot) in next.iter_mut().enumerate() {
                self.unflat(flat, &mut idx);
                let i = idx[leg];
                let base = flat - i * stride;
                *slot = (0..d).map(|k| m[(i, k)] * current[base + k * stride]).sum();
            }
            current = next;
        }
        Ok(Self {
            d: self.d,
            n: self.n,
            tensor: current,
        })
    }
}

/// Expands a state into the full tensor: the entry at a permutation `π` of
/// sorted tuple `t` is `sign(π) · c_t / N!`; repeated indices give zero.
pub fn densify(state: &FermionState, cap: u128) -> Result<DenseWavefunction> {
    let (d, n) = (state.d(), state.n());
    let len = tensor_len(d, n).unwrap_or(u128::MAX);
    if len > cap {
        return Err(Error::ResourceLimit { required: len, cap });
    }
    let mut dense = DenseWavefunction {
        d,
        n,
        tensor: vec![Complex64::new(0.0, 0.0); len as usize],
    };
    let factorial: f64 = (1..=n).map(|k| k as f64).product();
    let perms = permutations_with_sign(n);
    let mut idx = vec![0; n];
    for (tuple, c) in state.entries() {
        let w = c / factorial;
        for (perm, sign) in &perms {
            for (slot, &p) in idx.iter_mut().zip(perm) {
                *slot = tuple[p];
            }
            let flat = dense.flat(&idx);
            dense.tensor[flat] = w * *sign;
        }
    }
    Ok(dense)
}

/// Reads the sorted-tuple entries back, `c_t = N! · w_t`.
pub fn sparsify(dense: &DenseWavefunction) -> Result<FermionState> {
    let basis = OrbitalBasisIndex::new(dense.d, dense.n)?;
    let factorial: f64 = (1..=dense.n).map(|k| k as f64).product();
    let amplitudes = basis.tuples().map(|t| dense.get(&t) * factorial).collect();
    FermionState::from_amplitudes(basis, amplitudes)
}

/// Partial trace over all but the first tensor leg,
/// `ρ(i, j) ∝ Σ_rest w(i, rest) conj(w(j, rest))`, normalized to unit trace.
pub fn oracle_rdm(dense: &DenseWavefunction) -> Result<ReducedDensityMatrix> {
    let d = dense.d;
    let rest = dense.tensor.len() / d;
    let w = DMatrix::from_fn(d, rest, |i, r| dense.tensor[i * rest + r]);
    let rho = &w * w.adjoint();
    let trace: f64 = rho.diagonal().iter().map(|c| c.re).sum();
    if trace == 0.0 {
        return Err(Error::ZeroState);
    }
    ReducedDensityMatrix::new(rho.unscale(trace))
}

/// All permutations of `0..n` with their signs, via Heap's algorithm.
fn permutations_with_sign(n: usize) -> Vec<(Vec<usize>, f64)> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    let mut out = vec![(perm.clone(), sign)];
    let mut counters = vec![0; n];
    let mut i = 1;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            sign = -sign;
            out.push((perm.clone(), sign));
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    out
}
