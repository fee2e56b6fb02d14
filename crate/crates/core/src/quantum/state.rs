use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{check_dim, validation, Result};

/// Largest register the dense kernel accepts.
pub const MAX_QUBITS: usize = 20;

pub(crate) const NORM_TOL: f64 = 1e-10;

/// Pure state over `n` qubits in the computational basis.
///
/// Qubit 1 is the most significant bit of the basis index, so `|q1 q2 ... qn>`
/// has index `q1 * 2^(n-1) + ... + qn`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

pub(crate) fn dim_for(n_qubits: usize) -> Result<usize> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(validation(format!(
            "qubit count must be in 1..={MAX_QUBITS}, got {n_qubits}"
        )));
    }
    Ok(1usize << n_qubits)
}

/// Bit mask of qubit `q` (1-based) in a register of `n` qubits.
#[inline]
pub(crate) fn qubit_mask(n: usize, q: usize) -> usize {
    1usize << (n - q)
}

impl StateVector {
    /// Wraps amplitudes that are already normalized.
    pub fn new(n_qubits: usize, amplitudes: Vec<C64>) -> Result<Self> {
        check_dim(dim_for(n_qubits)?, amplitudes.len())?;
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(validation(format!(
                "amplitudes are not normalized (norm^2 = {norm_sq})"
            )));
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Normalizes arbitrary non-zero amplitudes.
    pub fn from_unnormalized(n_qubits: usize, mut amplitudes: Vec<C64>) -> Result<Self> {
        check_dim(dim_for(n_qubits)?, amplitudes.len())?;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(validation("cannot normalize a zero or non-finite vector"));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = dim_for(n_qubits)?;
        if index >= dim {
            return Err(validation(format!("basis index {index} out of range")));
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    pub(crate) fn from_raw(n_qubits: usize, amplitudes: Vec<C64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << n_qubits);
        Self {
            n_qubits,
            amplitudes,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        check_dim(self.dim(), other.dim())?;
        Ok(inner_product(&self.amplitudes, &other.amplitudes))
    }
}

/// `sum_i conj(a_i) b_i`, accumulated in four independent lanes.
pub(crate) fn inner_product(a: &[C64], b: &[C64]) -> C64 {
    let mut re = [0.0f64; 4];
    let mut im = [0.0f64; 4];
    let chunks = a.len() / 4;
    for c in 0..chunks {
        for lane in 0..4 {
            let x = a[4 * c + lane];
            let y = b[4 * c + lane];
            re[lane] += x.re * y.re + x.im * y.im;
            im[lane] += x.re * y.im - x.im * y.re;
        }
    }
    let mut out = C64::new(
        (re[0] + re[1]) + (re[2] + re[3]),
        (im[0] + im[1]) + (im[2] + im[3]),
    );
    for k in 4 * chunks..a.len() {
        out += a[k].conj() * b[k];
    }
    out
}

/// `|<phi|psi>|^2`.
pub fn fidelity(psi: &StateVector, phi: &StateVector) -> Result<f64> {
    Ok(phi.inner(psi)?.norm_sqr().min(1.0))
}

/// Draws a Haar-random pure state (normalized complex Gaussian vector).
pub fn haar_random_state<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Result<StateVector> {
    let dim = dim_for(n_qubits)?;
    let amps: Vec<C64> = (0..dim)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    StateVector::from_unnormalized(n_qubits, amps)
}
