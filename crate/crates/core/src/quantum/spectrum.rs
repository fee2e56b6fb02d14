use faer::{Mat, Side};
use num_complex::Complex64 as C64;

use super::operator::DenseHermitian;
use super::state::StateVector;
use crate::error::{check_dim, validation, Error, Result};

/// Eigen-decomposition `H = V diag(lambda) V^dagger` with ascending eigenvalues.
#[derive(Clone, Debug)]
pub struct Spectrum {
    n_qubits: usize,
    eigenvalues: Vec<f64>,
    /// Row-major `dim x dim`; column `k` is the eigenvector of `eigenvalues[k]`.
    eigenvectors: Vec<C64>,
}

impl Spectrum {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        let dim = self.dim();
        (0..dim).map(|i| self.eigenvectors[i * dim + k]).collect()
    }

    pub fn eigenvector_entry(&self, row: usize, k: usize) -> C64 {
        self.eigenvectors[row * self.dim() + k]
    }

    /// `V diag(lambda) V^dagger`.
    pub fn reconstruct(&self) -> DenseHermitian {
        let dim = self.dim();
        let v = &self.eigenvectors;
        let mut out = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..dim {
                    acc += v[i * dim + k] * self.eigenvalues[k] * v[j * dim + k].conj();
                }
                out[i * dim + j] = acc;
            }
        }
        DenseHermitian::from_raw(self.n_qubits, out)
    }

    /// `e^{-i H t} psi` through the eigenbasis.
    pub fn evolve(&self, t: f64, psi: &StateVector) -> Result<StateVector> {
        evolve(self, t, psi)
    }
}

fn real_matrix(h: &DenseHermitian) -> Mat<f64> {
    let dim = h.dim();
    Mat::from_fn(dim, dim, |i, j| h.get(i, j).re)
}

fn complex_matrix(h: &DenseHermitian) -> Mat<C64> {
    let dim = h.dim();
    Mat::from_fn(dim, dim, |i, j| h.get(i, j))
}

pub fn diagonalize(h: &DenseHermitian) -> Result<Spectrum> {
    let dim = h.dim();
    let (eigenvalues, eigenvectors) = if h.is_real() {
        let evd = real_matrix(h)
            .self_adjoint_eigen(Side::Lower)
            .map_err(|_| Error::NoConvergence)?;
        let s = evd.S().column_vector();
        let u = evd.U();
        let values: Vec<f64> = (0..dim).map(|k| s[k]).collect();
        let mut vectors = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for k in 0..dim {
                vectors.push(C64::new(u[(i, k)], 0.0));
            }
        }
        (values, vectors)
    } else {
        let evd = complex_matrix(h)
            .self_adjoint_eigen(Side::Lower)
            .map_err(|_| Error::NoConvergence)?;
        let s = evd.S().column_vector();
        let u = evd.U();
        let values: Vec<f64> = (0..dim).map(|k| s[k].re).collect();
        let mut vectors = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for k in 0..dim {
                vectors.push(u[(i, k)]);
            }
        }
        (values, vectors)
    };
    Ok(Spectrum {
        n_qubits: h.n_qubits(),
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only (ascending); cheaper than a full [`diagonalize`].
pub fn eigenvalues(h: &DenseHermitian) -> Result<Vec<f64>> {
    if h.is_real() {
        real_matrix(h)
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|_| Error::NoConvergence)
    } else {
        complex_matrix(h)
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|_| Error::NoConvergence)
    }
}

/// Eigenvalues of a small Hermitian matrix given as raw row-major entries.
pub(crate) fn hermitian_eigenvalues(dim: usize, entries: &[C64]) -> Result<Vec<f64>> {
    let m = Mat::from_fn(dim, dim, |i, j| entries[i * dim + j]);
    m.self_adjoint_eigenvalues(Side::Lower)
        .map_err(|_| Error::NoConvergence)
}

/// `V e^{-i Lambda t} V^dagger psi`.
pub fn evolve(spec: &Spectrum, t: f64, psi: &StateVector) -> Result<StateVector> {
    let dim = spec.dim();
    check_dim(dim, psi.dim())?;
    if !t.is_finite() {
        return Err(validation(format!(
            "evolution time must be finite, got {t}"
        )));
    }
    let v = &spec.eigenvectors;
    let amps = psi.amplitudes();
    let mut coeffs = vec![C64::new(0.0, 0.0); dim];
    for i in 0..dim {
        let a = amps[i];
        if a == C64::new(0.0, 0.0) {
            continue;
        }
        let row = &v[i * dim..(i + 1) * dim];
        for (c, vik) in coeffs.iter_mut().zip(row) {
            *c += vik.conj() * a;
        }
    }
    for (c, &lambda) in coeffs.iter_mut().zip(&spec.eigenvalues) {
        *c *= C64::from_polar(1.0, -lambda * t);
    }
    let out: Vec<C64> = (0..dim)
        .map(|i| {
            let row = &v[i * dim..(i + 1) * dim];
            row.iter().zip(&coeffs).map(|(a, b)| a * b).sum()
        })
        .collect();
    Ok(StateVector::from_raw(psi.n_qubits(), out))
}
