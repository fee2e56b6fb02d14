use num_complex::Complex64 as C64;

use super::spectrum::hermitian_eigenvalues;
use super::state::{qubit_mask, StateVector};
use crate::error::{validation, Result};

/// Unit-trace positive semidefinite matrix, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<C64>,
}

impl DensityMatrix {
    pub fn new(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(validation(format!(
                "density matrix needs {dim}x{dim} entries, got {}",
                entries.len()
            )));
        }
        for i in 0..dim {
            for j in i..dim {
                if (entries[i * dim + j] - entries[j * dim + i].conj()).norm() > 1e-12 {
                    return Err(validation("density matrix is not Hermitian"));
                }
            }
        }
        let trace: f64 = (0..dim).map(|i| entries[i * dim + i].re).sum();
        if (trace - 1.0).abs() > 1e-10 {
            return Err(validation(format!("density matrix trace is {trace}")));
        }
        let rho = Self { dim, entries };
        if rho.eigenvalues()?.first().is_some_and(|&l| l < -1e-10) {
            return Err(validation("density matrix has a negative eigenvalue"));
        }
        Ok(rho)
    }

    pub fn from_diagonal(probs: &[f64]) -> Result<Self> {
        let dim = probs.len();
        let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
        for (i, &p) in probs.iter().enumerate() {
            entries[i * dim + i] = C64::new(p, 0.0);
        }
        Self::new(dim, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(self.dim, &self.entries)
    }
}

/// Partial trace onto `subsystem` (1-based qubit labels).
///
/// The reduced basis keeps the relative order of the kept qubits, lowest label
/// most significant.
pub fn reduced_density(psi: &StateVector, subsystem: &[usize]) -> Result<DensityMatrix> {
    let n = psi.n_qubits();
    let mut kept = subsystem.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != subsystem.len() {
        return Err(validation("subsystem lists a qubit twice"));
    }
    if kept.is_empty() || kept.len() >= n {
        return Err(validation(format!(
            "subsystem must be a non-empty proper subset of 1..={n}"
        )));
    }
    if kept.iter().any(|&q| q == 0 || q > n) {
        return Err(validation(format!("subsystem qubits must lie in 1..={n}")));
    }
    let traced: Vec<usize> = (1..=n).filter(|q| !kept.contains(q)).collect();
    let scatter = |bits: usize, qubits: &[usize]| -> usize {
        let k = qubits.len();
        qubits
            .iter()
            .enumerate()
            .filter(|(pos, _)| bits >> (k - 1 - pos) & 1 == 1)
            .map(|(_, &q)| qubit_mask(n, q))
            .sum()
    };
    let a_offsets: Vec<usize> = (0..1 << kept.len()).map(|a| scatter(a, &kept)).collect();
    let b_offsets: Vec<usize> = (0..1 << traced.len())
        .map(|b| scatter(b, &traced))
        .collect();
    let amps = psi.amplitudes();
    let da = a_offsets.len();
    // Psi[a][b], then rho = Psi Psi^dagger.
    let block: Vec<C64> = a_offsets
        .iter()
        .flat_map(|&oa| b_offsets.iter().map(move |&ob| amps[oa | ob]))
        .collect();
    Ok(gram_rows(&block, da, b_offsets.len()))
}

/// Reduced state of the first `cut` qubits; cheaper than [`reduced_density`]
/// because the leading qubits are already contiguous in memory.
pub fn leading_block_density(psi: &StateVector, cut: usize) -> Result<DensityMatrix> {
    let n = psi.n_qubits();
    if cut == 0 || cut >= n {
        return Err(validation(format!("cut must lie in 1..{n}, got {cut}")));
    }
    let da = 1usize << cut;
    Ok(gram_rows(psi.amplitudes(), da, psi.dim() / da))
}

fn gram_rows(block: &[C64], rows: usize, cols: usize) -> DensityMatrix {
    let mut entries = vec![C64::new(0.0, 0.0); rows * rows];
    for i in 0..rows {
        let ri = &block[i * cols..(i + 1) * cols];
        for j in i..rows {
            let rj = &block[j * cols..(j + 1) * cols];
            let v: C64 = ri.iter().zip(rj).map(|(x, y)| x * y.conj()).sum();
            entries[i * rows + j] = v;
            entries[j * rows + i] = v.conj();
        }
        entries[i * rows + i].im = 0.0;
    }
    DensityMatrix { dim: rows, entries }
}

/// `-sum lambda ln lambda` in nats; eigenvalues below zero count as zero.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let s: f64 = rho
        .eigenvalues()?
        .into_iter()
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.ln())
        .sum();
    Ok(s.clamp(0.0, (rho.dim as f64).ln()))
}

/// Entropy of the first `cut` qubits of a pure state.
pub fn bipartite_entropy(psi: &StateVector, cut: usize) -> Result<f64> {
    von_neumann_entropy(&leading_block_density(psi, cut)?)
}
