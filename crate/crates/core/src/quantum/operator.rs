use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::state::{dim_for, qubit_mask, StateVector};
use crate::error::{check_dim, validation, Error, Result};

const HERMITIAN_TOL: f64 = 1e-12;

/// Hermitian operator on `n` qubits stored as a dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseHermitian {
    n_qubits: usize,
    dim: usize,
    entries: Vec<C64>,
}

impl DenseHermitian {
    pub fn new(n_qubits: usize, entries: Vec<C64>) -> Result<Self> {
        let dim = dim_for(n_qubits)?;
        check_dim(dim * dim, entries.len())?;
        let scale = entries.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
        for i in 0..dim {
            for j in i..dim {
                let a = entries[i * dim + j];
                let b = entries[j * dim + i].conj();
                if (a - b).norm() > HERMITIAN_TOL * scale {
                    return Err(validation(format!(
                        "operator is not Hermitian at ({i}, {j}): {a} vs {b}"
                    )));
                }
            }
        }
        Ok(Self {
            n_qubits,
            dim,
            entries,
        })
    }

    pub fn from_real_diagonal(n_qubits: usize, diagonal: &[f64]) -> Result<Self> {
        let dim = dim_for(n_qubits)?;
        check_dim(dim, diagonal.len())?;
        let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
        for (i, &d) in diagonal.iter().enumerate() {
            entries[i * dim + i] = C64::new(d, 0.0);
        }
        Ok(Self {
            n_qubits,
            dim,
            entries,
        })
    }

    pub fn identity(n_qubits: usize) -> Result<Self> {
        let dim = dim_for(n_qubits)?;
        Self::from_real_diagonal(n_qubits, &vec![1.0; dim])
    }

    pub(crate) fn from_raw(n_qubits: usize, entries: Vec<C64>) -> Self {
        let dim = 1usize << n_qubits;
        debug_assert_eq!(entries.len(), dim * dim);
        Self {
            n_qubits,
            dim,
            entries,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim + col]
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().all(|z| z.im == 0.0)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| i == j || self.entries[i * self.dim + j] == C64::new(0.0, 0.0))
        })
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim)
            .map(|i| self.entries[i * self.dim + i].re)
            .collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim)
            .map(|i| self.entries[i * self.dim + i].re)
            .sum()
    }

    /// `Tr[O^2] = Tr[O^dagger O]` for Hermitian `O`.
    pub fn trace_of_square(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Schatten-2 (Hilbert-Schmidt) norm `sqrt(Tr[O^dagger O])`.
    pub fn hilbert_schmidt_norm(&self) -> f64 {
        self.trace_of_square().sqrt()
    }

    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        check_dim(self.dim, v.len())?;
        Ok((0..self.dim)
            .map(|i| {
                let row = &self.entries[i * self.dim..(i + 1) * self.dim];
                row.iter().zip(v).map(|(a, b)| a * b).sum()
            })
            .collect())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            n_qubits: self.n_qubits,
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &DenseHermitian) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        Ok(Self {
            n_qubits: self.n_qubits,
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }
}

/// `<psi|O|psi>`.
pub fn expectation(psi: &StateVector, op: &DenseHermitian) -> Result<f64> {
    check_dim(op.dim(), psi.dim())?;
    let amps = psi.amplitudes();
    let dim = op.dim();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..dim {
        let row = &op.entries[i * dim..(i + 1) * dim];
        let o_psi: C64 = row.iter().zip(amps).map(|(a, b)| a * b).sum();
        acc += amps[i].conj() * o_psi;
    }
    let scale = 1.0 + op.hilbert_schmidt_norm();
    debug_assert!(
        acc.im.abs() <= 1e-10 * scale,
        "expectation has imaginary residual {}",
        acc.im
    );
    Ok(acc.re)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// Product of single-qubit Paulis, e.g. `Z1Z2` or `X1 Y3`. Qubits are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliString {
    factors: Vec<(Pauli, usize)>,
}

impl PauliString {
    pub fn new(mut factors: Vec<(Pauli, usize)>) -> Result<Self> {
        factors.retain(|(p, _)| *p != Pauli::I);
        factors.sort_by_key(|&(_, q)| q);
        for w in factors.windows(2) {
            if w[0].1 == w[1].1 {
                return Err(validation(format!("qubit {} appears twice", w[0].1)));
            }
        }
        if factors.iter().any(|&(_, q)| q == 0) {
            return Err(validation("qubit labels are 1-based"));
        }
        Ok(Self { factors })
    }

    pub fn factors(&self) -> &[(Pauli, usize)] {
        &self.factors
    }

    pub fn max_qubit(&self) -> usize {
        self.factors.iter().map(|&(_, q)| q).max().unwrap_or(0)
    }

    pub fn to_operator(&self, n_qubits: usize) -> Result<DenseHermitian> {
        let dim = dim_for(n_qubits)?;
        if self.max_qubit() > n_qubits {
            return Err(validation(format!(
                "Pauli string acts on qubit {} of a {n_qubits}-qubit register",
                self.max_qubit()
            )));
        }
        // P|s> = phase(s) |s ^ flip>
        let mut flip = 0usize;
        for &(p, q) in &self.factors {
            if matches!(p, Pauli::X | Pauli::Y) {
                flip |= qubit_mask(n_qubits, q);
            }
        }
        let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
        for s in 0..dim {
            let mut phase = C64::new(1.0, 0.0);
            for &(p, q) in &self.factors {
                let bit = s & qubit_mask(n_qubits, q) != 0;
                phase *= match (p, bit) {
                    (Pauli::Z, true) => C64::new(-1.0, 0.0),
                    (Pauli::Y, false) => C64::new(0.0, 1.0),
                    (Pauli::Y, true) => C64::new(0.0, -1.0),
                    _ => C64::new(1.0, 0.0),
                };
            }
            entries[(s ^ flip) * dim + s] = phase;
        }
        Ok(DenseHermitian::from_raw(n_qubits, entries))
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut factors = Vec::new();
        let mut chars = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '*')
            .peekable();
        while let Some(c) = chars.next() {
            let pauli = match c.to_ascii_uppercase() {
                'I' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                other => return Err(validation(format!("unknown Pauli '{other}' in {s:?}"))),
            };
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            if pauli == Pauli::I && digits.is_empty() {
                continue;
            }
            let q: usize = digits
                .parse()
                .map_err(|_| validation(format!("missing qubit index in {s:?}")))?;
            factors.push((pauli, q));
        }
        Self::new(factors)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "I");
        }
        for (p, q) in &self.factors {
            write!(f, "{p:?}{q}")?;
        }
        Ok(())
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        raw.parse().map_err(serde::de::Error::custom)
    }
}
