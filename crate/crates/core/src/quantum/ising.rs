use num_complex::Complex64 as C64;

use super::operator::DenseHermitian;
use super::state::{dim_for, qubit_mask};
use crate::error::{check_dim, validation, Result};

/// Matrix-free `diag(d) + sum_q a_q X_q`, the shape of every quench
/// Hamiltonian in this crate.
#[derive(Clone, Debug, PartialEq)]
pub struct IsingOperator {
    n_qubits: usize,
    diagonal: Vec<f64>,
    x_fields: Vec<f64>,
}

impl IsingOperator {
    pub fn new(n_qubits: usize, diagonal: Vec<f64>, x_fields: Vec<f64>) -> Result<Self> {
        check_dim(dim_for(n_qubits)?, diagonal.len())?;
        if x_fields.len() != n_qubits {
            return Err(validation(format!(
                "need {n_qubits} transverse coefficients, got {}",
                x_fields.len()
            )));
        }
        if diagonal.iter().chain(&x_fields).any(|v| !v.is_finite()) {
            return Err(validation("operator coefficients must be finite"));
        }
        Ok(Self {
            n_qubits,
            diagonal,
            x_fields,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    /// Coefficient of `X_q` at index `q - 1`.
    pub fn x_fields(&self) -> &[f64] {
        &self.x_fields
    }

    pub fn is_diagonal(&self) -> bool {
        self.x_fields.iter().all(|&a| a == 0.0)
    }

    /// Weyl bounds `[min d - sum|a|, max d + sum|a|]` on the spectrum.
    pub fn spectral_bounds(&self) -> (f64, f64) {
        let off: f64 = self.x_fields.iter().map(|a| a.abs()).sum();
        let (lo, hi) = self
            .diagonal
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &d| {
                (lo.min(d), hi.max(d))
            });
        (lo - off, hi + off)
    }

    /// `out = scale * (H - shift) v`.
    pub(crate) fn apply_shifted(&self, v: &[C64], out: &mut [C64], shift: f64, scale: f64) {
        for ((o, &x), &d) in out.iter_mut().zip(v).zip(&self.diagonal) {
            *o = x * ((d - shift) * scale);
        }
        for (q, &a) in self.x_fields.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            let m = qubit_mask(self.n_qubits, q + 1);
            let coef = a * scale;
            // Pairs (s, s|m) with bit m clear in s.
            let mut base = 0;
            while base < v.len() {
                for s in base..base + m {
                    let t = s | m;
                    out[s] += v[t] * coef;
                    out[t] += v[s] * coef;
                }
                base += 2 * m;
            }
        }
    }

    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        check_dim(self.dim(), v.len())?;
        let mut out = vec![C64::new(0.0, 0.0); v.len()];
        self.apply_shifted(v, &mut out, 0.0, 1.0);
        Ok(out)
    }

    pub fn to_dense(&self) -> DenseHermitian {
        let dim = self.dim();
        let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
        for s in 0..dim {
            entries[s * dim + s] = C64::new(self.diagonal[s], 0.0);
            for (q, &a) in self.x_fields.iter().enumerate() {
                let t = s ^ qubit_mask(self.n_qubits, q + 1);
                entries[t * dim + s] += C64::new(a, 0.0);
            }
        }
        DenseHermitian::from_raw(self.n_qubits, entries)
    }
}
