//! Disordered Ising quench Hamiltonians and the quench-sequence ansatz.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{validation, Error, Result};
use crate::quantum::{
    diagonalize, dim_for, propagate, qubit_mask, ChebyshevWorkspace, DenseHermitian, IsingOperator,
    StateVector,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    /// `J sum Z_i Z_{i+1} + B sum X_i + sum h_i Z_i`, periodic.
    #[serde(rename = "nn")]
    NearestNeighbor,
    /// `J sum_{i>j} Z_i Z_j / |i-j|^alpha + B sum X_i + sum h_i X_i`, open.
    #[serde(rename = "long-range")]
    LongRange,
}

impl ModelKind {
    pub fn label(self) -> &'static str {
        match self {
            ModelKind::NearestNeighbor => "nn",
            ModelKind::LongRange => "long-range",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nn" => Ok(ModelKind::NearestNeighbor),
            "long-range" => Ok(ModelKind::LongRange),
            other => Err(validation(format!("unknown model {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Thermalized,
    Mbl,
}

impl Phase {
    pub fn label(self) -> &'static str {
        match self {
            Phase::Thermalized => "thermalized",
            Phase::Mbl => "mbl",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Phase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "thermalized" => Ok(Phase::Thermalized),
            "mbl" => Ok(Phase::Mbl),
            other => Err(validation(format!("unknown phase {other:?}"))),
        }
    }
}

/// Uniform disorder on `[-W/2, W/2]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisorderSpec {
    w: f64,
}

impl DisorderSpec {
    pub fn new(w: f64) -> Result<Self> {
        if !(w.is_finite() && w >= 0.0) {
            return Err(validation(format!(
                "disorder strength must be >= 0, got {w}"
            )));
        }
        Ok(Self { w })
    }

    pub fn w(&self) -> f64 {
        self.w
    }
}

pub fn sample_disorder<R: Rng + ?Sized>(spec: &DisorderSpec, n: usize, rng: &mut R) -> Vec<f64> {
    (0..n)
        .map(|_| spec.w * (rng.random::<f64>() - 0.5))
        .collect()
}

/// Couplings shared by every quench of a schedule.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub kind: ModelKind,
    pub j: f64,
    pub b: f64,
    pub alpha: f64,
}

impl ModelConfig {
    pub fn nearest_neighbor() -> Self {
        Self {
            kind: ModelKind::NearestNeighbor,
            j: 1.0,
            b: -2.0,
            alpha: 1.0,
        }
    }

    pub fn long_range() -> Self {
        Self {
            kind: ModelKind::LongRange,
            j: 1.0,
            b: 0.0,
            alpha: 1.0,
        }
    }

    pub fn default_for(kind: ModelKind) -> Self {
        match kind {
            ModelKind::NearestNeighbor => Self::nearest_neighbor(),
            ModelKind::LongRange => Self::long_range(),
        }
    }

    /// Default disorder strength of `phase`, in units of `J`.
    pub fn phase_disorder(&self, phase: Phase) -> DisorderSpec {
        let w = match (self.kind, phase) {
            (ModelKind::NearestNeighbor, Phase::Thermalized) => 5.0,
            (ModelKind::NearestNeighbor, Phase::Mbl) => 50.0,
            (ModelKind::LongRange, Phase::Thermalized) => 0.6,
            (ModelKind::LongRange, Phase::Mbl) => 15.0,
        };
        DisorderSpec {
            w: w * self.j.abs(),
        }
    }

    /// Default quench time `1/J`.
    pub fn default_time(&self) -> f64 {
        1.0 / self.j.abs()
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if !(self.j.is_finite() && self.b.is_finite()) {
            return Err(validation("J and B must be finite"));
        }
        if n < 2 {
            return Err(validation(format!("Ising chains need n >= 2, got {n}")));
        }
        if self.kind == ModelKind::LongRange && !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(validation(format!("alpha must be > 0, got {}", self.alpha)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NNIsingParams {
    pub n: usize,
    pub j: f64,
    pub b: f64,
    pub h: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LongRangeIsingParams {
    pub n: usize,
    pub j: f64,
    pub b: f64,
    pub alpha: f64,
    pub h: Vec<f64>,
}

fn check_fields(n: usize, h: &[f64]) -> Result<()> {
    if h.len() != n {
        return Err(validation(format!(
            "need {n} on-site fields, got {}",
            h.len()
        )));
    }
    if h.iter().any(|v| !v.is_finite()) {
        return Err(validation("on-site fields must be finite"));
    }
    Ok(())
}

impl NNIsingParams {
    pub fn operator(&self) -> Result<IsingOperator> {
        let model = ModelConfig {
            j: self.j,
            b: self.b,
            ..ModelConfig::nearest_neighbor()
        };
        QuenchKernel::new(model, self.n)?.operator(&self.h, self.b)
    }
}

impl LongRangeIsingParams {
    pub fn operator(&self) -> Result<IsingOperator> {
        let model = ModelConfig {
            kind: ModelKind::LongRange,
            j: self.j,
            b: self.b,
            alpha: self.alpha,
        };
        QuenchKernel::new(model, self.n)?.operator(&self.h, self.b)
    }
}

pub fn build_nn_ising(params: &NNIsingParams) -> Result<DenseHermitian> {
    Ok(params.operator()?.to_dense())
}

pub fn build_long_range_ising(params: &LongRangeIsingParams) -> Result<DenseHermitian> {
    Ok(params.operator()?.to_dense())
}

/// One model at fixed `n` with its `ZZ` coupling diagonal precomputed.
#[derive(Clone, Debug)]
pub struct QuenchKernel {
    model: ModelConfig,
    n: usize,
    coupling: Vec<f64>,
}

impl QuenchKernel {
    pub fn new(model: ModelConfig, n: usize) -> Result<Self> {
        model.validate(n)?;
        let dim = dim_for(n)?;
        let z = |s: usize, q: usize| -> f64 {
            if s & qubit_mask(n, q) == 0 {
                1.0
            } else {
                -1.0
            }
        };
        let mut pairs: Vec<(usize, usize, f64)> = Vec::new();
        match model.kind {
            ModelKind::NearestNeighbor => {
                for i in 1..=n {
                    pairs.push((i, i % n + 1, model.j));
                }
            }
            ModelKind::LongRange => {
                for i in 1..=n {
                    for j in 1..i {
                        pairs.push((i, j, model.j / ((i - j) as f64).powf(model.alpha)));
                    }
                }
            }
        }
        let coupling = (0..dim)
            .map(|s| pairs.iter().map(|&(a, b, w)| w * z(s, a) * z(s, b)).sum())
            .collect();
        Ok(Self { model, n, coupling })
    }

    pub fn model(&self) -> &ModelConfig {
        &self.model
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    /// Quench Hamiltonian with on-site fields `h` and transverse field `b`.
    pub fn operator(&self, h: &[f64], b: f64) -> Result<IsingOperator> {
        check_fields(self.n, h)?;
        if !b.is_finite() {
            return Err(validation("transverse field must be finite"));
        }
        let n = self.n;
        match self.model.kind {
            ModelKind::NearestNeighbor => {
                let mut diagonal = self.coupling.clone();
                for (q, &hq) in h.iter().enumerate() {
                    let m = qubit_mask(n, q + 1);
                    for (s, d) in diagonal.iter_mut().enumerate() {
                        *d += if s & m == 0 { hq } else { -hq };
                    }
                }
                IsingOperator::new(n, diagonal, vec![b; n])
            }
            ModelKind::LongRange => IsingOperator::new(
                n,
                self.coupling.clone(),
                h.iter().map(|hq| b + hq).collect(),
            ),
        }
    }

    pub fn apply_quench(
        &self,
        quench: &Quench,
        amps: &mut [C64],
        ws: &mut ChebyshevWorkspace,
    ) -> Result<()> {
        let op = self.operator(&quench.fields, quench.transverse)?;
        propagate(&op, quench.time, amps, ws)
    }
}

/// One factor `exp(-i H(h, B) t)` of the ansatz.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quench {
    pub fields: Vec<f64>,
    pub transverse: f64,
    pub time: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuenchSchedule {
    n: usize,
    model: ModelConfig,
    quenches: Vec<Quench>,
}

impl QuenchSchedule {
    pub fn new(n: usize, model: ModelConfig, quenches: Vec<Quench>) -> Result<Self> {
        model.validate(n)?;
        for q in &quenches {
            check_fields(n, &q.fields)?;
            if !(q.time.is_finite() && q.time > 0.0) {
                return Err(validation(format!(
                    "quench times must be > 0, got {}",
                    q.time
                )));
            }
            if !q.transverse.is_finite() {
                return Err(validation("transverse field must be finite"));
            }
        }
        Ok(Self { n, model, quenches })
    }

    /// `depth` quenches with fresh disorder each, default `B` and `t = 1/J`.
    pub fn random<R: Rng + ?Sized>(
        n: usize,
        model: ModelConfig,
        disorder: &DisorderSpec,
        depth: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let quenches = (0..depth)
            .map(|_| Quench {
                fields: sample_disorder(disorder, n, rng),
                transverse: model.b,
                time: model.default_time(),
            })
            .collect();
        Self::new(n, model, quenches)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn model(&self) -> &ModelConfig {
        &self.model
    }

    pub fn quenches(&self) -> &[Quench] {
        &self.quenches
    }

    pub fn depth(&self) -> usize {
        self.quenches.len()
    }
}

/// `prod_m exp(-i H_m t_m) |psi0>`, first quench applied first.
pub fn apply_ansatz(schedule: &QuenchSchedule, psi0: &StateVector) -> Result<StateVector> {
    if psi0.n_qubits() != schedule.n {
        return Err(Error::DimensionMismatch {
            expected: 1 << schedule.n,
            found: psi0.dim(),
        });
    }
    let kernel = QuenchKernel::new(schedule.model, schedule.n)?;
    let mut ws = ChebyshevWorkspace::default();
    let mut amps = psi0.amplitudes().to_vec();
    for q in &schedule.quenches {
        kernel.apply_quench(q, &mut amps, &mut ws)?;
    }
    StateVector::new(schedule.n, amps)
}

/// Same as [`apply_ansatz`] through a dense eigendecomposition per quench.
pub fn apply_ansatz_spectral(schedule: &QuenchSchedule, psi0: &StateVector) -> Result<StateVector> {
    if psi0.n_qubits() != schedule.n {
        return Err(Error::DimensionMismatch {
            expected: 1 << schedule.n,
            found: psi0.dim(),
        });
    }
    let kernel = QuenchKernel::new(schedule.model, schedule.n)?;
    let mut psi = psi0.clone();
    for q in &schedule.quenches {
        let h = kernel.operator(&q.fields, q.transverse)?.to_dense();
        psi = diagonalize(&h)?.evolve(q.time, &psi)?;
    }
    Ok(psi)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InitialState {
    #[default]
    #[serde(rename = "all-zero")]
    AllZero,
    /// `|+ - + - ...>`.
    #[serde(rename = "neel-x")]
    NeelX,
}

impl FromStr for InitialState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all-zero" => Ok(InitialState::AllZero),
            "neel-x" => Ok(InitialState::NeelX),
            other => Err(validation(format!("unknown initial state {other:?}"))),
        }
    }
}

pub fn initial_state(kind: InitialState, n: usize) -> Result<StateVector> {
    match kind {
        InitialState::AllZero => StateVector::basis(n, 0),
        InitialState::NeelX => {
            let dim = dim_for(n)?;
            let amp = (dim as f64).sqrt().recip();
            let amps = (0..dim)
                .map(|s| {
                    // Even-numbered qubits carry |->.
                    let minus = (2..=n)
                        .step_by(2)
                        .filter(|&q| s & qubit_mask(n, q) != 0)
                        .count();
                    C64::new(if minus % 2 == 0 { amp } else { -amp }, 0.0)
                })
                .collect();
            StateVector::from_unnormalized(n, amps)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{eigenvalues, expectation, fidelity, PauliString};
    use rand::SeedableRng;

    fn nn(n: usize, j: f64, b: f64, h: Vec<f64>) -> DenseHermitian {
        build_nn_ising(&NNIsingParams { n, j, b, h }).unwrap()
    }

    fn lr(n: usize, j: f64, b: f64, h: Vec<f64>) -> DenseHermitian {
        build_long_range_ising(&LongRangeIsingParams {
            n,
            j,
            b,
            alpha: 1.0,
            h,
        })
        .unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < tol)
    }

    #[test]
    fn nn_examples() {
        let h = nn(2, 1.0, 0.0, vec![0.0, 0.0]);
        assert!(h.is_diagonal());
        assert_eq!(h.diagonal(), vec![2.0, -2.0, -2.0, 2.0]);
        assert!(close(
            &eigenvalues(&h).unwrap(),
            &[-2.0, -2.0, 2.0, 2.0],
            1e-12
        ));

        let h = nn(3, 0.0, 0.0, vec![1.0, 2.0, 3.0]);
        assert_eq!(h.get(0, 0).re, 6.0);
        // |001>: qubit 3 flipped.
        assert_eq!(h.get(1, 1).re, 1.0 + 2.0 - 3.0);

        let h = nn(2, 0.0, 1.0, vec![0.0, 0.0]);
        assert!(close(
            &eigenvalues(&h).unwrap(),
            &[-2.0, 0.0, 0.0, 2.0],
            1e-12
        ));
        assert!(build_nn_ising(&NNIsingParams {
            n: 1,
            j: 1.0,
            b: 0.0,
            h: vec![0.0]
        })
        .is_err());
    }

    #[test]
    fn long_range_examples() {
        assert_eq!(
            lr(2, 1.0, 0.0, vec![0.0; 2]).diagonal(),
            vec![1.0, -1.0, -1.0, 1.0]
        );
        assert_eq!(lr(3, 1.0, 0.0, vec![0.0; 3]).get(0, 0).re, 2.5);
        let c = 0.8;
        let h = lr(2, 0.0, 0.0, vec![c, 0.0]);
        assert!(close(&eigenvalues(&h).unwrap(), &[-c, -c, c, c], 1e-12));
        let x1 = "X1".parse::<PauliString>().unwrap().to_operator(2).unwrap();
        for (a, b) in h.entries().iter().zip(x1.entries()) {
            assert_eq!(*a, b * c);
        }
    }

    #[test]
    fn disorder_sampling() {
        let mut rng = crate::seed::TaskRng::seed_from_u64(1);
        let zero = DisorderSpec::new(0.0).unwrap();
        assert!(sample_disorder(&zero, 5, &mut rng)
            .iter()
            .all(|&h| h == 0.0));
        let mbl = DisorderSpec::new(50.0).unwrap();
        let h = sample_disorder(&mbl, 9, &mut rng);
        assert!(h.iter().all(|v| v.abs() <= 25.0));
        let a = sample_disorder(&mbl, 9, &mut crate::seed::TaskRng::seed_from_u64(9));
        let b = sample_disorder(&mbl, 9, &mut crate::seed::TaskRng::seed_from_u64(9));
        assert_eq!(a, b);
        assert!(DisorderSpec::new(-1.0).is_err());
    }

    #[test]
    fn disorder_moments() {
        let spec = DisorderSpec::new(4.0).unwrap();
        let mut rng = crate::seed::TaskRng::seed_from_u64(77);
        let draws = sample_disorder(&spec, 100_000, &mut rng);
        let n = draws.len() as f64;
        let mean = draws.iter().sum::<f64>() / n;
        let var = draws.iter().map(|h| (h - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let expected_var = 16.0 / 12.0;
        assert!(mean.abs() < 3.0 * (expected_var / n).sqrt());
        assert!((var / expected_var - 1.0).abs() < 0.05);
    }

    #[test]
    fn initial_states() {
        let s = initial_state(InitialState::AllZero, 3).unwrap();
        assert_eq!(s.amplitudes()[0], C64::new(1.0, 0.0));
        let r = 0.5f64.sqrt();
        let s = initial_state(InitialState::NeelX, 1).unwrap();
        assert!(close(&s.probabilities(), &[0.5, 0.5], 1e-15));
        assert!((s.amplitudes()[1].re - r).abs() < 1e-15);
        let s = initial_state(InitialState::NeelX, 2).unwrap();
        let re: Vec<f64> = s.amplitudes().iter().map(|a| a.re).collect();
        assert!(close(&re, &[0.5, -0.5, 0.5, -0.5], 1e-15));
    }

    #[test]
    fn ansatz_composition() {
        let model = ModelConfig::nearest_neighbor();
        let psi0 = initial_state(InitialState::AllZero, 4).unwrap();
        let empty = QuenchSchedule::new(4, model, vec![]).unwrap();
        assert_eq!(apply_ansatz(&empty, &psi0).unwrap(), psi0);

        let q = Quench {
            fields: vec![0.3, -1.2, 2.0, 0.1],
            transverse: -2.0,
            time: 0.7,
        };
        let twice = QuenchSchedule::new(4, model, vec![q.clone(), q.clone()]).unwrap();
        let once = QuenchSchedule::new(4, model, vec![Quench { time: 1.4, ..q }]).unwrap();
        let f = fidelity(
            &apply_ansatz(&twice, &psi0).unwrap(),
            &apply_ansatz(&once, &psi0).unwrap(),
        )
        .unwrap();
        assert!(1.0 - f < 1e-9);
    }

    #[test]
    fn chebyshev_ansatz_matches_dense() {
        let mut rng = crate::seed::TaskRng::seed_from_u64(4);
        for model in [ModelConfig::nearest_neighbor(), ModelConfig::long_range()] {
            let w = model.phase_disorder(Phase::Thermalized);
            let sched = QuenchSchedule::random(5, model, &w, 3, &mut rng).unwrap();
            let psi0 = initial_state(InitialState::NeelX, 5).unwrap();
            let a = apply_ansatz(&sched, &psi0).unwrap();
            let b = apply_ansatz_spectral(&sched, &psi0).unwrap();
            let diff: f64 = a
                .amplitudes()
                .iter()
                .zip(b.amplitudes())
                .map(|(x, y)| (x - y).norm_sqr())
                .sum();
            assert!(diff.sqrt() < 1e-11);
        }
    }

    #[test]
    fn schedule_validation() {
        let model = ModelConfig::nearest_neighbor();
        let bad_time = Quench {
            fields: vec![0.0; 3],
            transverse: 0.0,
            time: 0.0,
        };
        assert!(QuenchSchedule::new(3, model, vec![bad_time]).is_err());
        let bad_len = Quench {
            fields: vec![0.0; 2],
            transverse: 0.0,
            time: 1.0,
        };
        assert!(QuenchSchedule::new(3, model, vec![bad_len]).is_err());
        let sched = QuenchSchedule::new(3, model, vec![]).unwrap();
        let psi = initial_state(InitialState::AllZero, 4).unwrap();
        assert!(matches!(
            apply_ansatz(&sched, &psi),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn single_quench_example() {
        let model = ModelConfig::nearest_neighbor();
        let mut rng = crate::seed::TaskRng::seed_from_u64(12);
        let w = DisorderSpec::new(5.0).unwrap();
        let sched = QuenchSchedule::random(5, model, &w, 1, &mut rng).unwrap();
        let psi = apply_ansatz(&sched, &initial_state(InitialState::AllZero, 5).unwrap()).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-10);
        let zz = "Z1Z2"
            .parse::<PauliString>()
            .unwrap()
            .to_operator(5)
            .unwrap();
        let e = expectation(&psi, &zz).unwrap();
        assert!((-1.0..=1.0).contains(&e));
    }
}
