//! Losses, finite-difference training and the two benchmark tasks.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{validation, Error, Result};
use crate::models::{
    initial_state, sample_disorder, InitialState, ModelConfig, ModelKind, Phase, Quench,
    QuenchKernel, QuenchSchedule,
};
use crate::quantum::{eigenvalues, expectation, ChebyshevWorkspace, DenseHermitian, StateVector};
use crate::seed::task_rng;

/// Per-quench parameters of an ansatz. Times are stored as `tau = ln t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainableParams {
    n_qubits: usize,
    fields: Vec<Vec<f64>>,
    transverse: Vec<f64>,
    log_times: Vec<f64>,
    pub train_fields: bool,
    pub train_transverse: bool,
    pub train_times: bool,
}

impl TrainableParams {
    /// All groups trainable.
    pub fn new(
        n_qubits: usize,
        fields: Vec<Vec<f64>>,
        transverse: Vec<f64>,
        times: Vec<f64>,
    ) -> Result<Self> {
        let depth = fields.len();
        if transverse.len() != depth || times.len() != depth {
            return Err(validation(format!(
                "depth mismatch: {depth} field vectors, {} transverse fields, {} times",
                transverse.len(),
                times.len()
            )));
        }
        if let Some(row) = fields.iter().find(|row| row.len() != n_qubits) {
            return Err(Error::DimensionMismatch {
                expected: n_qubits,
                found: row.len(),
            });
        }
        if fields
            .iter()
            .flatten()
            .chain(&transverse)
            .any(|v| !v.is_finite())
        {
            return Err(validation("fields must be finite"));
        }
        if times.iter().any(|&t| !(t.is_finite() && t > 0.0)) {
            return Err(validation("quench times must be finite and > 0"));
        }
        Ok(Self {
            n_qubits,
            fields,
            transverse,
            log_times: times.iter().map(|t| t.ln()).collect(),
            train_fields: true,
            train_transverse: true,
            train_times: true,
        })
    }

    pub fn from_schedule(schedule: &QuenchSchedule) -> Result<Self> {
        let q = schedule.quenches();
        Self::new(
            schedule.n_qubits(),
            q.iter().map(|q| q.fields.clone()).collect(),
            q.iter().map(|q| q.transverse).collect(),
            q.iter().map(|q| q.time).collect(),
        )
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn depth(&self) -> usize {
        self.fields.len()
    }

    pub fn fields(&self) -> &[Vec<f64>] {
        &self.fields
    }

    pub fn transverse(&self) -> &[f64] {
        &self.transverse
    }

    pub fn times(&self) -> Vec<f64> {
        self.log_times.iter().map(|t| t.exp()).collect()
    }

    pub fn n_trainable(&self) -> usize {
        let m = self.depth();
        let mut k = 0;
        if self.train_fields {
            k += m * self.n_qubits;
        }
        if self.train_transverse {
            k += m;
        }
        if self.train_times {
            k += m;
        }
        k
    }

    /// Trainable coordinates: fields (quench-major), transverse fields, `ln t`.
    pub fn to_vector(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.n_trainable());
        if self.train_fields {
            v.extend(self.fields.iter().flatten());
        }
        if self.train_transverse {
            v.extend(&self.transverse);
        }
        if self.train_times {
            v.extend(&self.log_times);
        }
        v
    }

    pub fn set_vector(&mut self, v: &[f64]) -> Result<()> {
        if v.len() != self.n_trainable() {
            return Err(Error::DimensionMismatch {
                expected: self.n_trainable(),
                found: v.len(),
            });
        }
        let mut it = v.iter().copied();
        if self.train_fields {
            for x in self.fields.iter_mut().flatten() {
                *x = it.next().expect("length checked");
            }
        }
        if self.train_transverse {
            for x in &mut self.transverse {
                *x = it.next().expect("length checked");
            }
        }
        if self.train_times {
            for x in &mut self.log_times {
                *x = it.next().expect("length checked");
            }
        }
        Ok(())
    }

    fn coordinate_mut(&mut self, i: usize) -> &mut f64 {
        let m = self.depth();
        let mut i = i;
        if self.train_fields {
            if i < m * self.n_qubits {
                return &mut self.fields[i / self.n_qubits][i % self.n_qubits];
            }
            i -= m * self.n_qubits;
        }
        if self.train_transverse {
            if i < m {
                return &mut self.transverse[i];
            }
            i -= m;
        }
        &mut self.log_times[i]
    }

    pub fn quenches(&self) -> Vec<Quench> {
        self.fields
            .iter()
            .zip(&self.transverse)
            .zip(&self.log_times)
            .map(|((f, &b), &tau)| Quench {
                fields: f.clone(),
                transverse: b,
                time: tau.exp(),
            })
            .collect()
    }

    pub fn schedule(&self, model: ModelConfig) -> Result<QuenchSchedule> {
        QuenchSchedule::new(self.n_qubits, model, self.quenches())
    }
}

/// Parameters drawn in the default disorder of `phase`, with `B` and
/// `t = 1/J` taken from the model.
pub fn phase_init(
    model: &ModelConfig,
    phase: Phase,
    n: usize,
    depth: usize,
    seed: u64,
) -> Result<TrainableParams> {
    model.validate(n)?;
    let disorder = model.phase_disorder(phase);
    let mut rng = task_rng(
        seed,
        &format!("init/{}/{}", model.kind, phase),
        &[n as u64, depth as u64],
    );
    let fields = (0..depth)
        .map(|_| sample_disorder(&disorder, n, &mut rng))
        .collect();
    TrainableParams::new(
        n,
        fields,
        vec![model.b; depth],
        vec![model.default_time(); depth],
    )
}

pub fn mbl_init(model: &ModelConfig, n: usize, depth: usize, seed: u64) -> Result<TrainableParams> {
    phase_init(model, Phase::Mbl, n, depth, seed)
}

pub fn thermal_init(
    model: &ModelConfig,
    n: usize,
    depth: usize,
    seed: u64,
) -> Result<TrainableParams> {
    phase_init(model, Phase::Thermalized, n, depth, seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LossKind {
    ObservableExpectation,
    VqeEnergy,
    MaxcutEnergy,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LossSpec {
    pub kind: LossKind,
    pub operator: DenseHermitian,
    pub initial: InitialState,
    pub model: ModelConfig,
}

impl LossSpec {
    pub fn new(
        kind: LossKind,
        operator: DenseHermitian,
        initial: InitialState,
        model: ModelConfig,
    ) -> Result<Self> {
        model.validate(operator.n_qubits())?;
        Ok(Self {
            kind,
            operator,
            initial,
            model,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.operator.n_qubits()
    }

    pub fn evaluator(&self) -> Result<LossEvaluator<'_>> {
        let n = self.n_qubits();
        Ok(LossEvaluator {
            spec: self,
            kernel: QuenchKernel::new(self.model, n)?,
            psi0: initial_state(self.initial, n)?,
            ws: ChebyshevWorkspace::default(),
        })
    }
}

/// Reusable state for repeated loss evaluations of one [`LossSpec`].
#[derive(Debug)]
pub struct LossEvaluator<'a> {
    spec: &'a LossSpec,
    kernel: QuenchKernel,
    psi0: StateVector,
    ws: ChebyshevWorkspace,
}

impl LossEvaluator<'_> {
    pub fn state(&mut self, params: &TrainableParams) -> Result<StateVector> {
        if params.n_qubits() != self.kernel.n_qubits() {
            return Err(Error::DimensionMismatch {
                expected: self.psi0.dim(),
                found: 1 << params.n_qubits(),
            });
        }
        let mut amps = self.psi0.amplitudes().to_vec();
        for q in params.quenches() {
            self.kernel.apply_quench(&q, &mut amps, &mut self.ws)?;
        }
        StateVector::new(params.n_qubits(), amps)
    }

    pub fn loss(&mut self, params: &TrainableParams) -> Result<f64> {
        let psi = self.state(params)?;
        expectation(&psi, &self.spec.operator)
    }

    /// Central differences over the trainable coordinates. Time steps act on
    /// `ln t`, so every probe keeps `t > 0`.
    pub fn gradient(&mut self, params: &TrainableParams, eps: f64) -> Result<Vec<f64>> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(validation(format!(
                "finite-difference step must be > 0, got {eps}"
            )));
        }
        let mut probe = params.clone();
        let k = params.n_trainable();
        let mut grad = Vec::with_capacity(k);
        for i in 0..k {
            let x = *probe.coordinate_mut(i);
            *probe.coordinate_mut(i) = x + eps;
            let up = self.loss(&probe)?;
            *probe.coordinate_mut(i) = x - eps;
            let down = self.loss(&probe)?;
            *probe.coordinate_mut(i) = x;
            grad.push((up - down) / (2.0 * eps));
        }
        Ok(grad)
    }
}

pub fn loss(params: &TrainableParams, spec: &LossSpec) -> Result<f64> {
    spec.evaluator()?.loss(params)
}

pub fn finite_diff_gradient(
    params: &TrainableParams,
    spec: &LossSpec,
    eps: f64,
) -> Result<Vec<f64>> {
    spec.evaluator()?.gradient(params, eps)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptimizerMethod {
    #[default]
    MomentumGradientDescent,
    /// Bias-corrected adaptive moments; `momentum` is the first-moment decay.
    Adam,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerConfig {
    pub method: OptimizerMethod,
    pub learning_rate: f64,
    pub momentum: f64,
    pub epochs: usize,
    pub fd_step: f64,
    /// Gradients longer than this are rescaled to this Euclidean norm.
    pub max_grad_norm: Option<f64>,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            method: OptimizerMethod::MomentumGradientDescent,
            learning_rate: 0.05,
            momentum: 0.9,
            epochs: 100,
            fd_step: 1e-3,
            max_grad_norm: None,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(validation("learning rate must be > 0"));
        }
        if !(self.fd_step > 0.0 && self.fd_step.is_finite()) {
            return Err(validation("finite-difference step must be > 0"));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(validation("momentum must lie in [0, 1)"));
        }
        if self
            .max_grad_norm
            .is_some_and(|c| !(c > 0.0 && c.is_finite()))
        {
            return Err(validation("gradient clip must be > 0"));
        }
        if self.epochs < 1 {
            return Err(validation("epochs must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    /// Loss before the first update and after each epoch.
    pub losses: Vec<f64>,
    /// Parameters matching `losses`.
    pub params: Vec<TrainableParams>,
    pub best_epoch: usize,
    pub best_loss: f64,
}

impl Trajectory {
    pub fn best_params(&self) -> &TrainableParams {
        &self.params[self.best_epoch]
    }
}

/// Heavy-ball gradient descent on finite-difference gradients.
pub fn optimize(
    spec: &LossSpec,
    init: &TrainableParams,
    cfg: &OptimizerConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    let mut eval = spec.evaluator()?;
    let mut params = init.clone();
    let mut x = params.to_vector();
    let mut velocity = vec![0.0; x.len()];
    let mut second = vec![0.0; x.len()];
    let mut losses = Vec::with_capacity(cfg.epochs + 1);
    let mut history = Vec::with_capacity(cfg.epochs + 1);
    for epoch in 0..=cfg.epochs {
        let value = eval.loss(&params)?;
        if !value.is_finite() {
            return Err(Error::NonFiniteLoss { epoch, value });
        }
        losses.push(value);
        history.push(params.clone());
        if epoch == cfg.epochs {
            break;
        }
        let mut grad = eval.gradient(&params, cfg.fd_step)?;
        if let Some(bad) = grad.iter().find(|g| !g.is_finite()) {
            return Err(Error::NonFiniteLoss { epoch, value: *bad });
        }
        if let Some(clip) = cfg.max_grad_norm {
            let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
            if norm > clip {
                grad.iter_mut().for_each(|g| *g *= clip / norm);
            }
        }
        match cfg.method {
            OptimizerMethod::MomentumGradientDescent => {
                for ((xi, vi), gi) in x.iter_mut().zip(&mut velocity).zip(&grad) {
                    *vi = cfg.momentum * *vi - cfg.learning_rate * gi;
                    *xi += *vi;
                }
            }
            OptimizerMethod::Adam => {
                const BETA2: f64 = 0.999;
                let step = (epoch + 1) as i32;
                let c1 = 1.0 - cfg.momentum.powi(step);
                let c2 = 1.0 - BETA2.powi(step);
                for (((xi, mi), vi), gi) in
                    x.iter_mut().zip(&mut velocity).zip(&mut second).zip(&grad)
                {
                    *mi = cfg.momentum * *mi + (1.0 - cfg.momentum) * gi;
                    *vi = BETA2 * *vi + (1.0 - BETA2) * gi * gi;
                    *xi -= cfg.learning_rate * (*mi / c1) / ((*vi / c2).sqrt() + 1e-8);
                }
            }
        }
        params.set_vector(&x)?;
    }
    let (best_epoch, best_loss) =
        losses
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |acc, (i, v)| if v < acc.1 { (i, v) } else { acc },
            );
    Ok(Trajectory {
        losses,
        params: history,
        best_epoch,
        best_loss,
    })
}

/// Weighted graph for Max-Cut. Vertex `i` is qubit `i + 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct MaxCutInstance {
    weights: Vec<Vec<f64>>,
}

impl MaxCutInstance {
    pub fn new(weights: Vec<Vec<f64>>) -> Result<Self> {
        let n = weights.len();
        if n < 2 {
            return Err(validation("a Max-Cut instance needs at least two vertices"));
        }
        for (i, row) in weights.iter().enumerate() {
            if row.len() != n {
                return Err(validation("adjacency matrix must be square"));
            }
            if row[i] != 0.0 {
                return Err(validation("adjacency matrix must have a zero diagonal"));
            }
            for (j, &w) in row.iter().enumerate() {
                if !w.is_finite() || w != weights[j][i] {
                    return Err(validation(format!("adjacency not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self { weights })
    }

    /// The five-vertex weighted graph with a degenerate optimum.
    pub fn reference() -> Self {
        let w = [
            [0.0, 1.0, -1.0, 0.0, 1.0],
            [1.0, 0.0, 1.0, 0.0, 0.0],
            [-1.0, 1.0, 0.0, -1.0, 1.0],
            [0.0, 0.0, -1.0, 0.0, -1.0],
            [1.0, 0.0, 1.0, -1.0, 0.0],
        ];
        Self {
            weights: w.iter().map(|r| r.to_vec()).collect(),
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    fn spins(&self, s: usize) -> Vec<f64> {
        let n = self.n_vertices();
        (0..n)
            .map(|i| if s >> (n - 1 - i) & 1 == 0 { 1.0 } else { -1.0 })
            .collect()
    }

    /// `sum_{i>j} w_ij z_i z_j` for basis index `s`.
    pub fn energy(&self, s: usize) -> f64 {
        let z = self.spins(s);
        let mut e = 0.0;
        for i in 0..z.len() {
            for j in 0..i {
                e += self.weights[i][j] * z[i] * z[j];
            }
        }
        e
    }

    /// `sum_{i>j} w_ij (1 - z_i z_j) / 2` for basis index `s`.
    pub fn cut_value(&self, s: usize) -> f64 {
        let z = self.spins(s);
        let mut c = 0.0;
        for i in 0..z.len() {
            for j in 0..i {
                c += self.weights[i][j] * (1.0 - z[i] * z[j]) / 2.0;
            }
        }
        c
    }

    pub fn bitstring(&self, s: usize) -> String {
        format!("{:0width$b}", s, width = self.n_vertices())
    }

    /// Exhaustive search over all `2^n` assignments.
    pub fn brute_force(&self) -> BruteForce {
        let dim = 1usize << self.n_vertices();
        let cuts: Vec<f64> = (0..dim).map(|s| self.cut_value(s)).collect();
        let max_cut = cuts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let optima: Vec<usize> = (0..dim).filter(|&s| cuts[s] >= max_cut - 1e-12).collect();
        BruteForce {
            max_cut,
            ground_energy: self.energy(optima[0]),
            optima: optima.iter().map(|&s| self.bitstring(s)).collect(),
        }
    }
}

impl TryFrom<Vec<Vec<f64>>> for MaxCutInstance {
    type Error = Error;

    fn try_from(w: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(w)
    }
}

impl From<MaxCutInstance> for Vec<Vec<f64>> {
    fn from(m: MaxCutInstance) -> Self {
        m.weights
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BruteForce {
    pub max_cut: f64,
    pub ground_energy: f64,
    /// Optimal bitstrings, qubit 1 first, in ascending order.
    pub optima: Vec<String>,
}

pub fn maxcut_hamiltonian(instance: &MaxCutInstance) -> Result<DenseHermitian> {
    let n = instance.n_vertices();
    let diag: Vec<f64> = (0..1usize << n).map(|s| instance.energy(s)).collect();
    DenseHermitian::from_real_diagonal(n, &diag)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub bitstring: String,
    pub index: usize,
    pub probability: f64,
}

/// Basis states with probability at least `threshold`, most probable first.
pub fn maxcut_solutions(psi: &StateVector, threshold: f64) -> Result<Vec<Selection>> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(validation(format!(
            "threshold must lie in (0, 1], got {threshold}"
        )));
    }
    let n = psi.n_qubits();
    let mut out: Vec<Selection> = psi
        .probabilities()
        .into_iter()
        .enumerate()
        .filter(|&(_, p)| p >= threshold)
        .map(|(s, p)| Selection {
            bitstring: format!("{:0width$b}", s, width = n),
            index: s,
            probability: p,
        })
        .collect();
    out.sort_by(|a, b| {
        b.probability
            .total_cmp(&a.probability)
            .then(a.index.cmp(&b.index))
    });
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproximationRatio {
    pub ratio: f64,
    /// No state reached the threshold; the most probable one was used.
    pub empty_selection: bool,
    pub selected: Vec<Selection>,
}

/// Probability-weighted mean cut of the selected bitstrings over the
/// maximum cut.
pub fn approximation_ratio(
    psi: &StateVector,
    instance: &MaxCutInstance,
    threshold: f64,
) -> Result<ApproximationRatio> {
    if psi.n_qubits() != instance.n_vertices() {
        return Err(Error::DimensionMismatch {
            expected: 1 << instance.n_vertices(),
            found: psi.dim(),
        });
    }
    let mut selected = maxcut_solutions(psi, threshold)?;
    let empty_selection = selected.is_empty();
    if empty_selection {
        let probs = psi.probabilities();
        let (s, &p) = probs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
            .expect("non-empty state");
        selected.push(Selection {
            bitstring: instance.bitstring(s),
            index: s,
            probability: p,
        });
    }
    let max_cut = instance.brute_force().max_cut;
    let mass: f64 = selected.iter().map(|s| s.probability).sum();
    let cut: f64 = selected
        .iter()
        .map(|s| s.probability * instance.cut_value(s.index))
        .sum::<f64>()
        / mass;
    Ok(ApproximationRatio {
        ratio: cut / max_cut,
        empty_selection,
        selected,
    })
}

fn mean_and_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VqeConfig {
    pub n: usize,
    pub depth: usize,
    pub instances: usize,
    pub ansatz: ModelConfig,
    pub ansatz_initial: InitialState,
    pub init_phase: Phase,
    pub target: ModelConfig,
    pub target_phase: Phase,
    pub optimizer: OptimizerConfig,
    pub seed: u64,
}

impl Default for VqeConfig {
    /// Nearest-neighbour ansatz targeting a thermal long-range chain.
    fn default() -> Self {
        Self {
            n: 7,
            depth: 6,
            instances: 20,
            ansatz: ModelConfig::nearest_neighbor(),
            ansatz_initial: InitialState::AllZero,
            init_phase: Phase::Mbl,
            target: ModelConfig::long_range(),
            target_phase: Phase::Thermalized,
            optimizer: OptimizerConfig {
                method: OptimizerMethod::Adam,
                ..OptimizerConfig::default()
            },
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VqeInstance {
    pub id: usize,
    pub exact_energy: f64,
    pub best_energy: f64,
    pub relative_error: f64,
    pub losses: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VqeReport {
    pub instances: Vec<VqeInstance>,
    pub mean_relative_error: f64,
    pub sd_relative_error: f64,
}

pub fn vqe_target(cfg: &VqeConfig, id: usize) -> Result<DenseHermitian> {
    let disorder = cfg.target.phase_disorder(cfg.target_phase);
    let mut rng = task_rng(cfg.seed, "vqe/target", &[cfg.n as u64, id as u64]);
    let h = sample_disorder(&disorder, cfg.n, &mut rng);
    Ok(QuenchKernel::new(cfg.target, cfg.n)?
        .operator(&h, cfg.target.b)?
        .to_dense())
}

pub fn vqe_benchmark(cfg: &VqeConfig) -> Result<VqeReport> {
    if cfg.instances == 0 {
        return Err(validation("need at least one instance"));
    }
    cfg.optimizer.validate()?;
    let instances = (0..cfg.instances)
        .into_par_iter()
        .map(|id| -> Result<VqeInstance> {
            let target = vqe_target(cfg, id)?;
            let exact_energy = eigenvalues(&target)?[0];
            let spec = LossSpec::new(LossKind::VqeEnergy, target, cfg.ansatz_initial, cfg.ansatz)?;
            let init_seed = crate::seed::derive_seed(cfg.seed, "vqe/init", &[id as u64]);
            let init = phase_init(&cfg.ansatz, cfg.init_phase, cfg.n, cfg.depth, init_seed)?;
            let traj = optimize(&spec, &init, &cfg.optimizer)?;
            Ok(VqeInstance {
                id,
                exact_energy,
                best_energy: traj.best_loss,
                relative_error: (traj.best_loss - exact_energy).abs() / exact_energy.abs(),
                losses: traj.losses,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let errors: Vec<f64> = instances.iter().map(|i| i.relative_error).collect();
    let (mean_relative_error, sd_relative_error) = mean_and_sd(&errors);
    Ok(VqeReport {
        instances,
        mean_relative_error,
        sd_relative_error,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaxCutConfig {
    pub instance: MaxCutInstance,
    pub depth: usize,
    pub realizations: usize,
    pub ansatz: ModelConfig,
    pub ansatz_initial: InitialState,
    pub init_phase: Phase,
    pub threshold: f64,
    pub optimizer: OptimizerConfig,
    pub seed: u64,
}

impl Default for MaxCutConfig {
    fn default() -> Self {
        Self {
            instance: MaxCutInstance::reference(),
            depth: 6,
            realizations: 20,
            ansatz: ModelConfig::nearest_neighbor(),
            ansatz_initial: InitialState::AllZero,
            init_phase: Phase::Mbl,
            threshold: 0.01,
            optimizer: OptimizerConfig {
                method: OptimizerMethod::Adam,
                epochs: 50,
                ..OptimizerConfig::default()
            },
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaxCutRun {
    pub id: usize,
    pub final_energy: f64,
    pub ratio: ApproximationRatio,
    pub losses: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaxCutReport {
    pub optimum: BruteForce,
    pub runs: Vec<MaxCutRun>,
    pub mean_ratio: f64,
    pub sd_ratio: f64,
}

pub fn maxcut_benchmark(cfg: &MaxCutConfig) -> Result<MaxCutReport> {
    if cfg.realizations == 0 {
        return Err(validation("need at least one realization"));
    }
    cfg.optimizer.validate()?;
    let n = cfg.instance.n_vertices();
    let spec = LossSpec::new(
        LossKind::MaxcutEnergy,
        maxcut_hamiltonian(&cfg.instance)?,
        cfg.ansatz_initial,
        cfg.ansatz,
    )?;
    let runs = (0..cfg.realizations)
        .into_par_iter()
        .map(|id| -> Result<MaxCutRun> {
            let init_seed = crate::seed::derive_seed(cfg.seed, "maxcut/init", &[id as u64]);
            let init = phase_init(&cfg.ansatz, cfg.init_phase, n, cfg.depth, init_seed)?;
            let traj = optimize(&spec, &init, &cfg.optimizer)?;
            let best = traj.best_params();
            let psi = spec.evaluator()?.state(best)?;
            Ok(MaxCutRun {
                id,
                final_energy: traj.best_loss,
                ratio: approximation_ratio(&psi, &cfg.instance, cfg.threshold)?,
                losses: traj.losses,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let ratios: Vec<f64> = runs.iter().map(|r| r.ratio.ratio).collect();
    let (mean_ratio, sd_ratio) = mean_and_sd(&ratios);
    Ok(MaxCutReport {
        optimum: cfg.instance.brute_force(),
        runs,
        mean_ratio,
        sd_ratio,
    })
}

/// Reference state paired with each model kind.
pub fn default_initial(kind: ModelKind) -> InitialState {
    match kind {
        ModelKind::NearestNeighbor => InitialState::AllZero,
        ModelKind::LongRange => InitialState::NeelX,
    }
}
