//! Frame potentials of quench-ansatz ensembles, Haar references, variance
//! bounds and moment-operator checks.

use faer::linalg::matmul::matmul;
use faer::{c64, Accum, Mat, Par};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, validation, Error, Result};
use crate::models::{
    initial_state, sample_disorder, DisorderSpec, InitialState, ModelConfig, Phase, Quench,
    QuenchKernel,
};
use crate::quantum::{dim_for, haar_random_state, ChebyshevWorkspace, DenseHermitian, StateVector};
use crate::seed::task_rng;

/// Largest register for which dense moment operators are built.
pub const MAX_MOMENT_QUBITS: usize = 6;

/// Rows per block in the pair sums; fixed so that results do not depend on
/// the number of threads.
const PAIR_BLOCK: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub model: ModelConfig,
    pub n: usize,
    pub depth: usize,
    pub disorder: DisorderSpec,
    pub time: f64,
    pub initial: InitialState,
    pub samples: usize,
    pub seed: u64,
}

impl EnsembleConfig {
    /// Model defaults for `phase`: its disorder strength and `t = 1/J`.
    pub fn for_phase(
        model: ModelConfig,
        phase: Phase,
        n: usize,
        depth: usize,
        samples: usize,
        seed: u64,
    ) -> Self {
        Self {
            model,
            n,
            depth,
            disorder: model.phase_disorder(phase),
            time: model.default_time(),
            initial: InitialState::AllZero,
            samples,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate(self.n)?;
        dim_for(self.n)?;
        if self.samples < 2 {
            return Err(validation(format!(
                "need N >= 2 samples, got {}",
                self.samples
            )));
        }
        if !(self.time.is_finite() && self.time > 0.0) {
            return Err(validation(format!(
                "quench time must be > 0, got {}",
                self.time
            )));
        }
        Ok(())
    }

    fn stream(&self) -> String {
        format!("ensemble/{}/{:e}", self.model.kind, self.disorder.w())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleSample {
    n_qubits: usize,
    states: Vec<StateVector>,
}

impl EnsembleSample {
    pub fn from_states(states: Vec<StateVector>) -> Result<Self> {
        let n_qubits = states
            .first()
            .ok_or_else(|| validation("an ensemble needs at least one state"))?
            .n_qubits();
        for s in &states {
            check_dim(1 << n_qubits, s.dim())?;
        }
        Ok(Self { n_qubits, states })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    fn amplitude_rows(&self) -> Vec<&[C64]> {
        self.states.iter().map(|s| s.amplitudes()).collect()
    }
}

/// Advances every draw of an ensemble through successive depths.
///
/// Quench `m` of draw `k` is seeded by `(seed, model, W, n, k, m)`, so the
/// ensemble at depth `M` is the same whether reached directly or through
/// intermediate depths.
pub struct EnsembleWalker {
    cfg: EnsembleConfig,
    kernel: QuenchKernel,
    states: Vec<Vec<C64>>,
    depth: usize,
}

impl EnsembleWalker {
    pub fn new(cfg: &EnsembleConfig) -> Result<Self> {
        cfg.validate()?;
        let kernel = QuenchKernel::new(cfg.model, cfg.n)?;
        let psi0 = initial_state(cfg.initial, cfg.n)?.into_amplitudes();
        Ok(Self {
            cfg: cfg.clone(),
            kernel,
            states: vec![psi0; cfg.samples],
            depth: 0,
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn quench(&self, draw: usize, m: usize) -> Quench {
        draw_quench(&self.cfg, draw, m)
    }

    pub fn advance_to(&mut self, depth: usize) -> Result<()> {
        if depth < self.depth {
            return Err(validation(format!(
                "cannot rewind from depth {} to {depth}",
                self.depth
            )));
        }
        let from = self.depth;
        let (cfg, kernel) = (&self.cfg, &self.kernel);
        self.states.par_iter_mut().enumerate().try_for_each_init(
            ChebyshevWorkspace::default,
            |ws, (k, amps)| {
                for m in from..depth {
                    kernel.apply_quench(&draw_quench(cfg, k, m), amps, ws)?;
                }
                Ok::<_, Error>(())
            },
        )?;
        self.depth = depth;
        Ok(())
    }

    pub fn amplitudes(&self) -> &[Vec<C64>] {
        &self.states
    }

    pub fn snapshot(&self) -> Result<EnsembleSample> {
        let states = self
            .states
            .iter()
            .map(|a| StateVector::new(self.cfg.n, a.clone()))
            .collect::<Result<Vec<_>>>()?;
        EnsembleSample::from_states(states)
    }
}

fn draw_quench(cfg: &EnsembleConfig, draw: usize, m: usize) -> Quench {
    let n = cfg.n;
    let mut rng = task_rng(cfg.seed, &cfg.stream(), &[n as u64, draw as u64, m as u64]);
    Quench {
        fields: sample_disorder(&cfg.disorder, n, &mut rng),
        transverse: cfg.model.b,
        time: cfg.time,
    }
}

pub fn sample_ensemble(cfg: &EnsembleConfig) -> Result<EnsembleSample> {
    let mut walker = EnsembleWalker::new(cfg)?;
    walker.advance_to(cfg.depth)?;
    walker.snapshot()
}

/// `N` Haar-random states, one seeded stream per state.
pub fn haar_ensemble(n: usize, samples: usize, seed: u64) -> Result<EnsembleSample> {
    let states = (0..samples)
        .into_par_iter()
        .map(|k| haar_random_state(n, &mut task_rng(seed, "haar", &[n as u64, k as u64])))
        .collect::<Result<Vec<_>>>()?;
    EnsembleSample::from_states(states)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FramePotentialEstimate {
    pub order: u32,
    pub value: f64,
    /// U-statistic standard error (accounts for pairs sharing a state).
    pub std_error: f64,
    /// `sd(pair values) / sqrt(pairs)`; a lower bound on the uncertainty.
    pub naive_std_error: f64,
    pub pairs: u64,
}

fn check_order(t: u32) -> Result<()> {
    if t == 1 || t == 2 {
        Ok(())
    } else {
        Err(validation(format!(
            "frame potential order must be 1 or 2, got {t}"
        )))
    }
}

/// Per-block partial sums over pairs `(k, l)`, `k < l`, `k` in the block.
struct BlockSums {
    sum: [f64; 2],
    sum_sq: [f64; 2],
    /// Contributions to each state's row sum, indexed from the block start.
    rows: [Vec<f64>; 2],
}

fn block_sums(a: &Mat<c64>, start: usize, len: usize) -> BlockSums {
    let total = a.nrows();
    let tail = total - start;
    let mut g = Mat::<c64>::zeros(len, tail);
    matmul(
        g.as_mut(),
        Accum::Replace,
        a.as_ref().subrows(start, len),
        a.as_ref().subrows(start, tail).adjoint(),
        c64::new(1.0, 0.0),
        Par::Seq,
    );
    let mut out = BlockSums {
        sum: [0.0; 2],
        sum_sq: [0.0; 2],
        rows: [vec![0.0; tail], vec![0.0; tail]],
    };
    for i in 0..len {
        for j in i + 1..tail {
            let f1 = g[(i, j)].norm_sqr();
            let f2 = f1 * f1;
            for (t, f) in [f1, f2].into_iter().enumerate() {
                out.sum[t] += f;
                out.sum_sq[t] += f * f;
                out.rows[t][i] += f;
                out.rows[t][j] += f;
            }
        }
    }
    out
}

/// First- and second-order frame potentials from all unordered pairs.
pub fn frame_potentials_of(rows: &[&[C64]]) -> Result<[FramePotentialEstimate; 2]> {
    let n = rows.len();
    if n < 2 {
        return Err(validation(format!("need N >= 2 states, got {n}")));
    }
    let dim = rows[0].len();
    for r in rows {
        check_dim(dim, r.len())?;
    }
    let a = Mat::<c64>::from_fn(n, dim, |k, x| rows[k][x]);
    let blocks: Vec<(usize, usize)> = (0..n)
        .step_by(PAIR_BLOCK)
        .map(|s| (s, PAIR_BLOCK.min(n - s)))
        .collect();
    let partial: Vec<BlockSums> = blocks
        .par_iter()
        .map(|&(s, len)| block_sums(&a, s, len))
        .collect();

    let mut sum = [0.0; 2];
    let mut sum_sq = [0.0; 2];
    let mut row_sums = [vec![0.0; n], vec![0.0; n]];
    for ((start, _), b) in blocks.iter().zip(&partial) {
        for t in 0..2 {
            sum[t] += b.sum[t];
            sum_sq[t] += b.sum_sq[t];
            for (acc, v) in row_sums[t][*start..].iter_mut().zip(&b.rows[t]) {
                *acc += v;
            }
        }
    }

    let nf = n as f64;
    let pairs = nf * (nf - 1.0) / 2.0;
    let estimate = |t: usize| {
        let mean = sum[t] / pairs;
        let zeta2 = if pairs > 1.0 {
            ((sum_sq[t] - pairs * mean * mean) / (pairs - 1.0)).max(0.0)
        } else {
            0.0
        };
        let naive = (zeta2 / pairs).sqrt();
        let std_error = if n > 2 {
            let row_means: Vec<f64> = row_sums[t].iter().map(|s| s / (nf - 1.0)).collect();
            let rm = row_means.iter().sum::<f64>() / nf;
            let var_rows = row_means.iter().map(|m| (m - rm).powi(2)).sum::<f64>() / (nf - 1.0);
            let zeta1 = (((nf - 1.0) * var_rows - zeta2) / (nf - 2.0)).max(0.0);
            ((4.0 * (nf - 2.0) * zeta1 + 2.0 * zeta2) / (nf * (nf - 1.0))).sqrt()
        } else {
            naive
        };
        FramePotentialEstimate {
            order: t as u32 + 1,
            value: mean,
            std_error,
            naive_std_error: naive,
            pairs: pairs as u64,
        }
    };
    Ok([estimate(0), estimate(1)])
}

pub fn frame_potentials(sample: &EnsembleSample) -> Result<[FramePotentialEstimate; 2]> {
    frame_potentials_of(&sample.amplitude_rows())
}

pub fn frame_potential(sample: &EnsembleSample, t: u32) -> Result<FramePotentialEstimate> {
    check_order(t)?;
    Ok(frame_potentials(sample)?[t as usize - 1])
}

/// `2^-n` for `t = 1`, `2 / (2^n (2^n + 1))` for `t = 2`.
pub fn haar_frame_potential(n: usize, t: u32) -> Result<f64> {
    check_order(t)?;
    let d = dim_for(n)? as f64;
    Ok(match t {
        1 => 1.0 / d,
        _ => 2.0 / (d * (d + 1.0)),
    })
}

fn check_observable(o: &DenseHermitian, n: usize) -> Result<f64> {
    let d = dim_for(n)?;
    check_dim(d, o.dim())?;
    Ok(d as f64)
}

/// Variance of `<psi|O|psi>` over Haar-random `psi`.
pub fn haar_loss_variance(o: &DenseHermitian, n: usize) -> Result<f64> {
    let d = check_observable(o, n)?;
    let tr = o.trace();
    let tr2 = o.trace_of_square();
    Ok((tr * tr + tr2) / (d * (d + 1.0)) - tr * tr / (d * d))
}

/// Upper bound on the loss variance of an ensemble with frame potentials
/// `f1`, `f2`; `k = 1` gives the theoretical bound.
pub fn empirical_bound(f1: f64, f2: f64, o: &DenseHermitian, n: usize, k: f64) -> Result<f64> {
    let d = check_observable(o, n)?;
    if !(f1.is_finite() && f2.is_finite() && k.is_finite()) {
        return Err(validation("frame potentials and k must be finite"));
    }
    let var_haar = haar_loss_variance(o, n)?;
    let d2 = (f2 - haar_frame_potential(n, 2)?).max(0.0);
    // The first moment deviation is a partial trace of the second, so
    // 0 <= d1 <= d * d2; sampled pairs outside that range are projected.
    let d1 = (f1 - haar_frame_potential(n, 1)?).clamp(0.0, d * d2);
    let norm_sq = o.trace_of_square();
    let norm = norm_sq.sqrt();
    let first = (d2.sqrt() - d1) * norm_sq.powf(k);
    let second = o.trace() / (d / 2.0) * d1.sqrt() * norm;
    Ok(var_haar + first + second)
}

pub fn variance_bound(f1: f64, f2: f64, o: &DenseHermitian, n: usize) -> Result<f64> {
    empirical_bound(f1, f2, o, n, 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum HaarReference {
    /// `I/d` and `(I + SWAP) / (d (d + 1))`.
    Exact,
    MonteCarlo {
        samples: usize,
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentDeviation {
    pub norm: f64,
    /// Squared norm with the `1/N` self-pair bias of each sampled average
    /// removed; `None` when a sampled side has fewer than two states.
    pub norm_sq_unbiased: Option<f64>,
}

/// Dense `(1/N) sum_k (|psi_k><psi_k|)^{(x) t}`, row-major.
fn moment_operator(sample: &EnsembleSample, t: u32) -> Vec<C64> {
    let d = 1usize << sample.n_qubits;
    let big = d.pow(t);
    let mut acc = vec![C64::new(0.0, 0.0); big * big];
    let mut v = vec![C64::new(0.0, 0.0); big];
    for s in sample.states() {
        let a = s.amplitudes();
        if t == 1 {
            v.copy_from_slice(a);
        } else {
            for (i, x) in a.iter().enumerate() {
                for (j, y) in a.iter().enumerate() {
                    v[i * d + j] = x * y;
                }
            }
        }
        for (i, vi) in v.iter().enumerate() {
            if *vi == C64::new(0.0, 0.0) {
                continue;
            }
            let row = &mut acc[i * big..(i + 1) * big];
            for (r, vj) in row.iter_mut().zip(&v) {
                *r += vi * vj.conj();
            }
        }
    }
    let inv = 1.0 / sample.len() as f64;
    acc.iter_mut().for_each(|x| *x *= inv);
    acc
}

fn exact_haar_entry(d: usize, t: u32, row: usize, col: usize) -> f64 {
    if t == 1 {
        return if row == col { 1.0 / d as f64 } else { 0.0 };
    }
    let (i, j) = (row / d, row % d);
    let swapped = j * d + i;
    let identity = if row == col { 1.0 } else { 0.0 };
    let swap = if col == swapped { 1.0 } else { 0.0 };
    (identity + swap) / (d as f64 * (d as f64 + 1.0))
}

fn unbias(norm_sq: f64, n: usize) -> Option<f64> {
    (n >= 2).then(|| {
        let nf = n as f64;
        (nf * norm_sq - 1.0) / (nf - 1.0)
    })
}

/// Schatten-2 distance between the ensemble's `t`-th moment operator of
/// `rho_0` and the Haar one.
pub fn moment_deviation(
    sample: &EnsembleSample,
    t: u32,
    reference: &HaarReference,
) -> Result<MomentDeviation> {
    check_order(t)?;
    let n = sample.n_qubits;
    if n > MAX_MOMENT_QUBITS {
        return Err(Error::Capability(format!(
            "moment operators are limited to n <= {MAX_MOMENT_QUBITS}, got {n}"
        )));
    }
    let d = 1usize << n;
    let big = d.pow(t);
    let ens = moment_operator(sample, t);
    let (refop, ref_count) = match *reference {
        HaarReference::Exact => (None, None),
        HaarReference::MonteCarlo { samples, seed } => {
            let haar = haar_ensemble(n, samples, seed)?;
            (Some(moment_operator(&haar, t)), Some(samples))
        }
    };
    let mut ens_sq = 0.0;
    let mut cross = 0.0;
    let mut ref_sq = 0.0;
    let mut dist_sq = 0.0;
    for row in 0..big {
        for col in 0..big {
            let e = ens[row * big + col];
            let h = match &refop {
                Some(m) => m[row * big + col],
                None => C64::new(exact_haar_entry(d, t, row, col), 0.0),
            };
            ens_sq += e.norm_sqr();
            cross += (e * h.conj()).re;
            ref_sq += h.norm_sqr();
            dist_sq += (e - h).norm_sqr();
        }
    }
    let ens_unbiased = unbias(ens_sq, sample.len());
    let ref_unbiased = match ref_count {
        None => Some(ref_sq),
        Some(m) => unbias(ref_sq, m),
    };
    let norm_sq_unbiased = ens_unbiased
        .zip(ref_unbiased)
        .map(|(e, h)| e - 2.0 * cross + h);
    Ok(MomentDeviation {
        norm: dist_sq.sqrt(),
        norm_sq_unbiased,
    })
}

pub fn moment_deviation_norm(
    sample: &EnsembleSample,
    t: u32,
    reference: &HaarReference,
) -> Result<f64> {
    Ok(moment_deviation(sample, t, reference)?.norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{fidelity, PauliString};

    fn zz(n: usize) -> DenseHermitian {
        "Z1Z2"
            .parse::<PauliString>()
            .unwrap()
            .to_operator(n)
            .unwrap()
    }

    fn basis_sample(n: usize, indices: &[usize]) -> EnsembleSample {
        EnsembleSample::from_states(
            indices
                .iter()
                .map(|&i| StateVector::basis(n, i).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn haar_constants() {
        assert!((haar_frame_potential(1, 2).unwrap() - 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(haar_frame_potential(5, 1).unwrap(), 1.0 / 32.0);
        let f = haar_frame_potential(9, 2).unwrap();
        assert_eq!(f, 2.0 / (512.0 * 513.0));
        assert!((f / 7.616e-6 - 1.0).abs() < 1e-3);
        assert!(haar_frame_potential(3, 3).is_err());
    }

    #[test]
    fn trivial_frame_potentials() {
        let same = basis_sample(2, &[1, 1, 1]);
        let [f1, f2] = frame_potentials(&same).unwrap();
        assert!((f1.value - 1.0).abs() < 1e-15 && (f2.value - 1.0).abs() < 1e-15);
        assert_eq!(f1.pairs, 3);
        let orth = basis_sample(2, &[0, 1, 2, 3]);
        let [f1, f2] = frame_potentials(&orth).unwrap();
        assert_eq!((f1.value, f2.value), (0.0, 0.0));
        assert!(frame_potentials(&basis_sample(2, &[0])).is_err());
    }

    #[test]
    fn pair_sums_match_direct_loop() {
        let sample = haar_ensemble(3, 150, 8).unwrap();
        let mut vals = Vec::new();
        for k in 0..sample.len() {
            for l in k + 1..sample.len() {
                vals.push(fidelity(&sample.states()[k], &sample.states()[l]).unwrap());
            }
        }
        let mean1 = vals.iter().sum::<f64>() / vals.len() as f64;
        let mean2 = vals.iter().map(|f| f * f).sum::<f64>() / vals.len() as f64;
        let [f1, f2] = frame_potentials(&sample).unwrap();
        assert!((f1.value - mean1).abs() < 1e-13);
        assert!((f2.value - mean2).abs() < 1e-13);
        let var = vals.iter().map(|f| (f - mean1).powi(2)).sum::<f64>() / (vals.len() - 1) as f64;
        assert!((f1.naive_std_error - (var / vals.len() as f64).sqrt()).abs() < 1e-13);
        assert!(f1.std_error >= f1.naive_std_error);
    }

    #[test]
    fn haar_sample_matches_haar_value() {
        let sample = haar_ensemble(3, 10_000, 1).unwrap();
        let f2 = frame_potential(&sample, 2).unwrap();
        assert!((f2.value - 1.0 / 36.0).abs() < 3.0 * f2.std_error);
    }

    #[test]
    fn loss_variance_examples() {
        assert_eq!(
            haar_loss_variance(&DenseHermitian::identity(3).unwrap(), 3).unwrap(),
            0.0
        );
        for n in 2..6 {
            let v = haar_loss_variance(&zz(n), n).unwrap();
            assert!((v - 1.0 / ((1 << n) as f64 + 1.0)).abs() < 1e-15);
        }
        let z1 = "Z1".parse::<PauliString>().unwrap().to_operator(1).unwrap();
        assert!((haar_loss_variance(&z1, 1).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!(haar_loss_variance(&zz(3), 4).is_err());
    }

    #[test]
    fn bound_examples() {
        let n = 5;
        let o = zz(n);
        let h1 = haar_frame_potential(n, 1).unwrap();
        let h2 = haar_frame_potential(n, 2).unwrap();
        let vh = haar_loss_variance(&o, n).unwrap();
        assert_eq!(variance_bound(h1, h2, &o, n).unwrap(), vh);
        let b = variance_bound(h1, h2 + 1e-4, &o, n).unwrap();
        assert!((b - (1.0 / 33.0 + 0.01 * 32.0)).abs() < 1e-12);
        let e = empirical_bound(h1, h2 + 1e-4, &o, n, 0.7).unwrap();
        assert!((e - (1.0 / 33.0 + 0.01 * 32f64.powf(0.7))).abs() < 1e-12);
        assert!((32f64.powf(0.7) - 11.31).abs() < 0.01);
        assert_eq!(empirical_bound(h1, h2 + 1e-4, &o, n, 1.0).unwrap(), b);
        assert_eq!(empirical_bound(h1, h2, &o, n, 0.7).unwrap(), vh);
        // Traceless O: the F1 square-root term vanishes.
        let with_f1 = variance_bound(h1 + 0.01, h2 + 1e-3, &o, n).unwrap();
        assert!((with_f1 - (vh + (1e-3f64.sqrt() - 0.01) * 32.0)).abs() < 1e-12);
        // Unrealizable pairs: d1 is capped at d * d2.
        assert_eq!(variance_bound(h1 + 0.01, h2 - 1e-5, &o, n).unwrap(), vh);
        let capped = variance_bound(h1 + 0.01, h2 + 1e-4, &o, n).unwrap();
        assert!((capped - (vh + (0.01 - 32.0 * 1e-4) * 32.0)).abs() < 1e-12);
    }

    #[test]
    fn moment_examples() {
        let zeros = basis_sample(1, &[0, 0]);
        let norm = moment_deviation_norm(&zeros, 1, &HaarReference::Exact).unwrap();
        assert!((norm - 0.5f64.sqrt()).abs() < 1e-15);
        let big = basis_sample(7, &[0, 1]);
        assert!(matches!(
            moment_deviation(&big, 1, &HaarReference::Exact),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn moment_norm_equals_frame_potential_gap_on_same_sample() {
        let cfg =
            EnsembleConfig::for_phase(ModelConfig::nearest_neighbor(), Phase::Mbl, 3, 2, 300, 4);
        let sample = sample_ensemble(&cfg).unwrap();
        let fps = frame_potentials(&sample).unwrap();
        for t in [1u32, 2] {
            let dev = moment_deviation(&sample, t, &HaarReference::Exact).unwrap();
            let gap = fps[t as usize - 1].value - haar_frame_potential(3, t).unwrap();
            assert!((dev.norm_sq_unbiased.unwrap() - gap).abs() < 1e-10, "t={t}");
        }
    }

    #[test]
    fn exact_and_sampled_haar_references_agree() {
        let sample = haar_ensemble(2, 4000, 3).unwrap();
        for t in [1u32, 2] {
            let exact = moment_deviation_norm(&sample, t, &HaarReference::Exact).unwrap();
            assert!(exact < 0.05, "t={t} norm={exact}");
            let mc = HaarReference::MonteCarlo {
                samples: 4000,
                seed: 99,
            };
            let sampled = moment_deviation(&sample, t, &mc).unwrap();
            assert!(sampled.norm < 0.06);
            assert!(sampled.norm_sq_unbiased.unwrap().abs() < 1e-3);
        }
    }

    #[test]
    fn depth_zero_and_trivial_dynamics() {
        let model = ModelConfig::nearest_neighbor();
        let cfg = EnsembleConfig::for_phase(model, Phase::Thermalized, 4, 0, 5, 1);
        let sample = sample_ensemble(&cfg).unwrap();
        assert!(sample
            .states()
            .iter()
            .all(|s| s.amplitudes()[0] == C64::new(1.0, 0.0)));

        let frozen = ModelConfig { b: 0.0, ..model };
        let cfg = EnsembleConfig {
            disorder: DisorderSpec::new(0.0).unwrap(),
            ..EnsembleConfig::for_phase(frozen, Phase::Thermalized, 4, 6, 5, 1)
        };
        let [f1, f2] = frame_potentials(&sample_ensemble(&cfg).unwrap()).unwrap();
        assert!((f1.value - 1.0).abs() < 1e-12 && (f2.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn walker_prefixes_match_direct_sampling() {
        let cfg =
            EnsembleConfig::for_phase(ModelConfig::long_range(), Phase::Thermalized, 4, 5, 6, 2);
        let direct = sample_ensemble(&cfg).unwrap();
        let mut walker = EnsembleWalker::new(&cfg).unwrap();
        walker.advance_to(2).unwrap();
        walker.advance_to(5).unwrap();
        assert_eq!(walker.snapshot().unwrap(), direct);
        assert!(walker.advance_to(3).is_err());
    }

    #[test]
    fn thermal_ensemble_approaches_haar_first_moment() {
        let cfg = EnsembleConfig::for_phase(
            ModelConfig::nearest_neighbor(),
            Phase::Thermalized,
            5,
            20,
            400,
            3,
        );
        let f1 = frame_potential(&sample_ensemble(&cfg).unwrap(), 1).unwrap();
        assert!((f1.value - 1.0 / 32.0).abs() < 3.0 * f1.std_error, "{f1:?}");
    }
}
