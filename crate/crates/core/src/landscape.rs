//! Loss-variance and entanglement scans over quench depth, saturation
//! onsets and the trainability regimes they imply.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{validation, Error, Result};
use crate::expressivity::{
    empirical_bound, frame_potentials_of, haar_loss_variance, variance_bound, EnsembleConfig,
    EnsembleWalker,
};
use crate::models::{DisorderSpec, InitialState, ModelConfig, Phase};
use crate::quantum::{bipartite_entropy, inner_product, DenseHermitian, PauliString, StateVector};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub model: ModelConfig,
    pub phase: Phase,
    /// Overrides the phase's default disorder strength.
    pub disorder: Option<DisorderSpec>,
    pub n_list: Vec<usize>,
    pub m_list: Vec<usize>,
    pub realizations: usize,
    pub observable: PauliString,
    /// Size of the leading block for entropies; `floor(n/2)` when absent.
    pub cut: Option<usize>,
    pub initial: InitialState,
    pub seed: u64,
}

impl ScanGrid {
    pub fn new(model: ModelConfig, phase: Phase, n_list: Vec<usize>, m_list: Vec<usize>) -> Self {
        Self {
            model,
            phase,
            disorder: None,
            n_list,
            m_list,
            realizations: 400,
            observable: "Z1Z2".parse().expect("static Pauli string"),
            cut: None,
            initial: InitialState::AllZero,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.realizations < 2 {
            return Err(validation("need at least two realizations"));
        }
        if self.n_list.is_empty() || self.m_list.is_empty() {
            return Err(validation("n and M lists must be non-empty"));
        }
        if self.m_list.windows(2).any(|w| w[1] <= w[0]) {
            return Err(validation("M list must be strictly increasing"));
        }
        for &n in &self.n_list {
            self.model.validate(n)?;
            if self.observable.max_qubit() > n {
                return Err(validation(format!(
                    "observable {} does not fit in {n} qubits",
                    self.observable
                )));
            }
            let cut = self.cut_for(n);
            if cut == 0 || cut >= n {
                return Err(validation(format!("cut {cut} invalid for n = {n}")));
            }
        }
        Ok(())
    }

    pub fn disorder(&self) -> DisorderSpec {
        self.disorder
            .unwrap_or_else(|| self.model.phase_disorder(self.phase))
    }

    pub fn cut_for(&self, n: usize) -> usize {
        self.cut.unwrap_or(n / 2)
    }

    fn ensemble(&self, n: usize) -> EnsembleConfig {
        EnsembleConfig {
            disorder: self.disorder(),
            initial: self.initial,
            ..EnsembleConfig::for_phase(self.model, self.phase, n, 0, self.realizations, self.seed)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StatKind {
    LossVariance,
    LossMean,
    EntropyMean,
    F1,
    F2,
    Bound,
    EmpiricalBound,
    /// Haar value of the scanned quantity (variance or Page entropy).
    HaarReference,
}

impl StatKind {
    pub fn label(self) -> &'static str {
        match self {
            StatKind::LossVariance => "loss-variance",
            StatKind::LossMean => "loss-mean",
            StatKind::EntropyMean => "entropy-mean",
            StatKind::F1 => "F1",
            StatKind::F2 => "F2",
            StatKind::Bound => "bound",
            StatKind::EmpiricalBound => "empirical-bound",
            StatKind::HaarReference => "haar-reference",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub n: usize,
    pub m: usize,
    pub phase: Phase,
    pub statistic: StatKind,
    pub value: f64,
    pub uncertainty: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub seed: u64,
    pub rows: Vec<ScanRow>,
}

impl ScanResult {
    /// `(M, value, uncertainty)` for one `(n, phase, statistic)`.
    pub fn series(&self, n: usize, phase: Phase, statistic: StatKind) -> Vec<(usize, f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.n == n && r.phase == phase && r.statistic == statistic)
            .map(|r| (r.m, r.value, r.uncertainty))
            .collect()
    }

    pub fn get(&self, n: usize, m: usize, phase: Phase, statistic: StatKind) -> Option<&ScanRow> {
        self.rows
            .iter()
            .find(|r| r.n == n && r.m == m && r.phase == phase && r.statistic == statistic)
    }

    pub fn extend(&mut self, other: ScanResult) {
        self.rows.extend(other.rows);
    }
}

/// Which statistics a scan computes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanStats {
    pub loss: bool,
    pub frame: bool,
    pub entropy: bool,
}

impl ScanStats {
    pub const ALL: ScanStats = ScanStats {
        loss: true,
        frame: true,
        entropy: true,
    };
}

/// Mean, its standard error, unbiased variance and the standard error of
/// that variance.
fn moments(values: &[f64]) -> (f64, f64, f64, f64) {
    let r = values.len() as f64;
    let mean = values.iter().sum::<f64>() / r;
    let m2 = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / r;
    let m4 = values.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / r;
    let var = m2 * r / (r - 1.0);
    let var_se = ((m4 - m2 * m2 * (r - 3.0) / (r - 1.0)) / r).max(0.0).sqrt();
    (mean, (var / r).sqrt(), var, var_se)
}

fn loss_of(amps: &[num_complex::Complex64], op: &DenseHermitian, diag: Option<&[f64]>) -> f64 {
    match diag {
        Some(d) => amps.iter().zip(d).map(|(a, o)| a.norm_sqr() * o).sum(),
        None => {
            let applied = op.apply(amps).expect("dimensions checked");
            inner_product(amps, &applied).re
        }
    }
}

/// Bound and its spread over the `3 sigma` box of `(F1, F2)`, reported as a
/// one-sigma equivalent.
fn bound_with_spread(
    f: impl Fn(f64, f64) -> Result<f64>,
    f1: (f64, f64),
    f2: (f64, f64),
) -> Result<(f64, f64)> {
    let nominal = f(f1.0, f2.0)?;
    let mut worst = nominal;
    for s1 in [-3.0, 3.0] {
        for s2 in [-3.0, 3.0] {
            worst = worst.max(f(f1.0 + s1 * f1.1, f2.0 + s2 * f2.1)?);
        }
    }
    Ok((nominal, (worst - nominal) / 3.0))
}

/// Runs the requested statistics over every `(n, M)` of the grid.
pub fn landscape_scan(grid: &ScanGrid, stats: ScanStats) -> Result<ScanResult> {
    grid.validate()?;
    let phase = grid.phase;
    let mut rows = Vec::new();
    for &n in &grid.n_list {
        let op = grid.observable.to_operator(n)?;
        let diag = op.is_diagonal().then(|| op.diagonal());
        let cut = grid.cut_for(n);
        let mut walker = EnsembleWalker::new(&grid.ensemble(n))?;
        let mut push = |m: usize, statistic: StatKind, value: f64, uncertainty: f64| {
            rows.push(ScanRow {
                n,
                m,
                phase,
                statistic,
                value,
                uncertainty,
            })
        };
        for &m in &grid.m_list {
            walker.advance_to(m)?;
            let states = walker.amplitudes();
            if stats.loss {
                let losses: Vec<f64> = states
                    .par_iter()
                    .map(|a| loss_of(a, &op, diag.as_deref()))
                    .collect();
                let (mean, mean_se, var, var_se) = moments(&losses);
                push(m, StatKind::LossMean, mean, mean_se);
                push(m, StatKind::LossVariance, var, var_se);
                push(m, StatKind::HaarReference, haar_loss_variance(&op, n)?, 0.0);
            }
            if stats.frame {
                let refs: Vec<&[_]> = states.iter().map(|a| a.as_slice()).collect();
                let [f1, f2] = frame_potentials_of(&refs)?;
                push(m, StatKind::F1, f1.value, f1.std_error);
                push(m, StatKind::F2, f2.value, f2.std_error);
                let p1 = (f1.value, f1.std_error);
                let p2 = (f2.value, f2.std_error);
                let (b, bu) = bound_with_spread(|a, b| variance_bound(a, b, &op, n), p1, p2)?;
                push(m, StatKind::Bound, b, bu);
                let (e, eu) = bound_with_spread(|a, b| empirical_bound(a, b, &op, n, 0.7), p1, p2)?;
                push(m, StatKind::EmpiricalBound, e, eu);
            }
            if stats.entropy {
                let entropies = states
                    .par_iter()
                    .map(|a| bipartite_entropy(&StateVector::new(n, a.clone())?, cut))
                    .collect::<Result<Vec<f64>>>()?;
                let (mean, mean_se, _, _) = moments(&entropies);
                push(m, StatKind::EntropyMean, mean, mean_se);
                if !stats.loss {
                    let page = page_entropy(1 << cut, 1 << (n - cut))?;
                    push(m, StatKind::HaarReference, page, 0.0);
                }
            }
        }
    }
    Ok(ScanResult {
        seed: grid.seed,
        rows,
    })
}

pub fn loss_variance_scan(grid: &ScanGrid) -> Result<ScanResult> {
    landscape_scan(
        grid,
        ScanStats {
            loss: true,
            frame: true,
            entropy: false,
        },
    )
}

pub fn entanglement_scan(grid: &ScanGrid) -> Result<ScanResult> {
    landscape_scan(
        grid,
        ScanStats {
            loss: false,
            frame: false,
            entropy: true,
        },
    )
}

/// Average entanglement entropy of a Haar-random state, `ln dA - dA/(2 dB)`
/// with `dA <= dB`, and exactly 0 for a one-dimensional factor.
pub fn page_entropy(da: usize, db: usize) -> Result<f64> {
    if da == 0 || db == 0 {
        return Err(validation("subsystem dimensions must be positive"));
    }
    let (a, b) = if da <= db { (da, db) } else { (db, da) };
    if a == 1 {
        return Ok(0.0);
    }
    Ok((a as f64).ln() - a as f64 / (2.0 * b as f64))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub slope_std_error: f64,
}

/// Least squares `y = a x + b`, weighted by `1/sigma^2` when all
/// `sigma > 0` are given.
pub fn linear_fit(x: &[f64], y: &[f64], sigma: Option<&[f64]>) -> Result<LinearFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(validation("a line fit needs at least two paired points"));
    }
    let w: Vec<f64> = match sigma {
        Some(s) if s.len() == x.len() && s.iter().all(|&v| v > 0.0) => {
            s.iter().map(|v| 1.0 / (v * v)).collect()
        }
        _ => vec![1.0; x.len()],
    };
    let weighted = sigma.is_some_and(|s| s.iter().all(|&v| v > 0.0));
    let sw: f64 = w.iter().sum();
    let xm = x.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() / sw;
    let ym = y.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() / sw;
    let sxx: f64 = x.iter().zip(&w).map(|(a, b)| b * (a - xm).powi(2)).sum();
    if sxx == 0.0 {
        return Err(validation("x values must not all coincide"));
    }
    let sxy: f64 = x
        .iter()
        .zip(y)
        .zip(&w)
        .map(|((a, c), b)| b * (a - xm) * (c - ym))
        .sum();
    let slope = sxy / sxx;
    let intercept = ym - slope * xm;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .zip(&w)
        .map(|((a, c), b)| b * (c - slope * a - intercept).powi(2))
        .sum();
    let ss_tot: f64 = y.iter().zip(&w).map(|(c, b)| b * (c - ym).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };
    let slope_std_error = if weighted {
        (1.0 / sxx).sqrt()
    } else if x.len() > 2 {
        (ss_res / (x.len() - 2) as f64 / sxx).sqrt()
    } else {
        0.0
    };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
        slope_std_error,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaturationConfig {
    /// Relative tolerance around the plateau.
    pub delta: f64,
    /// Allowed deviation in units of each point's uncertainty. `None` uses
    /// the two-sided normal quantile at family-wise level 0.05 over the
    /// series length.
    pub z: Option<f64>,
}

impl Default for SaturationConfig {
    fn default() -> Self {
        Self {
            delta: 0.1,
            z: None,
        }
    }
}

impl SaturationConfig {
    pub fn z_for(&self, len: usize) -> f64 {
        self.z.unwrap_or_else(|| {
            let alpha = 0.05 / len.max(1) as f64;
            Normal::standard().inverse_cdf(1.0 - 0.5 * alpha)
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Saturation {
    pub m_sat: usize,
    pub plateau: f64,
    pub plateau_error: f64,
}

/// First depth after which every point stays within
/// `delta |V_inf| + z sigma(M)` of the plateau `V_inf` (mean of the last
/// quartile). The tail must be flat within 3 standard errors of its slope.
pub fn saturation(series: &[(usize, f64, f64)], cfg: &SaturationConfig) -> Result<Saturation> {
    if series.len() < 2 {
        return Err(Error::ScanRangeTooShort("need at least two points".into()));
    }
    if series.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(validation("series must be strictly increasing in M"));
    }
    let z = cfg.z_for(series.len());
    if !(cfg.delta >= 0.0 && z >= 0.0) {
        return Err(validation("delta and z must be non-negative"));
    }
    let tail_len = series.len().div_ceil(4).max(2);
    let tail = &series[series.len() - tail_len..];
    let tx: Vec<f64> = tail.iter().map(|p| p.0 as f64).collect();
    let ty: Vec<f64> = tail.iter().map(|p| p.1).collect();
    let ts: Vec<f64> = tail.iter().map(|p| p.2).collect();
    let fit = linear_fit(&tx, &ty, Some(&ts))?;
    let scale = ty.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if fit.slope.abs() > 3.0 * fit.slope_std_error + 1e-12 * scale.max(1e-300) {
        return Err(Error::ScanRangeTooShort(format!(
            "tail slope {:.3e} exceeds 3 sigma ({:.3e})",
            fit.slope, fit.slope_std_error
        )));
    }
    let plateau = ty.iter().sum::<f64>() / ty.len() as f64;
    let plateau_error = (ts.iter().map(|s| s * s).sum::<f64>()).sqrt() / ts.len() as f64;
    let mut m_sat = series.last().expect("non-empty").0;
    for &(m, v, s) in series.iter().rev() {
        if (v - plateau).abs() <= cfg.delta * plateau.abs() + z * s {
            m_sat = m;
        } else {
            break;
        }
    }
    Ok(Saturation {
        m_sat,
        plateau,
        plateau_error,
    })
}

pub fn saturation_onset(series: &[(usize, f64, f64)], delta: f64) -> Result<usize> {
    Ok(saturation(
        series,
        &SaturationConfig {
            delta,
            ..SaturationConfig::default()
        },
    )?
    .m_sat)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    I,
    II,
    III,
}

pub fn regime_classify(m: usize, m_sat_thermal: usize, m_sat_mbl: usize) -> Regime {
    if m < m_sat_thermal {
        Regime::I
    } else if m < m_sat_mbl {
        Regime::II
    } else {
        Regime::III
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub n: usize,
    pub m_sat_thermal: usize,
    pub m_sat_mbl: usize,
    /// `m_sat_mbl - m_sat_thermal`; negative when the ordering fails.
    pub width: i64,
    pub ordered: bool,
}

impl RegimeReport {
    pub fn new(n: usize, m_sat_thermal: usize, m_sat_mbl: usize) -> Self {
        Self {
            n,
            m_sat_thermal,
            m_sat_mbl,
            width: m_sat_mbl as i64 - m_sat_thermal as i64,
            ordered: m_sat_mbl >= m_sat_thermal,
        }
    }

    pub fn regime(&self, m: usize) -> Regime {
        regime_classify(m, self.m_sat_thermal, self.m_sat_mbl)
    }
}
