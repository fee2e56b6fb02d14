//! Level-spacing ratio statistics and phase classification.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{validation, Result};
use crate::models::{sample_disorder, DisorderSpec, ModelConfig, QuenchKernel};
use crate::quantum::eigenvalues;
use crate::seed::task_rng;

/// Mean of `r` under the Poisson law, `2 ln 2 - 1`.
pub const POISSON_MEAN_R: f64 = 0.386_294_361_119_890_6;
/// Mean of `r` under the GOE surmise, `4 - 2 sqrt 3`.
pub const GOE_MEAN_R: f64 = 0.535_898_384_862_245_4;

/// Spacings below this count as exact degeneracies.
pub const DEGENERACY_TOL: f64 = 1e-12;

pub fn spacing_ratios(energies: &[f64]) -> Result<Vec<f64>> {
    Ok(spacing_ratios_counted(energies)?.0)
}

/// Ratios plus the number of degenerate (`r = 0` by convention) entries.
pub fn spacing_ratios_counted(energies: &[f64]) -> Result<(Vec<f64>, usize)> {
    if energies.len() < 3 {
        return Err(validation("need at least three levels"));
    }
    if energies.iter().any(|e| !e.is_finite()) {
        return Err(validation("levels must be finite"));
    }
    if energies.windows(2).any(|w| w[1] < w[0]) {
        return Err(validation("levels must be sorted ascending"));
    }
    let gaps: Vec<f64> = energies.windows(2).map(|w| w[1] - w[0]).collect();
    let mut degenerate = 0;
    let ratios = gaps
        .windows(2)
        .map(|g| {
            let (lo, hi) = if g[0] < g[1] {
                (g[0], g[1])
            } else {
                (g[1], g[0])
            };
            if hi < DEGENERACY_TOL {
                degenerate += 1;
                0.0
            } else {
                lo / hi
            }
        })
        .collect();
    Ok((ratios, degenerate))
}

fn check_unit(r: f64) -> Result<()> {
    if (0.0..=1.0).contains(&r) {
        Ok(())
    } else {
        Err(validation(format!("ratio {r} outside [0, 1]")))
    }
}

pub fn goe_pdf(r: f64) -> Result<f64> {
    check_unit(r)?;
    Ok(goe_density(r))
}

pub fn poisson_pdf(r: f64) -> Result<f64> {
    check_unit(r)?;
    Ok(2.0 / (1.0 + r).powi(2))
}

fn goe_density(r: f64) -> f64 {
    6.75 * (r + r * r) / (1.0 + r + r * r).powf(2.5)
}

fn poisson_cdf(r: f64) -> f64 {
    2.0 * r / (1.0 + r)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let nf = order as f64;
    for i in 0..order.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=order {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (x, w) = gauss_legendre(20);
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    x.iter()
        .zip(&w)
        .map(|(xi, wi)| wi * f(mid + half * xi))
        .sum::<f64>()
        * half
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Reference {
    Goe,
    Poisson,
}

impl Reference {
    /// Probability mass of `[a, b]`.
    pub fn mass(self, a: f64, b: f64) -> f64 {
        match self {
            Reference::Goe => integrate(goe_density, a, b),
            Reference::Poisson => poisson_cdf(b) - poisson_cdf(a),
        }
    }

    pub fn mean_r(self) -> f64 {
        match self {
            Reference::Goe => GOE_MEAN_R,
            Reference::Poisson => POISSON_MEAN_R,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub densities: Vec<f64>,
}

impl Histogram {
    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|e| 0.5 * (e[0] + e[1])).collect()
    }

    pub fn total_variation(&self, reference: Reference) -> f64 {
        let total: u64 = self.counts.iter().sum();
        0.5 * self
            .edges
            .windows(2)
            .zip(&self.counts)
            .map(|(e, &c)| (c as f64 / total as f64 - reference.mass(e[0], e[1])).abs())
            .sum::<f64>()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelStatistics {
    pub ratios: Vec<f64>,
    pub mean_r: f64,
    pub histogram: Histogram,
    pub degenerate: usize,
}

impl LevelStatistics {
    pub fn from_ratios(ratios: Vec<f64>, degenerate: usize, bins: usize) -> Result<Self> {
        if ratios.is_empty() {
            return Err(validation("no ratios to summarize"));
        }
        if bins == 0 {
            return Err(validation("histogram needs at least one bin"));
        }
        for &r in &ratios {
            check_unit(r)?;
        }
        let mean_r = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let width = 1.0 / bins as f64;
        let edges: Vec<f64> = (0..=bins).map(|i| i as f64 * width).collect();
        let mut counts = vec![0u64; bins];
        for &r in &ratios {
            counts[((r * bins as f64) as usize).min(bins - 1)] += 1;
        }
        let total = ratios.len() as f64;
        let densities = counts.iter().map(|&c| c as f64 / (total * width)).collect();
        Ok(Self {
            ratios,
            mean_r,
            histogram: Histogram {
                edges,
                counts,
                densities,
            },
            degenerate,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhaseKind {
    Thermalized,
    #[serde(rename = "MBL")]
    Mbl,
    Indeterminate,
}

impl std::fmt::Display for PhaseKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PhaseKind::Thermalized => "Thermalized",
            PhaseKind::Mbl => "MBL",
            PhaseKind::Indeterminate => "Indeterminate",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseLabel {
    pub label: PhaseKind,
    pub mean_r: f64,
    pub tv_goe: f64,
    pub tv_poisson: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifierConfig {
    pub tau: f64,
    pub min_ratios: usize,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self {
            tau: 0.08,
            min_ratios: 500,
        }
    }
}

pub fn classify_phase(stats: &LevelStatistics, cfg: &ClassifierConfig) -> Result<PhaseLabel> {
    if stats.ratios.len() < cfg.min_ratios {
        return Err(validation(format!(
            "need at least {} ratios, got {}",
            cfg.min_ratios,
            stats.ratios.len()
        )));
    }
    let tv_goe = stats.histogram.total_variation(Reference::Goe);
    let tv_poisson = stats.histogram.total_variation(Reference::Poisson);
    let d_goe = (stats.mean_r - GOE_MEAN_R).abs();
    let d_poisson = (stats.mean_r - POISSON_MEAN_R).abs();
    let label = if d_goe < d_poisson && tv_goe < cfg.tau {
        PhaseKind::Thermalized
    } else if d_poisson < d_goe && tv_poisson < cfg.tau {
        PhaseKind::Mbl
    } else {
        PhaseKind::Indeterminate
    };
    Ok(PhaseLabel {
        label,
        mean_r: stats.mean_r,
        tv_goe,
        tv_poisson,
    })
}

/// Pools spacing ratios of `realizations` disordered Hamiltonians
/// (default transverse field of `model`, disorder `w`).
///
/// Realizations run on the current rayon pool and are combined in index
/// order.
pub fn sample_level_statistics(
    model: &ModelConfig,
    n: usize,
    disorder: &DisorderSpec,
    realizations: usize,
    master: u64,
    bins: usize,
) -> Result<LevelStatistics> {
    if realizations == 0 {
        return Err(validation("need at least one realization"));
    }
    let kernel = QuenchKernel::new(*model, n)?;
    let label = format!("level-stats/{}/{:e}", model.kind, disorder.w());
    let per: Vec<Result<(Vec<f64>, usize)>> = (0..realizations)
        .into_par_iter()
        .map(|r| {
            let mut rng = task_rng(master, &label, &[n as u64, r as u64]);
            let h = sample_disorder(disorder, n, &mut rng);
            let op = kernel.operator(&h, model.b)?;
            spacing_ratios_counted(&eigenvalues(&op.to_dense())?)
        })
        .collect();
    let mut ratios = Vec::new();
    let mut degenerate = 0;
    for item in per {
        let (r, d) = item?;
        ratios.extend(r);
        degenerate += d;
    }
    LevelStatistics::from_ratios(ratios, degenerate, bins)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn ratio_examples() {
        assert_eq!(spacing_ratios(&[0.0, 1.0, 3.0]).unwrap(), vec![0.5]);
        assert_eq!(
            spacing_ratios(&[0.0, 1.0, 2.0, 3.0]).unwrap(),
            vec![1.0, 1.0]
        );
        assert_eq!(
            spacing_ratios(&[0.0, 2.0, 3.0, 7.0]).unwrap(),
            vec![0.5, 0.25]
        );
        assert!(spacing_ratios(&[0.0, 2.0, 1.0]).is_err());
        assert!(spacing_ratios(&[0.0, 2.0]).is_err());
    }

    #[test]
    fn degenerate_levels_give_zero() {
        let (r, d) = spacing_ratios_counted(&[0.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(r, vec![0.0, 0.0]);
        assert_eq!(d, 1);
    }

    #[test]
    fn pdf_examples() {
        assert_eq!(poisson_pdf(0.0).unwrap(), 2.0);
        assert_eq!(goe_pdf(0.0).unwrap(), 0.0);
        assert_eq!(poisson_pdf(1.0).unwrap(), 0.5);
        assert!(goe_pdf(1.1).is_err());
        assert!(poisson_pdf(-0.1).is_err());
    }

    #[test]
    fn reference_normalization_and_means() {
        // Composite Simpson on 20000 panels, independent of the quadrature above.
        let simpson = |f: &dyn Fn(f64) -> f64| {
            let n = 20_000;
            let h = 1.0 / n as f64;
            (0..=n)
                .map(|i| {
                    let w = if i == 0 || i == n {
                        1.0
                    } else if i % 2 == 1 {
                        4.0
                    } else {
                        2.0
                    };
                    w * f(i as f64 * h)
                })
                .sum::<f64>()
                * h
                / 3.0
        };
        let goe = |r: f64| goe_pdf(r).unwrap();
        let poi = |r: f64| poisson_pdf(r).unwrap();
        assert!((simpson(&goe) - 1.0).abs() < 1e-8);
        assert!((simpson(&poi) - 1.0).abs() < 1e-8);
        assert!((simpson(&|r| r * goe(r)) - (4.0 - 2.0 * 3f64.sqrt())).abs() < 1e-6);
        assert!((simpson(&|r| r * poi(r)) - (2.0 * 2f64.ln() - 1.0)).abs() < 1e-6);
        assert!((GOE_MEAN_R - (4.0 - 2.0 * 3f64.sqrt())).abs() < 1e-15);
        assert!((POISSON_MEAN_R - (2.0 * 2f64.ln() - 1.0)).abs() < 1e-15);
        assert!((Reference::Goe.mass(0.0, 1.0) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn quadrature_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre(5);
        let int = |p: i32| x.iter().zip(&w).map(|(a, b)| b * a.powi(p)).sum::<f64>();
        assert!((int(0) - 2.0).abs() < 1e-14);
        assert!((int(8) - 2.0 / 9.0).abs() < 1e-14);
        assert!(int(7).abs() < 1e-14);
    }

    fn sample_goe(rng: &mut impl Rng) -> f64 {
        // Inverse CDF by bisection on the quadrature CDF.
        let u: f64 = rng.random();
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..45 {
            let mid = 0.5 * (lo + hi);
            if Reference::Goe.mass(0.0, mid) < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn direct_draws_classify_correctly() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let goe: Vec<f64> = (0..100_000).map(|_| sample_goe(&mut rng)).collect();
        let stats = LevelStatistics::from_ratios(goe, 0, 25).unwrap();
        let label = classify_phase(&stats, &ClassifierConfig::default()).unwrap();
        assert_eq!(label.label, PhaseKind::Thermalized);

        // Poisson r has CDF 2r/(1+r), inverse u/(2-u).
        let poi: Vec<f64> = (0..100_000)
            .map(|_| {
                let u: f64 = rng.random();
                u / (2.0 - u)
            })
            .collect();
        let stats = LevelStatistics::from_ratios(poi, 0, 25).unwrap();
        let label = classify_phase(&stats, &ClassifierConfig::default()).unwrap();
        assert_eq!(label.label, PhaseKind::Mbl);
    }

    #[test]
    fn histogram_integrates_to_one() {
        let stats = LevelStatistics::from_ratios(vec![0.0, 0.3, 0.99, 1.0, 0.5], 1, 25).unwrap();
        let width = 1.0 / 25.0;
        let total: f64 = stats.histogram.densities.iter().map(|d| d * width).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(classify_phase(&stats, &ClassifierConfig::default()).is_err());
    }

    #[test]
    fn small_chain_statistics_are_reproducible() {
        let model = ModelConfig::nearest_neighbor();
        let w = model.phase_disorder(crate::models::Phase::Mbl);
        let a = sample_level_statistics(&model, 6, &w, 20, 5, 25).unwrap();
        let b = sample_level_statistics(&model, 6, &w, 20, 5, 25).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.ratios.len(), 20 * 62);
    }
}
