use quenchscape_core::expressivity::{
    frame_potentials_of, haar_frame_potential, EnsembleConfig, EnsembleWalker,
};
use quenchscape_core::models::DisorderSpec;
use quenchscape_core::phase::{classify_phase, sample_level_statistics, ClassifierConfig};

use crate::config::{FramePotentialParams, LevelStatsParams};
use crate::output::Table;
use crate::CliError;

fn w_tag(w: f64) -> String {
    format!("histogram-w{w}")
}

pub fn level_stats(p: &LevelStatsParams, seed: u64) -> Result<Vec<Table>, CliError> {
    if p.w.is_empty() {
        return Err(CliError::Config("level-stats: W list is empty".into()));
    }
    for (i, &w) in p.w.iter().enumerate() {
        DisorderSpec::new(w).map_err(|e| CliError::Config(format!("level-stats: {e}")))?;
        if p.w[..i].iter().any(|&v| w_tag(v) == w_tag(w)) {
            return Err(CliError::Config(format!(
                "level-stats: W = {w} listed twice"
            )));
        }
    }
    let model = p.model.resolve();
    let classifier = ClassifierConfig {
        tau: p.tau,
        min_ratios: p.min_ratios,
    };
    let mut summary = Table::new(
        "summary",
        &[
            "w",
            "mean_r",
            "label",
            "tv_goe",
            "tv_poisson",
            "ratios",
            "degenerate",
        ],
    );
    let mut tables = Vec::new();
    for &w in &p.w {
        let stats = sample_level_statistics(
            &model,
            p.n,
            &DisorderSpec::new(w)?,
            p.realizations,
            seed,
            p.bins,
        )?;
        let label = classify_phase(&stats, &classifier)?;
        let mut hist = Table::new(
            w_tag(w),
            &["bin_center", "bin_low", "bin_high", "count", "density"],
        );
        let h = &stats.histogram;
        for (i, c) in h.centers().into_iter().enumerate() {
            hist.push(vec![
                c.into(),
                h.edges[i].into(),
                h.edges[i + 1].into(),
                h.counts[i].into(),
                h.densities[i].into(),
            ]);
        }
        tables.push(hist);
        summary.push(vec![
            w.into(),
            stats.mean_r.into(),
            label.label.to_string().into(),
            label.tv_goe.into(),
            label.tv_poisson.into(),
            stats.ratios.len().into(),
            stats.degenerate.into(),
        ]);
    }
    tables.push(summary);
    Ok(tables)
}

pub fn frame_potential(p: &FramePotentialParams, seed: u64) -> Result<Vec<Table>, CliError> {
    if p.samples < 2 {
        return Err(CliError::Config(format!(
            "frame-potential: need at least 2 samples, got {}",
            p.samples
        )));
    }
    if p.phases.is_empty() || p.n.is_empty() || p.m.is_empty() {
        return Err(CliError::Config(
            "frame-potential: phases, n and M lists must be non-empty".into(),
        ));
    }
    let mut m_list = p.m.clone();
    m_list.sort_unstable();
    m_list.dedup();
    let model = p.model.resolve();
    let mut table = Table::new(
        "frame-potential",
        &[
            "phase",
            "n",
            "m",
            "t",
            "estimate",
            "std_error",
            "naive_std_error",
            "haar",
            "difference",
        ],
    );
    for &phase in &p.phases {
        for &n in &p.n {
            let mut cfg = EnsembleConfig::for_phase(model, phase, n, 0, p.samples, seed);
            if let Some(w) = p.w {
                cfg.disorder = DisorderSpec::new(w)?;
            }
            cfg.initial = p.model.initial(p.initial);
            let haar = [haar_frame_potential(n, 1)?, haar_frame_potential(n, 2)?];
            let mut walker = EnsembleWalker::new(&cfg)?;
            for &m in &m_list {
                walker.advance_to(m)?;
                let rows: Vec<&[_]> = walker.amplitudes().iter().map(Vec::as_slice).collect();
                for (est, h) in frame_potentials_of(&rows)?.iter().zip(haar) {
                    table.push(vec![
                        phase.label().into(),
                        n.into(),
                        m.into(),
                        u64::from(est.order).into(),
                        est.value.into(),
                        est.std_error.into(),
                        est.naive_std_error.into(),
                        h.into(),
                        (est.value - h).into(),
                    ]);
                }
            }
        }
    }
    Ok(vec![table])
}
