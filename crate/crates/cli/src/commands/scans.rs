use quenchscape_core::landscape::{
    entanglement_scan, linear_fit, loss_variance_scan, saturation, RegimeReport, SaturationConfig,
    ScanGrid, ScanResult, StatKind,
};
use quenchscape_core::models::{DisorderSpec, Phase};

use crate::config::{RegimesParams, SaturationStatistic, ScanParams};
use crate::output::Table;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanKind {
    Variance,
    Entropy,
}

fn run_scan(grid: &ScanGrid, kind: ScanKind) -> quenchscape_core::Result<ScanResult> {
    match kind {
        ScanKind::Variance => loss_variance_scan(grid),
        ScanKind::Entropy => entanglement_scan(grid),
    }
}

fn scan_table(result: &ScanResult) -> Table {
    let mut t = Table::new(
        "scan",
        &["phase", "n", "m", "statistic", "value", "uncertainty"],
    );
    for r in &result.rows {
        t.push(vec![
            r.phase.label().into(),
            r.n.into(),
            r.m.into(),
            r.statistic.label().into(),
            r.value.into(),
            r.uncertainty.into(),
        ]);
    }
    t
}

fn phase_scans(p: &ScanParams, seed: u64, kind: ScanKind) -> quenchscape_core::Result<ScanResult> {
    let model = p.model.resolve();
    let mut all = ScanResult {
        seed,
        rows: Vec::new(),
    };
    for &phase in &p.phases {
        let mut grid = ScanGrid::new(model, phase, p.n.clone(), p.m.clone());
        if let Some(w) = p.w {
            grid.disorder = Some(DisorderSpec::new(w)?);
        }
        grid.realizations = p.realizations;
        grid.observable = p.observable.clone();
        grid.cut = p.cut;
        grid.initial = p.model.initial(p.initial);
        grid.seed = seed;
        all.extend(run_scan(&grid, kind)?);
    }
    Ok(all)
}

pub fn scan(p: &ScanParams, seed: u64, kind: ScanKind) -> Result<Vec<Table>, CliError> {
    if p.phases.is_empty() {
        return Err(CliError::Config("phase list is empty".into()));
    }
    Ok(vec![scan_table(&phase_scans(p, seed, kind)?)])
}

pub fn regimes(p: &RegimesParams, seed: u64) -> Result<Vec<Table>, CliError> {
    let (kind, stat) = match p.statistic {
        SaturationStatistic::Variance => (ScanKind::Variance, StatKind::LossVariance),
        SaturationStatistic::Entropy => (ScanKind::Entropy, StatKind::EntropyMean),
    };
    let scan_params = ScanParams {
        model: p.model,
        phases: vec![Phase::Thermalized, Phase::Mbl],
        w: None,
        n: p.n.clone(),
        m: p.m.clone(),
        realizations: p.realizations,
        observable: p.observable.clone(),
        cut: None,
        initial: p.initial,
    };
    let result = phase_scans(&scan_params, seed, kind)?;
    let cfg = SaturationConfig {
        delta: p.delta,
        z: p.z,
    };
    let mut sat = Table::new(
        "saturation",
        &["n", "phase", "m_sat", "plateau", "plateau_error"],
    );
    let mut report = Table::new(
        "report",
        &["n", "m_sat_thermal", "m_sat_mbl", "width", "ordered"],
    );
    let mut widths = Vec::new();
    for &n in &p.n {
        let mut m_sat = [0usize; 2];
        for (slot, phase) in [Phase::Thermalized, Phase::Mbl].into_iter().enumerate() {
            let s = saturation(&result.series(n, phase, stat), &cfg)?;
            sat.push(vec![
                n.into(),
                phase.label().into(),
                s.m_sat.into(),
                s.plateau.into(),
                s.plateau_error.into(),
            ]);
            m_sat[slot] = s.m_sat;
        }
        let r = RegimeReport::new(n, m_sat[0], m_sat[1]);
        report.push(vec![
            n.into(),
            r.m_sat_thermal.into(),
            r.m_sat_mbl.into(),
            r.width.into(),
            r.ordered.into(),
        ]);
        widths.push((n as f64, r.width as f64));
    }
    let mut tables = vec![scan_table(&result), sat, report];
    if widths.len() >= 3 {
        let (x, y): (Vec<f64>, Vec<f64>) = widths.into_iter().unzip();
        let fit = linear_fit(&x, &y, None)?;
        let mut t = Table::new(
            "width-fit",
            &["slope", "intercept", "r_squared", "slope_std_error"],
        );
        t.push(vec![
            fit.slope.into(),
            fit.intercept.into(),
            fit.r_squared.into(),
            fit.slope_std_error.into(),
        ]);
        tables.push(t);
    }
    Ok(tables)
}
