use quenchscape_core::variational::{maxcut_benchmark, vqe_benchmark};

use crate::config::{MaxcutParams, VqeParams};
use crate::output::Table;
use crate::CliError;

fn trajectory_table<'a>(runs: impl Iterator<Item = (usize, &'a [f64])>) -> Table {
    let mut t = Table::new("trajectory", &["run", "epoch", "loss"]);
    for (id, losses) in runs {
        for (epoch, &l) in losses.iter().enumerate() {
            t.push(vec![id.into(), epoch.into(), l.into()]);
        }
    }
    t
}

pub fn vqe(p: &VqeParams, seed: u64) -> Result<Vec<Table>, CliError> {
    let report = vqe_benchmark(&p.resolve(seed))?;
    let traj = trajectory_table(report.instances.iter().map(|i| (i.id, i.losses.as_slice())));
    let mut inst = Table::new(
        "instances",
        &["run", "exact_energy", "best_energy", "relative_error"],
    );
    for i in &report.instances {
        inst.push(vec![
            i.id.into(),
            i.exact_energy.into(),
            i.best_energy.into(),
            i.relative_error.into(),
        ]);
    }
    let mut summary = Table::new(
        "summary",
        &[
            "instances",
            "depth",
            "mean_relative_error",
            "sd_relative_error",
        ],
    );
    summary.push(vec![
        report.instances.len().into(),
        p.depth.into(),
        report.mean_relative_error.into(),
        report.sd_relative_error.into(),
    ]);
    Ok(vec![traj, inst, summary])
}

pub fn maxcut(p: &MaxcutParams, seed: u64) -> Result<Vec<Table>, CliError> {
    let cfg = p.resolve(seed);
    let report = maxcut_benchmark(&cfg)?;
    let mut optimum = Table::new("optimum", &["bitstring", "cut", "energy"]);
    for b in &report.optimum.optima {
        optimum.push(vec![
            b.as_str().into(),
            report.optimum.max_cut.into(),
            report.optimum.ground_energy.into(),
        ]);
    }
    let traj = trajectory_table(report.runs.iter().map(|r| (r.id, r.losses.as_slice())));
    let mut runs = Table::new(
        "runs",
        &[
            "run",
            "final_energy",
            "ratio",
            "empty_selection",
            "selected",
        ],
    );
    for r in &report.runs {
        let selected: Vec<String> = r
            .ratio
            .selected
            .iter()
            .map(|s| format!("{}:{:.11e}", s.bitstring, s.probability))
            .collect();
        runs.push(vec![
            r.id.into(),
            r.final_energy.into(),
            r.ratio.ratio.into(),
            r.ratio.empty_selection.into(),
            selected.join(" ").into(),
        ]);
    }
    let mut summary = Table::new(
        "summary",
        &[
            "realizations",
            "max_cut",
            "ground_energy",
            "mean_ratio",
            "sd_ratio",
        ],
    );
    summary.push(vec![
        report.runs.len().into(),
        report.optimum.max_cut.into(),
        report.optimum.ground_energy.into(),
        report.mean_ratio.into(),
        report.sd_ratio.into(),
    ]);
    Ok(vec![optimum, traj, runs, summary])
}
