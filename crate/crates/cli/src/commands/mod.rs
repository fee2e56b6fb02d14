mod scans;
mod spectral;
mod training;

use crate::config::RunConfig;
use crate::output::Table;
use crate::{CliError, Command};

use scans::ScanKind;

pub(crate) fn compute(command: Command, cfg: &RunConfig) -> Result<Vec<Table>, CliError> {
    let seed = cfg.seed;
    match command {
        Command::LevelStats => spectral::level_stats(&cfg.level_stats, seed),
        Command::FramePotential => spectral::frame_potential(&cfg.frame_potential, seed),
        Command::BpScan => scans::scan(&cfg.bp_scan, seed, ScanKind::Variance),
        Command::EntropyScan => scans::scan(&cfg.entropy_scan, seed, ScanKind::Entropy),
        Command::Regimes => scans::regimes(&cfg.regimes, seed),
        Command::Vqe => training::vqe(&cfg.vqe, seed),
        Command::Maxcut => training::maxcut(&cfg.maxcut, seed),
    }
}
