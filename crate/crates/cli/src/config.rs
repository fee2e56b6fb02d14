//! Run configuration as read from TOML.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use quenchscape_core::models::{InitialState, ModelConfig, ModelKind, Phase};
use quenchscape_core::quantum::PauliString;
use quenchscape_core::variational::{
    default_initial, MaxCutConfig, MaxCutInstance, OptimizerConfig, VqeConfig,
};

use crate::{CliError, Command};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfig {
    pub seed: u64,
    /// Worker threads; all available cores when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    pub out: PathBuf,
    pub format: Format,
    pub level_stats: LevelStatsParams,
    pub frame_potential: FramePotentialParams,
    pub bp_scan: ScanParams,
    pub entropy_scan: ScanParams,
    pub regimes: RegimesParams,
    pub vqe: VqeParams,
    pub maxcut: MaxcutParams,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            workers: None,
            out: PathBuf::from("out"),
            format: Format::Csv,
            level_stats: LevelStatsParams::default(),
            frame_potential: FramePotentialParams::default(),
            bp_scan: ScanParams::default(),
            entropy_scan: ScanParams::default(),
            regimes: RegimesParams::default(),
            vqe: VqeParams::default(),
            maxcut: MaxcutParams::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))
    }

    /// SHA-256 over the seed and the parameter block of `command`, serialized
    /// as JSON with sorted keys. Workers, output location and format are
    /// excluded.
    pub fn hash(&self, command: Command) -> Result<String, CliError> {
        let block = match command {
            Command::LevelStats => serde_json::to_value(&self.level_stats)?,
            Command::FramePotential => serde_json::to_value(&self.frame_potential)?,
            Command::BpScan => serde_json::to_value(&self.bp_scan)?,
            Command::EntropyScan => serde_json::to_value(&self.entropy_scan)?,
            Command::Regimes => serde_json::to_value(&self.regimes)?,
            Command::Vqe => serde_json::to_value(&self.vqe)?,
            Command::Maxcut => serde_json::to_value(&self.maxcut)?,
        };
        let canonical = serde_json::json!({
            "subcommand": command.name(),
            "seed": self.seed,
            "params": block,
        });
        let digest = Sha256::digest(serde_json::to_string(&canonical)?.as_bytes());
        Ok(hex(&digest))
    }
}

pub(crate) fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Model kind with optional overrides of its default couplings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelBlock {
    pub kind: ModelKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
}

impl Default for ModelBlock {
    fn default() -> Self {
        Self::of(ModelKind::NearestNeighbor)
    }
}

impl ModelBlock {
    pub fn of(kind: ModelKind) -> Self {
        Self {
            kind,
            j: None,
            b: None,
            alpha: None,
        }
    }

    pub fn resolve(&self) -> ModelConfig {
        let base = ModelConfig::default_for(self.kind);
        ModelConfig {
            kind: self.kind,
            j: self.j.unwrap_or(base.j),
            b: self.b.unwrap_or(base.b),
            alpha: self.alpha.unwrap_or(base.alpha),
        }
    }

    pub fn initial(&self, explicit: Option<InitialState>) -> InitialState {
        explicit.unwrap_or_else(|| default_initial(self.kind))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LevelStatsParams {
    pub model: ModelBlock,
    pub n: usize,
    /// Disorder strengths, in the same units as `J`.
    pub w: Vec<f64>,
    pub realizations: usize,
    pub bins: usize,
    pub tau: f64,
    pub min_ratios: usize,
}

impl Default for LevelStatsParams {
    fn default() -> Self {
        Self {
            model: ModelBlock::default(),
            n: 9,
            w: vec![0.0, 3.0, 5.0, 7.0, 20.0, 50.0],
            realizations: 500,
            bins: 50,
            tau: 0.08,
            min_ratios: 500,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FramePotentialParams {
    pub model: ModelBlock,
    pub phases: Vec<Phase>,
    /// Overrides the phases' default disorder strength.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<f64>,
    pub n: Vec<usize>,
    pub m: Vec<usize>,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialState>,
}

impl Default for FramePotentialParams {
    fn default() -> Self {
        Self {
            model: ModelBlock::default(),
            phases: vec![Phase::Thermalized, Phase::Mbl],
            w: None,
            n: vec![5],
            m: vec![0, 1, 2, 4, 6, 8, 12, 16, 24, 32],
            samples: 1000,
            initial: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanParams {
    pub model: ModelBlock,
    pub phases: Vec<Phase>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<f64>,
    pub n: Vec<usize>,
    pub m: Vec<usize>,
    pub realizations: usize,
    pub observable: PauliString,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cut: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialState>,
}

impl Default for ScanParams {
    fn default() -> Self {
        Self {
            model: ModelBlock::default(),
            phases: vec![Phase::Thermalized, Phase::Mbl],
            w: None,
            n: vec![5, 6, 7],
            m: (0..=60).collect(),
            realizations: 400,
            observable: "Z1Z2".parse().expect("static Pauli string"),
            cut: None,
            initial: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SaturationStatistic {
    #[default]
    Variance,
    Entropy,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RegimesParams {
    pub model: ModelBlock,
    pub n: Vec<usize>,
    pub m: Vec<usize>,
    pub realizations: usize,
    pub observable: PauliString,
    pub statistic: SaturationStatistic,
    pub delta: f64,
    /// Noise allowance in standard errors; family-wise default when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialState>,
}

impl Default for RegimesParams {
    fn default() -> Self {
        Self {
            model: ModelBlock::default(),
            n: vec![6, 7, 8],
            m: (0..=100).collect(),
            realizations: 400,
            observable: "Z1Z2".parse().expect("static Pauli string"),
            statistic: SaturationStatistic::Variance,
            delta: 0.1,
            z: None,
            initial: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VqeParams {
    pub n: usize,
    pub depth: usize,
    pub instances: usize,
    pub ansatz: ModelBlock,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialState>,
    pub init_phase: Phase,
    pub target: ModelBlock,
    pub target_phase: Phase,
    pub optimizer: OptimizerConfig,
}

impl Default for VqeParams {
    fn default() -> Self {
        let base = VqeConfig::default();
        Self {
            n: base.n,
            depth: base.depth,
            instances: base.instances,
            ansatz: ModelBlock::of(base.ansatz.kind),
            initial: None,
            init_phase: base.init_phase,
            target: ModelBlock::of(base.target.kind),
            target_phase: base.target_phase,
            optimizer: base.optimizer,
        }
    }
}

impl VqeParams {
    pub fn resolve(&self, seed: u64) -> VqeConfig {
        VqeConfig {
            n: self.n,
            depth: self.depth,
            instances: self.instances,
            ansatz: self.ansatz.resolve(),
            ansatz_initial: self.ansatz.initial(self.initial),
            init_phase: self.init_phase,
            target: self.target.resolve(),
            target_phase: self.target_phase,
            optimizer: self.optimizer,
            seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MaxcutParams {
    pub adjacency: MaxCutInstance,
    pub depth: usize,
    pub realizations: usize,
    pub ansatz: ModelBlock,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialState>,
    pub init_phase: Phase,
    pub threshold: f64,
    pub optimizer: OptimizerConfig,
}

impl Default for MaxcutParams {
    fn default() -> Self {
        let base = MaxCutConfig::default();
        Self {
            adjacency: base.instance,
            depth: base.depth,
            realizations: base.realizations,
            ansatz: ModelBlock::of(base.ansatz.kind),
            initial: None,
            init_phase: base.init_phase,
            threshold: base.threshold,
            optimizer: base.optimizer,
        }
    }
}

impl MaxcutParams {
    pub fn resolve(&self, seed: u64) -> MaxCutConfig {
        MaxCutConfig {
            instance: self.adjacency.clone(),
            depth: self.depth,
            realizations: self.realizations,
            ansatz: self.ansatz.resolve(),
            ansatz_initial: self.ansatz.initial(self.initial),
            init_phase: self.init_phase,
            threshold: self.threshold,
            optimizer: self.optimizer,
            seed,
        }
    }
}
