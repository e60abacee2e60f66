//! TOML run configuration.
//!
//! Every section except `[cable]` is optional; unknown keys are rejected.

use std::fs;
use std::path::{Path, PathBuf};

use cableway::spectra::SweepParameter;
use cableway::{
    CableSpec, FactorMode, FrequencyFormula, LoadSpec, MotionMode, MotionSpec, ProblemInstance,
    RootSearchConfig, TimeWindow,
};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

impl ConfigError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        ConfigError::Invalid(msg.into())
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub cable: Option<CableSection>,
    #[serde(default)]
    pub loads: Vec<LoadSection>,
    #[serde(default)]
    pub motion: MotionSection,
    #[serde(default)]
    pub solve: SolveSection,
    pub window: Option<WindowSection>,
    #[serde(default)]
    pub oracle: OracleSection,
    #[serde(default)]
    pub output: OutputSection,
    pub sweep: Option<SweepSection>,
    #[serde(default)]
    pub verify: VerifySection,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CableSection {
    pub density: f64,
    pub tension: f64,
    pub length: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadSection {
    pub mass: f64,
    pub position: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeName {
    #[default]
    Static,
    LoadsMoving,
    SystemMoving,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactorName {
    #[default]
    Normalized,
    AsPrinted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaName {
    #[default]
    Corrected,
    AsPrinted,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MotionSection {
    pub mode: ModeName,
    pub speed: f64,
    pub coriolis: bool,
    pub factor_mode: FactorName,
    pub frequency_formula: FormulaName,
    pub length_rate: f64,
}

impl Default for MotionSection {
    fn default() -> Self {
        MotionSection {
            mode: ModeName::Static,
            speed: 0.0,
            coriolis: true,
            factor_mode: FactorName::Normalized,
            frequency_formula: FormulaName::Corrected,
            length_rate: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolveSection {
    pub count: usize,
    pub lambda_max: Option<f64>,
    pub oversample: usize,
    pub tol_rel: f64,
    pub max_iter: usize,
}

impl Default for SolveSection {
    fn default() -> Self {
        let d = RootSearchConfig::default();
        SolveSection {
            count: d.count,
            lambda_max: d.lambda_max,
            oversample: d.oversample,
            tol_rel: d.tol_rel,
            max_iter: d.max_iter,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSection {
    pub t0: f64,
    pub t1: f64,
    /// Number of sample instants, endpoints included.
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OracleSection {
    pub nodes: usize,
    pub threshold: f64,
}

impl Default for OracleSection {
    fn default() -> Self {
        OracleSection {
            nodes: 2000,
            threshold: 5e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Table,
    Csv,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub format: Option<Format>,
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub param: Option<String>,
    pub from: Option<f64>,
    pub to: Option<f64>,
    /// Number of grid points, endpoints included.
    pub steps: Option<usize>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifySection {
    pub seed: u64,
    pub trials: usize,
}

impl Default for VerifySection {
    fn default() -> Self {
        VerifySection {
            seed: 1,
            trials: 50,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    pub fn instance(&self) -> Result<ProblemInstance, ConfigError> {
        let cable = self
            .cable
            .ok_or_else(|| ConfigError::invalid("missing [cable] section"))?;
        let cable = CableSpec::new(cable.density, cable.tension, cable.length)
            .map_err(|e| ConfigError::invalid(e.to_string()))?;
        let loads = self
            .loads
            .iter()
            .map(|l| LoadSpec::new(l.mass, l.position))
            .collect();
        ProblemInstance::new(cable, loads, self.motion_spec())
            .map_err(|e| ConfigError::invalid(e.to_string()))
    }

    pub fn motion_spec(&self) -> MotionSpec {
        let m = &self.motion;
        MotionSpec {
            mode: match m.mode {
                ModeName::Static => MotionMode::Static,
                ModeName::LoadsMoving => MotionMode::LoadsMoving,
                ModeName::SystemMoving => MotionMode::SystemMoving,
            },
            speed: m.speed,
            coriolis: m.coriolis,
            factor_mode: match m.factor_mode {
                FactorName::Normalized => FactorMode::Normalized,
                FactorName::AsPrinted => FactorMode::AsPrinted,
            },
            frequency_formula: match m.frequency_formula {
                FormulaName::Corrected => FrequencyFormula::Corrected,
                FormulaName::AsPrinted => FrequencyFormula::AsPrinted,
            },
            length_rate: m.length_rate,
        }
    }

    pub fn search(&self) -> Result<RootSearchConfig, ConfigError> {
        let s = &self.solve;
        let config = RootSearchConfig {
            count: s.count,
            lambda_max: s.lambda_max,
            oversample: s.oversample,
            tol_rel: s.tol_rel,
            max_iter: s.max_iter,
        };
        config
            .validate()
            .map_err(|e| ConfigError::invalid(e.to_string()))?;
        Ok(config)
    }

    pub fn time_window(&self) -> Result<Option<TimeWindow>, ConfigError> {
        self.window
            .map(|w| TimeWindow::new(w.t0, w.t1, w.steps))
            .transpose()
            .map_err(|e| ConfigError::invalid(e.to_string()))
    }
}

/// Parses `speed`, `mass:<i>` or `position:<i>` (0-based load index).
pub fn parse_sweep_parameter(text: &str) -> Result<SweepParameter, ConfigError> {
    let bad = || {
        ConfigError::invalid(format!(
            "sweep.param must be speed, mass:<i> or position:<i>, got {text:?}"
        ))
    };
    if text == "speed" {
        return Ok(SweepParameter::Speed);
    }
    let (name, index) = text.split_once(':').ok_or_else(bad)?;
    let index: usize = index.parse().map_err(|_| bad())?;
    match name {
        "mass" => Ok(SweepParameter::Mass(index)),
        "position" => Ok(SweepParameter::Position(index)),
        _ => Err(bad()),
    }
}
