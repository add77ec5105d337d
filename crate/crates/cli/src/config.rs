//! Run configuration: everything needed to reproduce one artifact.
//!
//! Stored as TOML on disk; artifacts embed it as JSON. Both forms load with
//! [`RunConfig::load`].

use std::path::Path;

use kerr_noise::reproduce::Target;
use kerr_noise::{FockConfig, OptimizerConfig, WaveguideSpec};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Window {
    /// Square window around the mean field.
    Mean,
    /// Bounding box of the state's support.
    #[default]
    Cover,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

/// Numerical tolerances exposed as `--tol-*` flags.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Fock basis tail mass.
    pub truncation: f64,
    /// Simplex stop on the spread of F.
    pub ftol: f64,
    /// Simplex stop on the simplex size.
    pub xtol: f64,
    /// Relative Kz bracket for the length search.
    pub kz: f64,
    pub max_iter: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        let opt = OptimizerConfig::default();
        Self {
            truncation: FockConfig::default().truncation_tol,
            ftol: opt.ftol,
            xtol: opt.xtol,
            kz: opt.kz_rel_tol,
            max_iter: opt.max_iter,
        }
    }
}

impl Tolerances {
    pub fn optimizer(&self) -> OptimizerConfig {
        OptimizerConfig {
            ftol: self.ftol,
            xtol: self.xtol,
            kz_rel_tol: self.kz,
            max_iter: self.max_iter,
            ..OptimizerConfig::default()
        }
    }

    pub fn fock(&self) -> FockConfig {
        FockConfig {
            truncation_tol: self.truncation,
            ..FockConfig::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Command {
    Fano {
        alpha: f64,
        #[serde(default)]
        alpha_phase: f64,
        kz: f64,
        #[serde(default)]
        beta_re: f64,
        #[serde(default)]
        beta_im: f64,
        #[serde(default = "one")]
        tau: f64,
    },
    Optimize {
        alpha: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        kz: Option<f64>,
    },
    SweepLength {
        alpha: f64,
        kz_min: f64,
        kz_max: f64,
        points: usize,
        spacing: Spacing,
    },
    Wigner {
        alpha: f64,
        kz: f64,
        /// Explicit shift; when absent the optimal one is used if `shifted`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        beta: Option<[f64; 2]>,
        shifted: bool,
        window: Window,
        half_width: f64,
        margin: f64,
        resolution: usize,
    },
    PhotonDist {
        alpha: f64,
        kz: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        beta: Option<[f64; 2]>,
    },
    Design {
        power: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        spectral_width: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        target_db: Option<f64>,
    },
    Reproduce {
        target: Target,
        sweep_points: usize,
    },
}

fn one() -> f64 {
    1.0
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Fano { .. } => "fano",
            Command::Optimize { .. } => "optimize",
            Command::SweepLength { .. } => "sweep-length",
            Command::Wigner { .. } => "wigner",
            Command::PhotonDist { .. } => "photon-dist",
            Command::Design { .. } => "design",
            Command::Reproduce { .. } => "reproduce",
        }
    }

    fn needs_waveguide(&self) -> bool {
        matches!(self, Command::Design { .. } | Command::Reproduce { .. })
    }
}

fn default_parallelism() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default)]
    pub format: Format,
    #[serde(default = "default_parallelism")]
    pub parallelism: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub waveguide: Option<WaveguideSpec>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            format: Format::default(),
            parallelism: 1,
            preset: None,
            waveguide: None,
            tolerances: Tolerances::default(),
        }
    }

    /// Parses TOML, or JSON when the text starts with `{`.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let config: RunConfig = if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?
        } else {
            toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?
        };
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes to TOML")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.parallelism == 0 {
            return Err(CliError::Validation("parallel: must be at least 1".into()));
        }
        if self.preset.is_some() && self.waveguide.is_some() {
            return Err(CliError::Validation(
                "give either a preset or an inline waveguide, not both".into(),
            ));
        }
        if let Some(wg) = &self.waveguide {
            wg.validate()?;
        }
        if let Some(name) = &self.preset {
            if WaveguideSpec::preset(name).is_none() {
                return Err(CliError::Validation(format!(
                    "preset: unknown material `{name}`"
                )));
            }
        }
        Ok(())
    }

    /// The waveguide for physical commands; Si3N4 when nothing is given.
    pub fn resolved_waveguide(&self) -> Result<WaveguideSpec, CliError> {
        if let Some(wg) = self.waveguide {
            return Ok(wg);
        }
        let name = self.preset.as_deref().unwrap_or("si3n4");
        WaveguideSpec::preset(name)
            .ok_or_else(|| CliError::Validation(format!("preset: unknown material `{name}`")))
    }

    /// Fills in the default material so that the embedded config is explicit.
    pub fn normalized(mut self) -> Self {
        if self.command.needs_waveguide() && self.waveguide.is_none() && self.preset.is_none() {
            self.preset = Some("si3n4".into());
        }
        self
    }
}
