use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use kerr_noise::approx::kz_opt_approx;
use kerr_noise::reproduce::Target;
use kerr_noise::wigner::DEFAULT_HALF_WIDTH;
use kerr_noise::WaveguideSpec;

use crate::config::{Command, Format, RunConfig, Spacing, Window};
use crate::error::CliError;
use crate::run::WIGNER_RESOLUTION;

/// Photon-noise suppression with displaced Kerr states.
#[derive(Debug, Parser)]
#[command(name = "kerr-noise", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Option<Sub>,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Artifact format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the artifact here and print a summary to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Bundled material preset (si3n4).
    #[arg(long, global = true)]
    pub preset: Option<String>,

    /// Material preset file with n2_m2_per_W, n0, sigma_eff_m2, lambda_m.
    #[arg(long, global = true, conflicts_with = "preset")]
    pub preset_file: Option<PathBuf>,

    /// Run configuration (TOML, or the JSON config embedded in an artifact).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Also write the resolved configuration as TOML.
    #[arg(long, global = true)]
    pub save_config: Option<PathBuf>,

    /// Worker threads for sweeps; 1 runs sequentially with warm starts.
    #[arg(long, global = true)]
    pub parallel: Option<usize>,

    /// Fock basis tail mass.
    #[arg(long = "tol-truncation", global = true)]
    pub tol_truncation: Option<f64>,

    /// Simplex stop on the spread of F.
    #[arg(long = "tol-ftol", global = true)]
    pub tol_ftol: Option<f64>,

    /// Simplex stop on the simplex size.
    #[arg(long = "tol-xtol", global = true)]
    pub tol_xtol: Option<f64>,

    /// Relative Kz tolerance of the length search.
    #[arg(long = "tol-kz", global = true)]
    pub tol_kz: Option<f64>,

    /// Simplex iteration cap.
    #[arg(long = "tol-max-iter", global = true)]
    pub tol_max_iter: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Exact Fano factor of a displaced Kerr state.
    #[command(allow_negative_numbers = true)]
    Fano {
        alpha: f64,
        kz: f64,
        #[arg(long, default_value_t = 0.0)]
        beta_re: f64,
        #[arg(long, default_value_t = 0.0)]
        beta_im: f64,
        /// Beam-splitter transmission.
        #[arg(long, default_value_t = 1.0)]
        tau: f64,
        /// Phase of the input amplitude, rad.
        #[arg(long, default_value_t = 0.0)]
        alpha_phase: f64,
    },
    /// Optimal shift at fixed Kz, or optimal shift and length.
    #[command(allow_negative_numbers = true)]
    Optimize {
        alpha: f64,
        #[arg(long)]
        kz: Option<f64>,
    },
    /// Optimized Fano factor over a range of Kz.
    #[command(allow_negative_numbers = true)]
    SweepLength {
        alpha: f64,
        /// Default 0.05 (Kz)_opt.
        #[arg(long)]
        kz_min: Option<f64>,
        /// Default 2.5 (Kz)_opt.
        #[arg(long)]
        kz_max: Option<f64>,
        #[arg(long, default_value_t = 41)]
        points: usize,
        #[arg(long, value_enum, default_value_t = Spacing::Linear)]
        spacing: Spacing,
    },
    /// Wigner function on a phase-space grid.
    #[command(allow_negative_numbers = true)]
    Wigner {
        alpha: f64,
        kz: f64,
        #[arg(long, requires = "beta_im")]
        beta_re: Option<f64>,
        #[arg(long, requires = "beta_re")]
        beta_im: Option<f64>,
        /// Render the displaced state instead of the Kerr state.
        #[arg(long)]
        shifted: bool,
        #[arg(long, value_enum, default_value_t = Window::Cover)]
        window: Window,
        #[arg(long, default_value_t = DEFAULT_HALF_WIDTH)]
        half_width: f64,
        /// Margin of the covering window.
        #[arg(long, default_value_t = 3.0)]
        margin: f64,
        #[arg(long, default_value_t = WIGNER_RESOLUTION)]
        resolution: usize,
    },
    /// Photon-number distribution of the displaced state.
    #[command(allow_negative_numbers = true)]
    PhotonDist {
        alpha: f64,
        kz: f64,
        #[arg(long, requires = "beta_im")]
        beta_re: Option<f64>,
        #[arg(long, requires = "beta_re")]
        beta_im: Option<f64>,
    },
    /// Waveguide design numbers: `design POWER [WIDTH] [PRESET]`.
    #[command(allow_negative_numbers = true)]
    Design {
        /// Power in W, spectral width in Hz, and optionally a preset name.
        values: Vec<String>,
        #[arg(long)]
        power: Option<f64>,
        #[arg(long)]
        spectral_width: Option<f64>,
        /// Target suppression in dB.
        #[arg(long)]
        target: Option<f64>,
    },
    /// Recompute a published table or figure and compare.
    Reproduce {
        #[arg(value_parser = parse_target)]
        target: Target,
        #[arg(long, default_value_t = 41)]
        sweep_points: usize,
    },
}

fn parse_target(s: &str) -> Result<Target, String> {
    s.parse().map_err(|e: kerr_noise::Error| e.to_string())
}

fn beta_pair(re: Option<f64>, im: Option<f64>) -> Option<[f64; 2]> {
    match (re, im) {
        (Some(re), Some(im)) => Some([re, im]),
        _ => None,
    }
}

impl Sub {
    /// The command plus a preset named positionally, if any.
    fn into_command(self) -> Result<(Command, Option<String>), CliError> {
        let command = match self {
            Sub::Fano {
                alpha,
                kz,
                beta_re,
                beta_im,
                tau,
                alpha_phase,
            } => Command::Fano {
                alpha,
                alpha_phase,
                kz,
                beta_re,
                beta_im,
                tau,
            },
            Sub::Optimize { alpha, kz } => Command::Optimize { alpha, kz },
            Sub::SweepLength {
                alpha,
                kz_min,
                kz_max,
                points,
                spacing,
            } => {
                let center = kz_opt_approx(alpha);
                Command::SweepLength {
                    alpha,
                    kz_min: kz_min.unwrap_or(0.05 * center),
                    kz_max: kz_max.unwrap_or(2.5 * center),
                    points,
                    spacing,
                }
            }
            Sub::Wigner {
                alpha,
                kz,
                beta_re,
                beta_im,
                shifted,
                window,
                half_width,
                margin,
                resolution,
            } => Command::Wigner {
                alpha,
                kz,
                beta: beta_pair(beta_re, beta_im),
                shifted,
                window,
                half_width,
                margin,
                resolution,
            },
            Sub::PhotonDist {
                alpha,
                kz,
                beta_re,
                beta_im,
            } => Command::PhotonDist {
                alpha,
                kz,
                beta: beta_pair(beta_re, beta_im),
            },
            Sub::Design {
                values,
                power,
                spectral_width,
                target,
            } => {
                let mut numbers = Vec::new();
                let mut preset = None;
                for v in values {
                    match v.parse::<f64>() {
                        Ok(x) => numbers.push(x),
                        Err(_) if preset.is_none() => preset = Some(v),
                        Err(_) => {
                            return Err(CliError::Validation(format!(
                                "design: unexpected argument `{v}`"
                            )))
                        }
                    }
                }
                if numbers.len() > 2 {
                    return Err(CliError::Validation(
                        "design: at most two numbers (power, spectral width)".into(),
                    ));
                }
                let pick = |flag: Option<f64>, positional: Option<f64>, name: &str| match (
                    flag, positional,
                ) {
                    (Some(_), Some(_)) => Err(CliError::Validation(format!("{name}: given twice"))),
                    (a, b) => Ok(a.or(b)),
                };
                let power = pick(power, numbers.first().copied(), "power")?
                    .ok_or_else(|| CliError::Validation("power: required".into()))?;
                let spectral_width =
                    pick(spectral_width, numbers.get(1).copied(), "spectral_width")?;
                let command = Command::Design {
                    power,
                    spectral_width,
                    target_db: target,
                };
                return Ok((command, preset));
            }
            Sub::Reproduce {
                target,
                sweep_points,
            } => Command::Reproduce {
                target,
                sweep_points,
            },
        };
        Ok((command, None))
    }
}

impl Cli {
    /// Merges the config file, the subcommand and the global flags.
    pub fn resolve(self) -> Result<RunConfig, CliError> {
        let g = self.global;
        let from_file = g.config.as_deref().map(RunConfig::load).transpose()?;
        let (command, positional_preset) = match self.command {
            Some(sub) => {
                let (c, p) = sub.into_command()?;
                (Some(c), p)
            }
            None => (None, None),
        };
        let mut config = match (from_file, command) {
            (Some(mut file), Some(c)) => {
                file.command = c;
                file
            }
            (Some(file), None) => file,
            (None, Some(c)) => RunConfig::new(c),
            (None, None) => {
                return Err(CliError::Validation("no command given (see --help)".into()));
            }
        };
        if let Some(f) = g.format {
            config.format = f;
        }
        if let Some(p) = g.parallel {
            config.parallelism = p;
        }
        let preset = match (g.preset, positional_preset) {
            (Some(a), Some(b)) if !a.eq_ignore_ascii_case(&b) => {
                return Err(CliError::Validation(format!(
                    "preset: `{a}` and `{b}` both given"
                )));
            }
            (a, b) => a.or(b),
        };
        if let Some(name) = preset {
            config.preset = Some(name.to_ascii_lowercase());
            config.waveguide = None;
        }
        if let Some(path) = g.preset_file {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            config.waveguide = Some(WaveguideSpec::from_preset_str(&text)?);
            config.preset = None;
        }
        let t = &mut config.tolerances;
        if let Some(v) = g.tol_truncation {
            t.truncation = v;
        }
        if let Some(v) = g.tol_ftol {
            t.ftol = v;
        }
        if let Some(v) = g.tol_xtol {
            t.xtol = v;
        }
        if let Some(v) = g.tol_kz {
            t.kz = v;
        }
        if let Some(v) = g.tol_max_iter {
            t.max_iter = v;
        }
        let config = config.normalized();
        config.validate()?;
        Ok(config)
    }
}
