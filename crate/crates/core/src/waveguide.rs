//! Physical waveguide and beam parameters mapped to the dimensionless model.
//!
//! All quantities are SI. The Kerr coupling per unit length is
//! `K = n2 hbar omega^2 / (2 c tau_coh sigma_eff)` and the photon number in
//! one coherence volume is `|alpha|^2 = P tau_coh / (hbar omega)`, so that
//! `2 |alpha|^2 K = gamma P` with `gamma = 2 pi n2 / (lambda sigma_eff)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::approx::{f_min_approx, kz_opt_approx, x_near_opt_for_fano, x_short_for_fano};
use crate::error::{invalid, Error, Result};
use crate::moments::{from_db, to_db};

/// Speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Suppression level separating the two approximation regimes, dB.
pub const REGIME_SWITCH_DB: f64 = -12.1;

/// Material and mode parameters of a waveguide.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveguideSpec {
    /// Kerr index, m^2/W.
    #[serde(rename = "n2_m2_per_W")]
    pub n2: f64,
    /// Linear refractive index. Carried for completeness; no output depends on it.
    pub n0: f64,
    /// Effective mode area, m^2.
    #[serde(rename = "sigma_eff_m2")]
    pub sigma_eff: f64,
    /// Vacuum wavelength, m.
    #[serde(rename = "lambda_m")]
    pub lambda: f64,
}

impl WaveguideSpec {
    pub fn new(n2: f64, n0: f64, sigma_eff: f64, lambda: f64) -> Result<Self> {
        let spec = Self {
            n2,
            n0,
            sigma_eff,
            lambda,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("n2_m2_per_W", self.n2),
            ("n0", self.n0),
            ("sigma_eff_m2", self.sigma_eff),
            ("lambda_m", self.lambda),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(
                    name,
                    format!("must be positive and finite, got {v}"),
                ));
            }
        }
        if !(0.1e-6..=10e-6).contains(&self.lambda) {
            return Err(invalid("lambda_m", "must lie in [0.1e-6, 10e-6] m"));
        }
        Ok(())
    }

    /// Si3N4 waveguide at 1.55 um.
    pub fn si3n4() -> Self {
        Self {
            n2: 2.5e-19,
            n0: 2.0,
            sigma_eff: 0.3e-12,
            lambda: 1.55e-6,
        }
    }

    /// Looks up a bundled preset by name.
    pub fn preset(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "si3n4" => Some(Self::si3n4()),
            _ => None,
        }
    }

    /// Parses a preset file of `key = value` lines; `#` starts a comment.
    pub fn from_preset_str(text: &str) -> Result<Self> {
        let mut n2 = None;
        let mut n0 = None;
        let mut sigma = None;
        let mut lambda = None;
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .or_else(|| line.split_once(':'))
                .ok_or_else(|| {
                    invalid("preset", format!("expected `key = value`, got `{line}`"))
                })?;
            let key = key.trim();
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| invalid("preset", format!("`{key}` is not a number")))?;
            let slot = match key {
                "n2_m2_per_W" => &mut n2,
                "n0" => &mut n0,
                "sigma_eff_m2" => &mut sigma,
                "lambda_m" => &mut lambda,
                other => return Err(invalid("preset", format!("unknown key `{other}`"))),
            };
            *slot = Some(value);
        }
        let need = |v: Option<f64>, name: &'static str| {
            v.ok_or_else(|| invalid(name, "missing from preset"))
        };
        Self::new(
            need(n2, "n2_m2_per_W")?,
            need(n0, "n0")?,
            need(sigma, "sigma_eff_m2")?,
            need(lambda, "lambda_m")?,
        )
    }

    /// Serializes in the preset file format.
    pub fn to_preset_string(&self) -> String {
        format!(
            "n2_m2_per_W = {:e}\nn0 = {}\nsigma_eff_m2 = {:e}\nlambda_m = {:e}\n",
            self.n2, self.n0, self.sigma_eff, self.lambda
        )
    }

    /// Angular frequency, rad/s.
    pub fn omega(&self) -> f64 {
        2.0 * PI * SPEED_OF_LIGHT / self.lambda
    }

    pub fn photon_energy(&self) -> f64 {
        HBAR * self.omega()
    }
}

/// Power and spectral width of the input beam.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamSpec {
    /// W
    pub power: f64,
    /// Hz
    pub spectral_width: f64,
}

impl BeamSpec {
    pub fn new(power: f64, spectral_width: f64) -> Result<Self> {
        if !(power.is_finite() && power > 0.0) {
            return Err(invalid("power", "must be positive"));
        }
        if !(spectral_width.is_finite() && spectral_width > 0.0) {
            return Err(invalid("spectral_width", "must be positive"));
        }
        Ok(Self {
            power,
            spectral_width,
        })
    }

    /// `1 / spectral_width`, s.
    pub fn coherence_time(&self) -> f64 {
        self.spectral_width.recip()
    }

    /// `P / sigma_eff`, W/m^2.
    pub fn intensity(&self, wg: &WaveguideSpec) -> f64 {
        self.power / wg.sigma_eff
    }
}

/// Kerr coupling `K`, 1/m.
pub fn kerr_coupling(wg: &WaveguideSpec, beam: &BeamSpec) -> f64 {
    let omega = wg.omega();
    wg.n2 * HBAR * omega * omega / (2.0 * SPEED_OF_LIGHT * beam.coherence_time() * wg.sigma_eff)
}

/// `|alpha|` of one coherence volume.
pub fn alpha_from_power(beam: &BeamSpec, wg: &WaveguideSpec) -> f64 {
    (beam.power * beam.coherence_time() / wg.photon_energy()).sqrt()
}

/// Nonlinear parameter `gamma`, 1/(W m).
pub fn gamma(wg: &WaveguideSpec) -> f64 {
    2.0 * PI * wg.n2 / (wg.lambda * wg.sigma_eff)
}

/// Nonlinear phase `gamma P z` after length `z`.
pub fn nonlinear_phase(wg: &WaveguideSpec, beam: &BeamSpec, z: f64) -> f64 {
    gamma(wg) * beam.power * z
}

/// Optimal medium length, m.
pub fn z_opt_physical(wg: &WaveguideSpec, beam: &BeamSpec) -> f64 {
    let constant = (3f64.sqrt() / 2.0).cbrt() / (2.0 * PI);
    let photons = beam.power * beam.coherence_time() / wg.photon_energy();
    wg.lambda * constant / (wg.n2 * beam.intensity(wg)) * photons.cbrt()
}

/// Optimal length through the dimensionless route `(Kz)_opt / K`.
pub fn z_opt_from_coupling(wg: &WaveguideSpec, beam: &BeamSpec) -> f64 {
    kz_opt_approx(alpha_from_power(beam, wg)) / kerr_coupling(wg, beam)
}

/// Approximate Fano floor in dB at the optimal length.
pub fn fano_floor_physical(wg: &WaveguideSpec, beam: &BeamSpec) -> f64 {
    to_db(f_min_approx(alpha_from_power(beam, wg)))
}

/// Medium length reaching a target suppression.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LengthEstimate {
    /// m
    pub z: f64,
    /// `|alpha|^2 Kz`
    pub x: f64,
    pub used_short_formula: bool,
}

/// Length at which the approximations reach `target_db`.
///
/// Targets at or above -12.1 dB invert the short-length formula; deeper
/// targets invert `1/(16 x^2)`. The length `z = 2x/(gamma P)` does not depend
/// on the spectral width, which is only needed to check the target against the
/// physical floor.
pub fn length_for_suppression(
    target_db: f64,
    power: f64,
    wg: &WaveguideSpec,
    spectral_width: Option<f64>,
) -> Result<LengthEstimate> {
    if !(target_db.is_finite() && target_db < 0.0) {
        return Err(invalid("target_db", "must be negative"));
    }
    if !(power.is_finite() && power > 0.0) {
        return Err(invalid("power", "must be positive"));
    }
    if let Some(width) = spectral_width {
        let floor_db = fano_floor_physical(wg, &BeamSpec::new(power, width)?);
        if target_db < floor_db {
            return Err(Error::TargetBelowFloor {
                target_db,
                floor_db,
            });
        }
    }
    let fano = from_db(target_db);
    let short = target_db >= REGIME_SWITCH_DB;
    let x = if short {
        x_short_for_fano(fano)?
    } else {
        x_near_opt_for_fano(fano)?
    };
    Ok(LengthEstimate {
        z: length_for_x(x, power, wg),
        x,
        used_short_formula: short,
    })
}

/// `z = 2x / (gamma P)` for a given `x = |alpha|^2 Kz`.
pub fn length_for_x(x: f64, power: f64, wg: &WaveguideSpec) -> f64 {
    2.0 * x / (gamma(wg) * power)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn beam(p: f64, df: f64) -> BeamSpec {
        BeamSpec::new(p, df).unwrap()
    }

    #[test]
    fn gamma_of_si3n4() {
        let g = gamma(&WaveguideSpec::si3n4());
        assert!((g - 3.38).abs() < 5e-3, "{g}");
        let mut wg = WaveguideSpec::si3n4();
        wg.n2 *= 2.0;
        assert!((gamma(&wg) / g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn coupling_identity() {
        let wg = WaveguideSpec::si3n4();
        for (p, df) in [(1e-3, 1e6), (0.1, 1e8), (0.37, 4.2e5)] {
            let b = beam(p, df);
            let a2 = alpha_from_power(&b, &wg).powi(2);
            let lhs = 2.0 * a2 * kerr_coupling(&wg, &b);
            let rhs = gamma(&wg) * p;
            assert!((lhs / rhs - 1.0).abs() < 1e-12);
            let z = 3.7;
            assert!((nonlinear_phase(&wg, &b, z) / (lhs * z) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn coherence_time_halves_coupling() {
        let wg = WaveguideSpec::si3n4();
        let k1 = kerr_coupling(&wg, &beam(1e-3, 2e6));
        let k2 = kerr_coupling(&wg, &beam(1e-3, 1e6));
        assert!((k2 / k1 - 0.5).abs() < 1e-14);
    }

    #[test]
    fn amplitudes_of_table_cells() {
        let wg = WaveguideSpec::si3n4();
        let a = alpha_from_power(&beam(1e-3, 1e6), &wg);
        assert!((a / 8.8e4 - 1.0).abs() < 0.01, "{a}");
        let b = alpha_from_power(&beam(0.1, 1e8), &wg);
        assert!((b / 8.8e4 - 1.0).abs() < 0.01);
        let c = alpha_from_power(&beam(0.1, 1e6), &wg);
        assert!((c / a - 10.0).abs() < 1e-12);
    }

    #[test]
    fn optimal_lengths() {
        let wg = WaveguideSpec::si3n4();
        let z1 = z_opt_physical(&wg, &beam(1e-3, 1e6));
        assert!((z1 / 560e3 - 1.0).abs() < 0.01, "{z1}");
        let z2 = z_opt_physical(&wg, &beam(0.1, 1e8));
        assert!((z2 / 5.6e3 - 1.0).abs() < 0.01, "{z2}");
        let z3 = z_opt_physical(&wg, &beam(1.0, 1e6));
        assert!((z3 / z1 - 1e-2).abs() < 1e-14);
        assert!((z_opt_from_coupling(&wg, &beam(1e-3, 1e6)) / z1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kz_opt_scaling_in_physical_units() {
        let wg = WaveguideSpec::si3n4();
        let b = beam(1e-3, 1e6);
        let a = alpha_from_power(&b, &wg);
        let product = kerr_coupling(&wg, &b) * z_opt_physical(&wg, &b) * a.powf(4.0 / 3.0);
        assert!((product - 0.477).abs() < 5e-4);
    }

    #[test]
    fn floors() {
        let wg = WaveguideSpec::si3n4();
        assert!((fano_floor_physical(&wg, &beam(1e-3, 1e6)) + 70.0).abs() < 0.5);
        assert!((fano_floor_physical(&wg, &beam(0.1, 1e6)) + 83.0).abs() < 0.5);
        assert!((fano_floor_physical(&wg, &beam(1e-3, 1e8)) + 56.0).abs() < 0.5);
    }

    #[test]
    fn suppression_lengths() {
        let wg = WaveguideSpec::si3n4();
        let e5 = length_for_suppression(-5.0, 0.1, &wg, None).unwrap();
        assert!((e5.z / 1.8 - 1.0).abs() < 0.03 && (e5.x / 0.31 - 1.0).abs() < 0.03);
        let e10 = length_for_suppression(-10.0, 0.01, &wg, Some(1e6)).unwrap();
        assert!((e10.z / 41.0 - 1.0).abs() < 0.03 && (e10.x / 0.70 - 1.0).abs() < 0.03);
        let e15 = length_for_suppression(-15.0, 0.01, &wg, None).unwrap();
        assert!(!e15.used_short_formula);
        assert!((e15.x - 1.41).abs() < 0.01);
    }

    #[test]
    fn suppression_errors() {
        let wg = WaveguideSpec::si3n4();
        assert!(length_for_suppression(3.0, 0.1, &wg, None).is_err());
        let err = length_for_suppression(-90.0, 1e-3, &wg, Some(1e6)).unwrap_err();
        assert!(matches!(err, Error::TargetBelowFloor { .. }));
    }

    #[test]
    fn length_ignores_spectral_width() {
        let wg = WaveguideSpec::si3n4();
        let a = length_for_suppression(-8.0, 0.05, &wg, Some(1e6)).unwrap();
        let b = length_for_suppression(-8.0, 0.05, &wg, Some(1e8)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn preset_text_round_trip() {
        let wg = WaveguideSpec::si3n4();
        let parsed = WaveguideSpec::from_preset_str(&wg.to_preset_string()).unwrap();
        assert_eq!(parsed, wg);
        let commented = "# Si3N4\nn2_m2_per_W = 2.5e-19\nn0 = 2.0 # informational\nsigma_eff_m2 = 0.3e-12\nlambda_m = 1.55e-6\n";
        assert_eq!(WaveguideSpec::from_preset_str(commented).unwrap(), wg);
        assert!(WaveguideSpec::from_preset_str("n2_m2_per_W = 1").is_err());
        assert!(WaveguideSpec::from_preset_str("foo = 1").is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(WaveguideSpec::new(2.5e-19, 2.0, 0.3e-12, 20e-6).is_err());
        assert!(WaveguideSpec::new(-1.0, 2.0, 0.3e-12, 1.55e-6).is_err());
        assert!(BeamSpec::new(0.0, 1e6).is_err());
        let b = beam(0.1, 4e6);
        assert!((b.coherence_time() * b.spectral_width - 1.0).abs() < 1e-12);
    }
}
