//! Closed-form field moments and the exact Fano factor of the displaced Kerr state.
//!
//! With `A = |alpha|^2`, `theta = 2 Kz` and the normalized shift
//! `beta = alpha_S e^{-2iA Kz} / (tau alpha e^{iKz})`:
//!
//! ```text
//! g1 = exp(A (e^{i theta} - 1 - i theta))
//! g2 = exp(A (e^{2i theta} - 1 - 2i theta))
//! D  = 1 + beta g1* + beta* g1 + |beta|^2
//! N  = 2 beta (e^{-i theta} - 1) g1* + c.c.
//!    + beta^2 (e^{-i theta} g2* - g1*^2) + c.c.
//!    + 2 |beta|^2 (1 - |g1|^2)
//! F  = 1 + tau^2 A N / D,     <n_S> = tau^2 A D
//! ```
//!
//! Every small difference (`g - 1`, `1 - |g1|^2`, `e^{-i theta} g2* - g1*^2`) is
//! evaluated from its own exponent so the formula stays accurate as `Kz -> 0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fock::KerrScenario;

/// Photon-number statistics of a single mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FanoReport {
    pub mean_photon: f64,
    pub variance: f64,
    pub fano: f64,
    pub mandel_q: f64,
    pub suppression_db: f64,
}

impl FanoReport {
    pub fn from_moments(mean_photon: f64, variance: f64) -> Result<Self> {
        if !(mean_photon > 0.0) {
            return Err(Error::ZeroMeanPhoton);
        }
        Ok(Self::from_fano(mean_photon, variance / mean_photon))
    }

    pub(crate) fn from_fano(mean_photon: f64, fano: f64) -> Self {
        Self {
            mean_photon,
            variance: fano * mean_photon,
            fano,
            mandel_q: fano - 1.0,
            suppression_db: to_db(fano),
        }
    }
}

/// `10 log10(x)`, the dB convention used throughout.
pub fn to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Beam-splitter transmission and normalized complex shift.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisplacementSetting {
    pub tau: f64,
    pub beta: Complex64,
}

impl DisplacementSetting {
    pub fn new(tau: f64, beta: Complex64) -> Result<Self> {
        if !(tau > 0.0 && tau <= 1.0) {
            return Err(invalid("tau", format!("must lie in (0, 1], got {tau}")));
        }
        if !(beta.re.is_finite() && beta.im.is_finite()) {
            return Err(invalid("beta", "must be finite"));
        }
        Ok(Self { tau, beta })
    }

    /// Shift `beta` at full transmission.
    pub fn unit(beta: Complex64) -> Self {
        Self { tau: 1.0, beta }
    }

    /// Converts raw beam-splitter data (`alpha_S = rho alpha0`) to the normalized shift.
    pub fn from_beam_splitter(
        rho: Complex64,
        alpha0: Complex64,
        tau: f64,
        scenario: &KerrScenario,
    ) -> Result<Self> {
        scenario.require_nonzero_alpha()?;
        if tau * tau + rho.norm_sqr() > 1.0 + 1e-12 {
            return Err(invalid("rho", "|tau|^2 + |rho|^2 must not exceed 1"));
        }
        let beta = rho * alpha0 / (tau * frame(scenario));
        Self::new(tau, beta)
    }

    /// Physical added amplitude `alpha_S = rho alpha0`.
    pub fn shift_amplitude(&self, scenario: &KerrScenario) -> Complex64 {
        self.beta * self.tau * frame(scenario)
    }
}

/// `alpha e^{iKz} e^{2i|alpha|^2 Kz}`, the frame relating `beta` to `alpha_S`.
pub fn frame(scenario: &KerrScenario) -> Complex64 {
    let phase = scenario.kz * (1.0 + 2.0 * scenario.alpha_sq());
    scenario.alpha * Complex64::from_polar(1.0, phase)
}

/// `e^{it} - 1` without cancellation.
pub(crate) fn expm1_i(t: f64) -> Complex64 {
    let s = (0.5 * t).sin();
    Complex64::new(-2.0 * s * s, t.sin())
}

/// `sin t - t` without cancellation.
fn sin_minus_id(t: f64) -> f64 {
    if t.abs() > 0.5 {
        return t.sin() - t;
    }
    let t2 = t * t;
    let mut term = -t * t2 / 6.0;
    let mut sum = term;
    let mut k = 3.0;
    while term.abs() > 1e-18 * sum.abs() {
        term *= -t2 / ((k + 1.0) * (k + 2.0));
        sum += term;
        k += 2.0;
    }
    sum
}

/// `e^{it} - 1 - it` without cancellation.
fn expm1_i_minus_linear(t: f64) -> Complex64 {
    let s = (0.5 * t).sin();
    Complex64::new(-2.0 * s * s, sin_minus_id(t))
}

/// Complex `e^z - 1`.
fn cexpm1(z: Complex64) -> Complex64 {
    let s = (0.5 * z.im).sin();
    let ea = z.re.exp();
    Complex64::new(z.re.exp_m1() * z.im.cos() - 2.0 * s * s, ea * z.im.sin())
}

/// The building blocks of the exact Fano formula for one scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KerrTerms {
    pub alpha_sq: f64,
    pub g1: Complex64,
    pub g2: Complex64,
    /// `(e^{-2iKz} - 1) g1*`
    pub linear: Complex64,
    /// `e^{-2iKz} g2* - g1*^2`
    pub quadratic: Complex64,
    /// `1 - |g1|^2`
    pub radial: f64,
}

impl KerrTerms {
    pub fn new(scenario: &KerrScenario) -> Self {
        let a = scenario.alpha_sq();
        let theta = 2.0 * scenario.kz;
        let z1 = expm1_i_minus_linear(theta) * a;
        let z2 = expm1_i_minus_linear(2.0 * theta) * a;
        let g1 = z1.exp();
        let g2 = z2.exp();
        let em = expm1_i(-theta);
        let linear = em * g1.conj();
        let quadratic = g1.conj() * g1.conj() * cexpm1(em * em * a - Complex64::new(0.0, theta));
        let radial = -(2.0 * z1.re).exp_m1();
        Self {
            alpha_sq: a,
            g1,
            g2,
            linear,
            quadratic,
            radial,
        }
    }

    /// `1 + beta g1* + beta* g1 + |beta|^2`
    pub fn denominator(&self, beta: Complex64) -> f64 {
        1.0 + 2.0 * (beta * self.g1.conj()).re + beta.norm_sqr()
    }

    /// Bracketed numerator of the Fano formula.
    pub fn numerator(&self, beta: Complex64) -> f64 {
        4.0 * (beta * self.linear).re
            + 2.0 * (beta * beta * self.quadratic).re
            + 2.0 * beta.norm_sqr() * self.radial
    }

    /// Fano factor at full transmission, no error checks.
    pub fn fano_unchecked(&self, beta: Complex64) -> f64 {
        1.0 + self.alpha_sq * self.numerator(beta) / self.denominator(beta)
    }
}

/// The factors `g1`, `g2`.
pub fn g_factors(scenario: &KerrScenario) -> (Complex64, Complex64) {
    let t = KerrTerms::new(scenario);
    (t.g1, t.g2)
}

/// Exact Fano factor, mean and variance of the displaced Kerr state.
pub fn fano_displaced(
    scenario: &KerrScenario,
    setting: &DisplacementSetting,
) -> Result<FanoReport> {
    let terms = KerrTerms::new(scenario);
    let tau_sq = setting.tau * setting.tau;
    let d = terms.denominator(setting.beta);
    let mean = tau_sq * terms.alpha_sq * d;
    if !(mean > 0.0) {
        return Err(Error::DegenerateDenominator(mean));
    }
    let fano = 1.0 + tau_sq * terms.alpha_sq * terms.numerator(setting.beta) / d;
    Ok(FanoReport::from_fano(mean, fano))
}

/// Closed form of `<a^dagger^k a^l>` for the Kerr-evolved coherent state.
///
/// For `l >= k`, `alpha*^k alpha^l e^{iKz(l^2-k^2)} exp(A(e^{2iKz(l-k)} - 1))`.
pub fn closed_form_moment(scenario: &KerrScenario, k: u32, l: u32) -> Complex64 {
    if k > l {
        return closed_form_moment(scenario, l, k).conj();
    }
    let a = scenario.alpha;
    let kz = scenario.kz;
    let d = (l - k) as f64;
    let (kf, lf) = (k as f64, l as f64);
    let exponent =
        expm1_i(2.0 * kz * d) * scenario.alpha_sq() + Complex64::new(0.0, kz * (lf * lf - kf * kf));
    a.conj().powu(k) * a.powu(l) * exponent.exp()
}

/// `<a>` of the Kerr-evolved coherent state.
pub fn mean_field(scenario: &KerrScenario) -> Complex64 {
    closed_form_moment(scenario, 0, 1)
}
