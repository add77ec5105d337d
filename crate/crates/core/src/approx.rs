//! Analytic approximations of the optimized Fano factor versus medium length.
//!
//! ```text
//! short length:  F1 = exp(-4 A Kz + A^2 Kz^2)
//! near optimum:  F2 = (8/3) A^2 Kz^4 + 1 / (16 A^2 Kz^2)
//! crossover:     (Kz)_app = (sqrt(3)/2)^(1/3) / A
//! ```
//!
//! with `A = |alpha|^2`. Minimizing `F2` gives the optimal length and the
//! floor of the Fano factor, both `~ |alpha|^(-4/3)`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Which approximation covers a given length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    ShortLength,
    NearOptimum,
}

/// An approximation regime and the `Kz` interval it covers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproxCurve {
    pub regime: Regime,
    pub valid_kz_range: (f64, f64),
}

impl ApproxCurve {
    pub fn for_regime(alpha: f64, regime: Regime) -> Self {
        let app = kz_app(alpha * alpha);
        let valid_kz_range = match regime {
            Regime::ShortLength => (0.0, app),
            Regime::NearOptimum => (app, 2.0 * kz_opt_approx(alpha)),
        };
        Self {
            regime,
            valid_kz_range,
        }
    }
}

/// Piecewise approximation value with the regime that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseValue {
    pub value: f64,
    pub regime: Regime,
}

/// `(sqrt(3)/2)^(1/3)`
pub fn crossover_constant() -> f64 {
    (3f64.sqrt() / 2.0).cbrt()
}

/// `(3/256)^(1/6)`, the `|alpha|^(4/3) (Kz)_opt` constant (~0.477).
pub fn kz_opt_constant() -> f64 {
    0.5 * crossover_constant()
}

/// `(1/4) (3/sqrt(2))^(2/3)`, the `|alpha|^(4/3) F_min` constant (~0.413).
pub fn f_min_constant() -> f64 {
    0.25 * (3.0 / 2f64.sqrt()).powf(2.0 / 3.0)
}

/// Short-length approximation.
pub fn f1_short(alpha_sq: f64, kz: f64) -> f64 {
    let x = alpha_sq * kz;
    (-4.0 * x + x * x).exp()
}

/// Near-optimum approximation.
pub fn f2_near_opt(alpha_sq: f64, kz: f64) -> Result<f64> {
    if kz == 0.0 || alpha_sq == 0.0 {
        return Err(Error::DivisionByZero("f2_near_opt at kz = 0"));
    }
    let a2 = alpha_sq * alpha_sq;
    let kz2 = kz * kz;
    Ok(8.0 / 3.0 * a2 * kz2 * kz2 + 1.0 / (16.0 * a2 * kz2))
}

/// Crossover length between the two regimes.
pub fn kz_app(alpha_sq: f64) -> f64 {
    crossover_constant() / alpha_sq
}

/// Optimal length from minimizing the near-optimum approximation.
pub fn kz_opt_approx(alpha: f64) -> f64 {
    let a = alpha.abs();
    (0.5 / a) * (3f64.sqrt() / (2.0 * a)).cbrt()
}

/// Fano floor from minimizing the near-optimum approximation.
pub fn f_min_approx(alpha: f64) -> f64 {
    let a = alpha.abs();
    0.25 * (3.0 / (2f64.sqrt() * a * a)).powf(2.0 / 3.0)
}

/// Short-length formula below `(Kz)_app`, near-optimum formula above.
pub fn f_piecewise(alpha: f64, kz: f64) -> Result<PiecewiseValue> {
    if !(alpha.abs() > 0.0) {
        return Err(invalid("alpha", "must be non-zero"));
    }
    let max = 2.0 * kz_opt_approx(alpha);
    if !(kz >= 0.0 && kz <= max) {
        return Err(Error::OutOfValidityRange { kz, min: 0.0, max });
    }
    let a2 = alpha * alpha;
    if kz < kz_app(a2) {
        Ok(PiecewiseValue {
            value: f1_short(a2, kz),
            regime: Regime::ShortLength,
        })
    } else {
        Ok(PiecewiseValue {
            value: f2_near_opt(a2, kz)?,
            regime: Regime::NearOptimum,
        })
    }
}

/// `|alpha|^2 Kz` at which the short-length formula reaches `fano` (smaller root).
pub fn x_short_for_fano(fano: f64) -> Result<f64> {
    // x^2 - 4x - ln F = 0
    let disc = 4.0 + fano.ln();
    if !(disc >= 0.0) {
        return Err(Error::NoRealRoot(crate::moments::to_db(fano)));
    }
    Ok(2.0 - disc.sqrt())
}

/// `|alpha|^2 Kz` at which the `1/(16 x^2)` branch reaches `fano`.
pub fn x_near_opt_for_fano(fano: f64) -> Result<f64> {
    if !(fano > 0.0) {
        return Err(Error::NoRealRoot(crate::moments::to_db(fano)));
    }
    Ok(0.25 / fano.sqrt())
}
