//! Optimal displacement and optimal medium length.
//!
//! [`optimize_beta`] minimizes the exact Fano factor over the complex shift at
//! fixed `(alpha, Kz)`: a polar grid seeded perpendicular to the mean field,
//! followed by simplex refinement. [`optimize_length`] wraps it in a
//! golden-section search over `Kz`. [`rayleigh_lower_bound`] is an independent
//! eigenvalue route to the same minimum.

pub mod golden;
pub mod rayleigh;
pub mod simplex;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approx::{f_min_approx, kz_opt_approx};
use crate::error::{invalid, Error, Result};
use crate::fock::KerrScenario;
use crate::moments::{to_db, KerrTerms};

pub use rayleigh::{rayleigh_bound, rayleigh_lower_bound, RayleighBound};

use golden::golden_section;
use simplex::{nelder_mead, SimplexOptions};

/// Search settings. Defaults follow the documented grid and tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub grid_angles: usize,
    pub grid_magnitudes: usize,
    /// Grid spans `[0, grid_span * seed]` in `|beta|`.
    pub grid_span: f64,
    /// Simplex stop on the spread of `F`.
    pub ftol: f64,
    /// Simplex stop on the size of the simplex in the `beta` plane.
    pub xtol: f64,
    pub max_iter: usize,
    /// Relative bracket width at which the length search stops.
    pub kz_rel_tol: f64,
    /// `Kz` bracket in units of the approximate optimum.
    pub kz_bracket: (f64, f64),
    /// Two shifts whose `F` differ by less than this count as tied.
    pub tie_tol: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            grid_angles: 64,
            grid_magnitudes: 32,
            grid_span: 4.0,
            ftol: 1e-12,
            xtol: 1e-10,
            max_iter: 10_000,
            kz_rel_tol: 1e-6,
            kz_bracket: (0.2, 2.5),
            tie_tol: 1e-12,
        }
    }
}

impl OptimizerConfig {
    fn validate(&self) -> Result<()> {
        if self.grid_angles < 4 || self.grid_magnitudes < 1 {
            return Err(invalid("grid", "need at least 4 angles and 1 magnitude"));
        }
        if !(self.ftol > 0.0 && self.xtol > 0.0 && self.kz_rel_tol > 0.0) {
            return Err(invalid("tolerance", "tolerances must be positive"));
        }
        if !(self.kz_bracket.0 > 0.0 && self.kz_bracket.1 > self.kz_bracket.0) {
            return Err(invalid("kz_bracket", "need 0 < lo < hi"));
        }
        Ok(())
    }
}

/// Best displacement found for one scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub alpha: f64,
    pub kz: f64,
    pub beta_opt: Complex64,
    pub beta_magnitude: f64,
    pub fano_min: f64,
    pub suppression_db: f64,
    pub mean_photon: f64,
}

impl Optimum {
    fn at(terms: &KerrTerms, scenario: &KerrScenario, beta: Complex64, fano: f64) -> Self {
        Self {
            alpha: scenario.alpha.norm(),
            kz: scenario.kz,
            beta_opt: beta,
            beta_magnitude: beta.norm(),
            fano_min: fano,
            suppression_db: to_db(fano),
            mean_photon: terms.alpha_sq * terms.denominator(beta),
        }
    }
}

/// Seed magnitude for `|beta|`: the square root of the approximate Fano floor.
pub fn beta_scale(alpha: f64) -> f64 {
    f_min_approx(alpha).sqrt()
}

pub fn optimize_beta(scenario: &KerrScenario) -> Result<Optimum> {
    optimize_beta_with(scenario, &OptimizerConfig::default(), None)
}

/// Minimizes `F(beta)` at fixed `(alpha, Kz)`.
///
/// `warm` adds a previously found shift to the candidate set.
pub fn optimize_beta_with(
    scenario: &KerrScenario,
    config: &OptimizerConfig,
    warm: Option<Complex64>,
) -> Result<Optimum> {
    config.validate()?;
    scenario.require_nonzero_alpha()?;
    let terms = KerrTerms::new(scenario);
    let zero = Complex64::new(0.0, 0.0);
    if scenario.kz == 0.0 {
        return Ok(Optimum::at(&terms, scenario, zero, 1.0));
    }

    let objective = |beta: Complex64| {
        let d = terms.denominator(beta);
        if d > 0.0 {
            1.0 + terms.alpha_sq * terms.numerator(beta) / d
        } else {
            f64::INFINITY
        }
    };

    let seed = beta_scale(scenario.alpha.norm());
    let perpendicular = terms.g1.arg() + 0.5 * PI;
    let max_mag = config.grid_span * seed;
    let mut best = (zero, objective(zero));
    for i in 0..config.grid_angles {
        let angle = perpendicular + 2.0 * PI * i as f64 / config.grid_angles as f64;
        for j in 1..=config.grid_magnitudes {
            let mag = max_mag * j as f64 / config.grid_magnitudes as f64;
            let beta = Complex64::from_polar(mag, angle);
            let f = objective(beta);
            if f < best.1 {
                best = (beta, f);
            }
        }
    }
    if let Some(w) = warm {
        let f = objective(w);
        if f < best.1 {
            best = (w, f);
        }
    }

    let opts = SimplexOptions {
        ftol: config.ftol,
        xtol: config.xtol,
        max_iter: config.max_iter,
    };
    let f2 = |x: &[f64]| objective(Complex64::new(x[0], x[1]));
    let mut step = max_mag / config.grid_magnitudes as f64;
    let mut start = best.0;
    let mut total_iter = 0;
    for _ in 0..2 {
        let run = nelder_mead(f2, &[start.re, start.im], &[step, step], &opts);
        total_iter += run.iterations;
        if !run.converged {
            return Err(Error::NonConvergence {
                what: "simplex search over beta",
                kz: scenario.kz,
                iterations: total_iter,
            });
        }
        let candidate = Complex64::new(run.x[0], run.x[1]);
        if run.f <= best.1 {
            best = (candidate, run.f);
        }
        start = best.0;
        step *= 0.05;
    }

    // Prefer the cheaper (smaller) shift on a tie with no displacement.
    let f_zero = objective(zero);
    if f_zero <= best.1 + config.tie_tol {
        best = (zero, f_zero);
    }
    Ok(Optimum::at(&terms, scenario, best.0, best.1))
}

pub fn optimize_length(alpha: Complex64) -> Result<Optimum> {
    optimize_length_with(alpha, &OptimizerConfig::default())
}

/// Golden-section search over `Kz` of the optimized Fano factor.
pub fn optimize_length_with(alpha: Complex64, config: &OptimizerConfig) -> Result<Optimum> {
    config.validate()?;
    let a = alpha.norm();
    if !(a >= 2.0) {
        return Err(invalid("alpha", format!("|alpha| must be >= 2, got {a}")));
    }
    let center = kz_opt_approx(a);
    let lo = config.kz_bracket.0 * center;
    let hi = config.kz_bracket.1 * center;
    let eval = |kz: f64| -> Result<f64> {
        let s = KerrScenario::new(alpha, kz)?;
        Ok(optimize_beta_with(&s, config, None)?.fano_min)
    };
    let found =
        golden_section(eval, lo, hi, config.kz_rel_tol, 500)?.ok_or(Error::NonConvergence {
            what: "golden-section search over kz",
            kz: center,
            iterations: 500,
        })?;
    optimize_beta_with(&KerrScenario::new(alpha, found.x)?, config, None)
}

/// Optimized shift at each `Kz`.
///
/// With `parallelism <= 1` the points run in order and each search also tries
/// the previous optimum. Otherwise points are independent and run on a pool of
/// `parallelism` threads.
pub fn sweep_length(
    alpha: Complex64,
    kz_values: &[f64],
    config: &OptimizerConfig,
    parallelism: usize,
) -> Result<Vec<Optimum>> {
    if kz_values.iter().any(|k| !(k.is_finite() && *k >= 0.0)) {
        return Err(invalid("kz_values", "must be finite and non-negative"));
    }
    if kz_values.windows(2).any(|w| w[1] < w[0]) {
        return Err(invalid("kz_values", "must be sorted ascending"));
    }
    if parallelism <= 1 {
        let mut out = Vec::with_capacity(kz_values.len());
        let mut warm = None;
        for &kz in kz_values {
            let opt = optimize_beta_with(&KerrScenario::new(alpha, kz)?, config, warm)?;
            warm = Some(opt.beta_opt);
            out.push(opt);
        }
        return Ok(out);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(|e| invalid("parallel", e.to_string()))?;
    pool.install(|| {
        kz_values
            .par_iter()
            .map(|&kz| optimize_beta_with(&KerrScenario::new(alpha, kz)?, config, None))
            .collect()
    })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
