//! Wigner quasiprobability of Fock-basis pure states.
//!
//! With `rho = |psi><psi|` and parity `P = (-1)^n`,
//! `W(a) = (2/pi) Tr[rho D(2a) P]`. Splitting the double sum into bands of
//! the displacement matrix gives
//!
//! ```text
//! W(a) = (2/pi) sum_j (-1)^j [ |c_j|^2 R0_j + 2 sum_k Re(c_j c*_{j+k} e^{i k phi}) Rk_j ]
//! ```
//!
//! where `Rk_j = <j+k|D(r)|j>` for `r = 2|a|`, `phi = arg a`. The band values
//! come from the scaled recurrence in [`crate::laguerre`], which folds the
//! `e^{-r^2/2}` prefactor and the factorial ratios into one normalized
//! sequence. The conjugate pair is summed in closed form, so the values are
//! real by construction.

use std::f64::consts::FRAC_2_PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fock::{field_moment, FockState};
use crate::laguerre::BandCoefficients;

pub use crate::laguerre::{laguerre_assoc, Scaled};

/// Largest `n_trunc` accepted for rendering.
pub const MAX_WIGNER_DIM: usize = 400;
pub const DEFAULT_HALF_WIDTH: f64 = 6.0;
pub const DEFAULT_RESOLUTION: usize = 201;

/// Amplitudes below this magnitude (relative to the largest) are dropped.
const NEGLIGIBLE: f64 = 1e-10;

/// Rectangular phase-space window, `x = Re a`, `y = Im a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    /// Points per axis, endpoints included.
    pub resolution: usize,
}

impl GridSpec {
    pub fn new(x_range: (f64, f64), y_range: (f64, f64), resolution: usize) -> Result<Self> {
        let spec = Self {
            x_range,
            y_range,
            resolution,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Square window of half-width `half_width` around `center`.
    pub fn centered(center: Complex64, half_width: f64, resolution: usize) -> Result<Self> {
        Self::new(
            (center.re - half_width, center.re + half_width),
            (center.im - half_width, center.im + half_width),
            resolution,
        )
    }

    /// Default window: half-width 6 around `<a>`, 201 points per axis.
    pub fn around_mean(state: &FockState) -> Result<Self> {
        let mean = field_moment(state, 0, 1)?;
        Self::centered(mean, DEFAULT_HALF_WIDTH, DEFAULT_RESOLUTION)
    }

    /// Bounding box of the state's support plus `margin` on every side.
    ///
    /// The support is traced by the points `sqrt(n + 1/2) e^{i arg(c_n c*_{n-1})}`
    /// over the photon numbers carrying weight. Needed for strongly sheared
    /// states, whose crescent outgrows the default window.
    pub fn covering(state: &FockState, margin: f64, resolution: usize) -> Result<Self> {
        if !(margin.is_finite() && margin >= 0.0) {
            return Err(invalid("margin", "must be finite and non-negative"));
        }
        let c = state.amplitudes();
        let mut points = Vec::new();
        if c[0].norm_sqr() >= 1e-12 {
            points.push(Complex64::new(0.0, 0.0));
        }
        for n in 1..c.len() {
            if c[n].norm_sqr() < 1e-12 {
                continue;
            }
            let radius = (n as f64 + 0.5).sqrt();
            let pair = c[n] * c[n - 1].conj();
            if pair.norm() > 0.0 {
                points.push(pair / pair.norm() * radius);
            } else {
                // no phase reference, cover the whole ring
                points.push(Complex64::new(radius, radius));
                points.push(Complex64::new(-radius, -radius));
            }
        }
        if points.is_empty() {
            points.push(Complex64::new(0.0, 0.0));
        }
        let x0 = points.iter().map(|p| p.re).fold(f64::MAX, f64::min);
        let x1 = points.iter().map(|p| p.re).fold(f64::MIN, f64::max);
        let y0 = points.iter().map(|p| p.im).fold(f64::MAX, f64::min);
        let y1 = points.iter().map(|p| p.im).fold(f64::MIN, f64::max);
        Self::new(
            (x0 - margin, x1 + margin),
            (y0 - margin, y1 + margin),
            resolution,
        )
    }

    fn validate(&self) -> Result<()> {
        for (name, (lo, hi)) in [("x_range", self.x_range), ("y_range", self.y_range)] {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(invalid(
                    name,
                    format!("need finite lo < hi, got ({lo}, {hi})"),
                ));
            }
        }
        if self.resolution < 2 {
            return Err(invalid("resolution", "need at least 2 points per axis"));
        }
        Ok(())
    }

    pub fn x_step(&self) -> f64 {
        (self.x_range.1 - self.x_range.0) / (self.resolution - 1) as f64
    }

    pub fn y_step(&self) -> f64 {
        (self.y_range.1 - self.y_range.0) / (self.resolution - 1) as f64
    }

    pub fn x_at(&self, i: usize) -> f64 {
        self.x_range.0 + i as f64 * self.x_step()
    }

    pub fn y_at(&self, j: usize) -> f64 {
        self.y_range.0 + j as f64 * self.y_step()
    }
}

/// Wigner values on a grid, row-major with `values[j][i] = W(x_i + i y_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WignerGrid {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub resolution: usize,
    pub values: Vec<Vec<f64>>,
}

impl WignerGrid {
    pub fn spec(&self) -> GridSpec {
        GridSpec {
            x_range: self.x_range,
            y_range: self.y_range,
            resolution: self.resolution,
        }
    }

    /// Riemann sum of `W dx dy`.
    pub fn integral(&self) -> f64 {
        let spec = self.spec();
        let total: f64 = self.values.iter().flatten().sum();
        total * spec.x_step() * spec.y_step()
    }

    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `(x_i, sum_j W(x_i, y_j) dy)`, the distribution of the `Re a` quadrature.
    pub fn marginal(&self) -> Vec<(f64, f64)> {
        let spec = self.spec();
        let dy = spec.y_step();
        (0..self.resolution)
            .map(|i| {
                let s: f64 = self.values.iter().map(|row| row[i]).sum();
                (spec.x_at(i), s * dy)
            })
            .collect()
    }

    /// Grid point closest to the maximum of `W`.
    pub fn argmax(&self) -> Complex64 {
        let spec = self.spec();
        let mut best = (f64::MIN, 0, 0);
        for (j, row) in self.values.iter().enumerate() {
            for (i, &v) in row.iter().enumerate() {
                if v > best.0 {
                    best = (v, i, j);
                }
            }
        }
        Complex64::new(spec.x_at(best.1), spec.y_at(best.2))
    }
}

/// State amplitudes reduced to the levels that matter, with the bands to sum.
struct Kernel {
    amplitudes: Vec<Complex64>,
    /// Highest band with a non-negligible coherence.
    max_band: usize,
    coefficients: BandCoefficients,
}

impl Kernel {
    fn new(state: &FockState) -> Result<Self> {
        if state.n_trunc() > MAX_WIGNER_DIM {
            return Err(Error::StateTooLarge {
                dim: state.n_trunc(),
                max: MAX_WIGNER_DIM,
            });
        }
        let c = state.amplitudes();
        let peak = c.iter().fold(0.0f64, |m, a| m.max(a.norm()));
        let cut = NEGLIGIBLE * peak;
        let significant: Vec<usize> = (0..c.len()).filter(|&n| c[n].norm() > cut).collect();
        let last = *significant.last().unwrap_or(&0);
        let first = *significant.first().unwrap_or(&0);
        let amplitudes = c[..=last].to_vec();
        let max_band = last - first;
        Ok(Self {
            coefficients: BandCoefficients::new(amplitudes.len()),
            amplitudes,
            max_band,
        })
    }

    fn eval(&self, point: Complex64, band: &mut [f64]) -> f64 {
        let c = &self.amplitudes;
        let dim = c.len();
        let r = 2.0 * point.norm();
        let phi = point.arg();
        let mut sum = 0.0;

        self.coefficients.fill_band(r, 0, &mut band[..dim]);
        for j in 0..dim {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * c[j].norm_sqr() * band[j];
        }

        let step = Complex64::from_polar(1.0, phi);
        let mut phase = Complex64::new(1.0, 0.0);
        for k in 1..=self.max_band.min(dim - 1) {
            phase *= step;
            let len = dim - k;
            self.coefficients.fill_band(r, k, &mut band[..len]);
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..len {
                let term = c[j] * c[j + k].conj() * band[j];
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            sum += 2.0 * (acc * phase).re;
        }
        FRAC_2_PI * sum
    }
}

/// `W(point)` for a single phase-space point.
pub fn wigner_at(state: &FockState, point: Complex64) -> Result<f64> {
    let kernel = Kernel::new(state)?;
    let mut band = vec![0.0; kernel.amplitudes.len()];
    let w = kernel.eval(point, &mut band);
    if !w.is_finite() {
        return Err(Error::NumericalOverflow("wigner"));
    }
    Ok(w)
}

/// Evaluates `W` on every grid point; rows are computed in parallel.
pub fn wigner(state: &FockState, grid: &GridSpec) -> Result<WignerGrid> {
    grid.validate()?;
    let kernel = Kernel::new(state)?;
    let dim = kernel.amplitudes.len();
    let values: Vec<Vec<f64>> = (0..grid.resolution)
        .into_par_iter()
        .map_init(
            || vec![0.0; dim],
            |band, j| {
                let y = grid.y_at(j);
                (0..grid.resolution)
                    .map(|i| kernel.eval(Complex64::new(grid.x_at(i), y), band))
                    .collect()
            },
        )
        .collect();
    if values.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::NumericalOverflow("wigner"));
    }
    Ok(WignerGrid {
        x_range: grid.x_range,
        y_range: grid.y_range,
        resolution: grid.resolution,
        values,
    })
}
