//! Truncated photon-number representation of single-mode pure states.
//!
//! This is the brute-force side of every closed-form result in the crate:
//! coherent input, Kerr phase evolution, displacement and direct moment
//! sums over the amplitudes `c_n`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{invalid, Error, Result};
use crate::laguerre;
use crate::moments::FanoReport;

/// Largest `|alpha|` the Fock engine accepts by default.
pub const DEFAULT_MAX_AMPLITUDE: f64 = 200.0;
/// Default bound on discarded probability mass.
pub const DEFAULT_TRUNCATION_TOL: f64 = 1e-12;

const NORM_TOL: f64 = 1e-12;

/// Knobs for state construction and displacement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FockConfig {
    pub truncation_tol: f64,
    pub max_amplitude: f64,
}

impl Default for FockConfig {
    fn default() -> Self {
        Self {
            truncation_tol: DEFAULT_TRUNCATION_TOL,
            max_amplitude: DEFAULT_MAX_AMPLITUDE,
        }
    }
}

impl FockConfig {
    fn validate(&self) -> Result<()> {
        if !(self.truncation_tol > 0.0 && self.truncation_tol <= 1e-6) {
            return Err(invalid("tol", "truncation tolerance must lie in (0, 1e-6]"));
        }
        if !(self.max_amplitude > 0.0 && self.max_amplitude.is_finite()) {
            return Err(invalid("max_amplitude", "must be positive and finite"));
        }
        Ok(())
    }
}

/// Dimensionless Kerr problem: input amplitude and accumulated phase `K z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KerrScenario {
    pub alpha: Complex64,
    pub kz: f64,
}

impl KerrScenario {
    pub fn new(alpha: Complex64, kz: f64) -> Result<Self> {
        if !(alpha.re.is_finite() && alpha.im.is_finite()) {
            return Err(invalid("alpha", "must be finite"));
        }
        if !(kz.is_finite() && kz >= 0.0) {
            return Err(invalid("kz", format!("must be finite and >= 0, got {kz}")));
        }
        Ok(Self { alpha, kz })
    }

    /// Real positive input amplitude.
    pub fn real(alpha: f64, kz: f64) -> Result<Self> {
        Self::new(Complex64::new(alpha, 0.0), kz)
    }

    /// `|alpha|^2`, the mean input photon number.
    pub fn alpha_sq(&self) -> f64 {
        self.alpha.norm_sqr()
    }

    pub(crate) fn require_nonzero_alpha(&self) -> Result<()> {
        if self.alpha.norm() > 0.0 {
            Ok(())
        } else {
            Err(invalid("alpha", "|alpha| must be positive"))
        }
    }
}

/// Which form of the Kerr Hamiltonian generates the phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum KerrHamiltonian {
    /// Phases `e^{i kz n^2}`.
    #[default]
    NumberSquared,
    /// Phases `e^{i kz n(n-1)}`.
    NormalOrdered,
}

/// Pure state over photon numbers `0..=n_trunc`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    amplitudes: Vec<Complex64>,
    tail_mass: f64,
}

impl FockState {
    /// Builds a state from raw amplitudes, renormalizing them.
    ///
    /// `tail_mass` records probability known to be missing from the vector.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>, tail_mass: f64) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(invalid(
                "amplitudes",
                "need at least two levels (n_trunc >= 1)",
            ));
        }
        if !(tail_mass.is_finite() && tail_mass >= 0.0) {
            return Err(invalid("tail_mass", "must be finite and non-negative"));
        }
        let norm_sq: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if !(norm_sq.is_finite() && norm_sq > 0.0) {
            return Err(invalid("amplitudes", "norm must be positive and finite"));
        }
        let scale = norm_sq.sqrt().recip();
        let amplitudes = amplitudes.into_iter().map(|c| c * scale).collect();
        Ok(Self {
            amplitudes,
            tail_mass,
        })
    }

    /// The vacuum `|0>` on the smallest allowed basis.
    pub fn vacuum() -> Self {
        Self {
            amplitudes: vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            tail_mass: 0.0,
        }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Highest photon number represented.
    pub fn n_trunc(&self) -> usize {
        self.amplitudes.len() - 1
    }

    /// Probability mass discarded while building this state.
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Unit norm to within `1e-12`.
    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOL
    }

    /// `|<self|other>|^2` over the common basis.
    pub fn fidelity(&self, other: &FockState) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm_sqr()
    }

    /// Applies `e^{i theta n}`, a rigid phase-space rotation.
    pub fn rotated(&self, theta: f64) -> FockState {
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(n, c)| c * Complex64::from_polar(1.0, theta * n as f64))
            .collect();
        FockState {
            amplitudes,
            tail_mass: self.tail_mass,
        }
    }
}

/// Coherent state `|alpha>` with tail mass below `tol`.
pub fn coherent_state(alpha: Complex64, tol: f64) -> Result<FockState> {
    coherent_state_with(
        alpha,
        &FockConfig {
            truncation_tol: tol,
            ..FockConfig::default()
        },
    )
}

pub fn coherent_state_with(alpha: Complex64, config: &FockConfig) -> Result<FockState> {
    config.validate()?;
    let r = alpha.norm();
    if !r.is_finite() {
        return Err(invalid("alpha", "must be finite"));
    }
    if r > config.max_amplitude {
        return Err(Error::AmplitudeTooLarge {
            alpha: r,
            max: config.max_amplitude,
        });
    }
    if r == 0.0 {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 21];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        return Ok(FockState {
            amplitudes,
            tail_mass: 0.0,
        });
    }

    let mean = r * r;
    let initial = (mean + 10.0 * r + 20.0).ceil() as usize;
    let cap = 2 * initial + 200;
    let step = (r + 10.0).ceil() as usize;
    let mut n_trunc = initial;
    let mut tail = poisson_tail(mean, n_trunc);
    while tail >= config.truncation_tol {
        if n_trunc >= cap {
            return Err(Error::TruncationUnachievable {
                tail,
                tol: config.truncation_tol,
                dim: n_trunc + 1,
            });
        }
        n_trunc = (n_trunc + step).min(cap);
        tail = poisson_tail(mean, n_trunc);
    }

    let ln_r = r.ln();
    let theta = alpha.arg();
    let amplitudes: Vec<Complex64> = (0..=n_trunc)
        .map(|n| {
            let nf = n as f64;
            let ln_mag = -0.5 * mean + nf * ln_r - 0.5 * ln_gamma(nf + 1.0);
            Complex64::from_polar(ln_mag.exp(), theta * nf)
        })
        .collect();
    FockState::from_amplitudes(amplitudes, tail)
}

/// `sum_{n > n_trunc} e^{-mean} mean^n / n!`, summed term by term.
fn poisson_tail(mean: f64, n_trunc: usize) -> f64 {
    let ln_mean = mean.ln();
    let mut n = n_trunc + 1;
    let mut ln_term = -mean + n as f64 * ln_mean - ln_gamma(n as f64 + 1.0);
    let mut sum = 0.0;
    loop {
        let term = ln_term.exp();
        sum += term;
        if term <= sum * 1e-17 || term < 1e-320 || n > n_trunc + 100_000 {
            break;
        }
        n += 1;
        ln_term += ln_mean - (n as f64).ln();
    }
    sum
}

/// Kerr phase evolution `c_n -> e^{i kz n^2} c_n`.
pub fn kerr_evolve(state: &FockState, kz: f64) -> Result<FockState> {
    kerr_evolve_with(state, kz, KerrHamiltonian::NumberSquared)
}

pub fn kerr_evolve_with(
    state: &FockState,
    kz: f64,
    hamiltonian: KerrHamiltonian,
) -> Result<FockState> {
    if !kz.is_finite() {
        return Err(invalid("kz", "must be finite"));
    }
    let amplitudes = state
        .amplitudes
        .iter()
        .enumerate()
        .map(|(n, c)| {
            let nf = n as f64;
            let exponent = match hamiltonian {
                KerrHamiltonian::NumberSquared => nf * nf,
                KerrHamiltonian::NormalOrdered => nf * (nf - 1.0),
            };
            c * Complex64::from_polar(1.0, kz * exponent)
        })
        .collect();
    Ok(FockState {
        amplitudes,
        tail_mass: state.tail_mass,
    })
}

/// Applies the displacement operator `D(delta)` with the default tolerance.
pub fn displace(state: &FockState, delta: Complex64) -> Result<FockState> {
    displace_with(state, delta, &FockConfig::default())
}

/// Applies `D(delta)` using closed-form matrix elements.
///
/// The basis grows by `ceil(10(|delta| + 1))` levels; if the mass pushed past
/// the new edge still exceeds the tolerance, the extension is widened and the
/// product recomputed. The result is renormalized and the lost mass added to
/// `tail_mass`.
pub fn displace_with(
    state: &FockState,
    delta: Complex64,
    config: &FockConfig,
) -> Result<FockState> {
    config.validate()?;
    if !(delta.re.is_finite() && delta.im.is_finite()) {
        return Err(invalid("delta", "must be finite"));
    }
    if delta.norm() == 0.0 {
        return Ok(state.clone());
    }
    let r = delta.norm();
    let n_in = state.amplitudes.len();
    let headroom = (2.0 * r * (n_in as f64).sqrt() + r * r).ceil() as usize;
    let mut extension = (10.0 * (r + 1.0)).ceil() as usize;
    let mut last = f64::INFINITY;
    for _ in 0..8 {
        let out = displaced_amplitudes(&state.amplitudes, delta, n_in + extension);
        let norm_sq: f64 = out.iter().map(|c| c.norm_sqr()).sum();
        if !norm_sq.is_finite() {
            return Err(Error::NumericalOverflow("displacement"));
        }
        let defect = (1.0 - norm_sq).max(0.0);
        // A defect that no longer shrinks with the basis is rounding, not truncation.
        if defect < config.truncation_tol || last - defect < 1e-3 * config.truncation_tol {
            return FockState::from_amplitudes(out, state.tail_mass + defect);
        }
        last = defect;
        extension = 2 * extension + headroom;
    }
    Err(Error::TruncationUnachievable {
        tail: last,
        tol: config.truncation_tol,
        dim: n_in + extension,
    })
}

fn displaced_amplitudes(amps: &[Complex64], delta: Complex64, out_dim: usize) -> Vec<Complex64> {
    let r = delta.norm();
    let phi = delta.arg();
    let n_in = amps.len();
    let mut out = vec![Complex64::new(0.0, 0.0); out_dim];
    let mut band = vec![0.0; n_in.max(out_dim)];

    // <j+k|D|j>, k >= 0
    for k in 0..out_dim {
        let len = n_in.min(out_dim - k);
        if len == 0 {
            break;
        }
        let band = &mut band[..len];
        laguerre::fill_band(r, k, band);
        let phase = Complex64::from_polar(1.0, k as f64 * phi);
        for (j, (&d, &c)) in band.iter().zip(&amps[..len]).enumerate() {
            out[j + k] += phase * (c * d);
        }
    }
    // <j|D|j+k> = (-1)^k e^{-ik phi} <j+k|D(|delta|)|j>, k >= 1
    for k in 1..n_in {
        let len = (n_in - k).min(out_dim);
        let band = &mut band[..len];
        laguerre::fill_band(r, k, band);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let phase = Complex64::from_polar(sign, -(k as f64) * phi);
        for (j, (&d, &c)) in band.iter().zip(&amps[k..k + len]).enumerate() {
            out[j] += phase * (c * d);
        }
    }
    out
}

/// Normally ordered moment `<a^dagger^k a^l>` by direct summation.
pub fn field_moment(state: &FockState, k: usize, l: usize) -> Result<Complex64> {
    if k + l > 4 {
        return Err(Error::OrderTooHigh(k + l));
    }
    let c = &state.amplitudes;
    let n = c.len();
    let shift = k.max(l);
    let mut sum = Complex64::new(0.0, 0.0);
    for p in 0..n.saturating_sub(shift) {
        let pf = p as f64;
        let falling = |order: usize| (1..=order).map(|i| pf + i as f64).product::<f64>();
        let weight = (falling(k) * falling(l)).sqrt();
        sum += c[p + k].conj() * c[p + l] * weight;
    }
    Ok(sum)
}

/// Mean and variance of the photon number.
pub fn photon_moments(state: &FockState) -> (f64, f64) {
    let probs = photon_distribution(state);
    let mean: f64 = probs.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
    let variance: f64 = probs
        .iter()
        .enumerate()
        .map(|(n, p)| {
            let d = n as f64 - mean;
            d * d * p
        })
        .sum();
    (mean, variance)
}

/// Mean, variance, Fano factor and Mandel Q of the photon number.
pub fn photon_statistics(state: &FockState) -> Result<FanoReport> {
    let (mean, variance) = photon_moments(state);
    FanoReport::from_moments(mean, variance)
}

/// `|c_n|^2` for `n = 0..=n_trunc`.
pub fn photon_distribution(state: &FockState) -> Vec<f64> {
    state.amplitudes.iter().map(|c| c.norm_sqr()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn vacuum_from_zero_amplitude() {
        let s = coherent_state(c(0.0, 0.0), 1e-12).unwrap();
        assert_eq!(s.amplitudes()[0], c(1.0, 0.0));
        assert!(s.amplitudes()[1..].iter().all(|a| a.norm() == 0.0));
        assert!(s.n_trunc() >= 1);
    }

    #[test]
    fn coherent_is_poissonian() {
        let s = coherent_state(c(2.0, 0.0), 1e-12).unwrap();
        let (mean, var) = photon_moments(&s);
        assert!((mean - 4.0).abs() < 1e-12);
        assert!((var - 4.0).abs() < 1e-11);
        assert!(s.is_normalized());
    }

    #[test]
    fn coherent_tail_mass_matches_poisson() {
        let s = coherent_state(c(10.0, 0.0), 1e-12).unwrap();
        let p = photon_distribution(&s);
        // Poisson(100) survival function: P(n > 160), P(n > 180)
        let beyond_160: f64 = p[161..].iter().sum();
        assert!(
            (beyond_160 / 1.2616638117763816e-08 - 1.0).abs() < 1e-6,
            "{beyond_160:e}"
        );
        let head: f64 = p.iter().take(181).sum();
        assert!(head >= 1.0 - 1e-12);
        assert!(s.tail_mass() < 1e-12);
    }

    #[test]
    fn large_amplitude_is_refused() {
        let err = coherent_state(c(201.0, 0.0), 1e-12).unwrap_err();
        assert!(matches!(err, Error::AmplitudeTooLarge { .. }));
    }

    #[test]
    fn tolerance_out_of_range_is_refused() {
        assert!(coherent_state(c(1.0, 0.0), 1e-3).is_err());
        assert!(coherent_state(c(1.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn tiny_tolerance_extends_basis() {
        let loose = coherent_state(c(3.0, 0.0), 1e-6).unwrap();
        let tight = coherent_state(c(3.0, 0.0), 1e-200).unwrap();
        assert!(tight.n_trunc() > loose.n_trunc());
        assert!(tight.tail_mass() < 1e-200);
    }

    #[test]
    fn kerr_zero_is_identity() {
        let s = coherent_state(c(1.5, 0.7), 1e-12).unwrap();
        assert_eq!(kerr_evolve(&s, 0.0).unwrap(), s);
    }

    #[test]
    fn kerr_keeps_distribution() {
        let s = coherent_state(c(3.0, -1.0), 1e-12).unwrap();
        let e = kerr_evolve(&s, 0.37).unwrap();
        let a = photon_distribution(&s);
        let b = photon_distribution(&e);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() <= 1e-15 * x.max(1e-300));
        }
        assert!(kerr_evolve(&s, f64::NAN).is_err());
    }

    #[test]
    fn displaced_vacuum_is_coherent() {
        let delta = c(1.2, -0.8);
        let d = displace(&FockState::vacuum(), delta).unwrap();
        let want = coherent_state(delta, 1e-12).unwrap();
        let n = d.amplitudes().len().min(want.amplitudes().len());
        for k in 0..n {
            let err = (d.amplitudes()[k] - want.amplitudes()[k]).norm();
            assert!(err < 1e-10, "n={k}: {err}");
        }
    }

    #[test]
    fn zero_displacement_is_identity() {
        let s = coherent_state(c(2.0, 1.0), 1e-12).unwrap();
        assert_eq!(displace(&s, c(0.0, 0.0)).unwrap(), s);
    }

    #[test]
    fn displacement_round_trip() {
        let s = kerr_evolve(&coherent_state(c(4.0, 0.0), 1e-12).unwrap(), 0.05).unwrap();
        let delta = c(0.9, 1.6);
        let there = displace(&s, delta).unwrap();
        let back = displace(&there, -delta).unwrap();
        assert!(s.fidelity(&back) >= 1.0 - 1e-9);
        assert!(back.is_normalized());
    }

    #[test]
    fn moments_of_coherent_state() {
        let alpha = c(1.7, -0.4);
        let s = coherent_state(alpha, 1e-12).unwrap();
        let n = field_moment(&s, 1, 1).unwrap();
        assert!((n.re - alpha.norm_sqr()).abs() < 1e-12 && n.im.abs() < 1e-12);
        let a = field_moment(&s, 0, 1).unwrap();
        assert!((a - alpha).norm() < 1e-12);
        let ad = field_moment(&s, 1, 0).unwrap();
        assert!((ad - alpha.conj()).norm() < 1e-12);
        assert!(matches!(
            field_moment(&s, 3, 2),
            Err(Error::OrderTooHigh(5))
        ));
    }

    #[test]
    fn vacuum_statistics() {
        let (mean, var) = photon_moments(&FockState::vacuum());
        assert_eq!((mean, var), (0.0, 0.0));
        assert_eq!(
            photon_statistics(&FockState::vacuum()).unwrap_err(),
            Error::ZeroMeanPhoton
        );
        assert_eq!(photon_distribution(&FockState::vacuum())[..2], [1.0, 0.0]);
    }

    #[test]
    fn coherent_fano_is_one() {
        let s = coherent_state(c(10.0, 0.0), 1e-12).unwrap();
        let r = photon_statistics(&s).unwrap();
        assert!((r.fano - 1.0).abs() < 1e-10);
    }

    #[test]
    fn coherent_distribution_is_poisson() {
        let s = coherent_state(c(3.0, 0.0), 1e-12).unwrap();
        let p = photon_distribution(&s);
        let mut want = (-9.0f64).exp();
        for (n, &got) in p.iter().enumerate().take(40) {
            if n > 0 {
                want *= 9.0 / n as f64;
            }
            assert!((got - want).abs() < 1e-14, "n={n}");
        }
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn from_amplitudes_validates() {
        assert!(FockState::from_amplitudes(vec![c(1.0, 0.0)], 0.0).is_err());
        assert!(FockState::from_amplitudes(vec![c(0.0, 0.0); 3], 0.0).is_err());
        let s = FockState::from_amplitudes(vec![c(3.0, 0.0), c(0.0, 4.0)], 0.0).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
    }
}
