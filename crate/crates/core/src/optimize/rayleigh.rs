//! Generalized-eigenvalue bound on the minimum of the Fano factor.
//!
//! `F(beta)` is a ratio of two real quadratic polynomials in `(Re beta, Im beta)`.
//! In homogeneous coordinates `v = (v0, x, y)`, `beta = (x + iy)/v0`, both become
//! quadratic forms and `F = v'Pv / v'Qv`. The smallest eigenvalue of the pencil
//! `(P, Q)` bounds `min F` from below, with equality when its eigenvector has
//! `v0 != 0`.

use nalgebra::{Matrix3, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::KerrScenario;
use crate::moments::KerrTerms;

/// The bound and, when attained at finite `beta`, the minimizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RayleighBound {
    pub value: f64,
    pub beta: Option<Complex64>,
}

/// Numerator and denominator forms `(P, Q)`.
pub fn quadratic_forms(scenario: &KerrScenario) -> (Matrix3<f64>, Matrix3<f64>) {
    let t = KerrTerms::new(scenario);
    let a = t.alpha_sq;
    let q = Matrix3::new(
        1.0, t.g1.re, t.g1.im, //
        t.g1.re, 1.0, 0.0, //
        t.g1.im, 0.0, 1.0,
    );
    let (ur, ui) = (t.linear.re, t.linear.im);
    let (wr, wi) = (t.quadratic.re, t.quadratic.im);
    let n = Matrix3::new(
        0.0,
        2.0 * ur,
        -2.0 * ui,
        2.0 * ur,
        2.0 * wr + 2.0 * t.radial,
        -2.0 * wi,
        -2.0 * ui,
        -2.0 * wi,
        -2.0 * wr + 2.0 * t.radial,
    );
    (q + n * a, q)
}

pub fn rayleigh_lower_bound(scenario: &KerrScenario) -> Result<f64> {
    rayleigh_bound(scenario).map(|b| b.value)
}

pub fn rayleigh_bound(scenario: &KerrScenario) -> Result<RayleighBound> {
    let (p, q) = quadratic_forms(scenario);
    if (p - q).abs().max() == 0.0 {
        // F is identically one.
        return Ok(RayleighBound {
            value: 1.0,
            beta: Some(Complex64::new(0.0, 0.0)),
        });
    }
    let chol = q.cholesky().ok_or(Error::SingularDenominatorForm)?;
    let l_inv = chol
        .l()
        .try_inverse()
        .ok_or(Error::SingularDenominatorForm)?;
    let c = l_inv * p * l_inv.transpose();
    let c = (c + c.transpose()) * 0.5;
    let eig = SymmetricEigen::new(c);
    let (idx, value) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or(Error::SingularDenominatorForm)?;
    let y = eig.eigenvectors.column(idx).into_owned();
    let v = l_inv.transpose() * y;
    let beta = if v[0].abs() > 1e-12 * v.norm() {
        Some(Complex64::new(v[1] / v[0], v[2] / v[0]))
    } else {
        None
    };
    Ok(RayleighBound { value, beta })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_kerr_phase_gives_one() {
        let s = KerrScenario::real(10.0, 0.0).unwrap();
        assert_eq!(rayleigh_lower_bound(&s).unwrap(), 1.0);
    }

    #[test]
    fn forms_reproduce_fano() {
        let s = KerrScenario::real(10.0, 0.0218).unwrap();
        let (p, q) = quadratic_forms(&s);
        let t = KerrTerms::new(&s);
        for beta in [Complex64::new(0.1, -0.3), Complex64::new(-0.02, -0.12)] {
            let v = nalgebra::Vector3::new(1.0, beta.re, beta.im);
            let ratio = v.dot(&(p * v)) / v.dot(&(q * v));
            assert!((ratio - t.fano_unchecked(beta)).abs() < 1e-12);
        }
    }

    #[test]
    fn minimizer_attains_bound() {
        let s = KerrScenario::real(30.0, 0.0051).unwrap();
        let b = rayleigh_bound(&s).unwrap();
        let beta = b.beta.unwrap();
        let f = KerrTerms::new(&s).fano_unchecked(beta);
        assert!(
            (f - b.value).abs() < 1e-10 * f.max(1e-3),
            "{f} vs {}",
            b.value
        );
    }
}
