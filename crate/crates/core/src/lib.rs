//! Photon-noise suppression with displaced Kerr states.
//!
//! A coherent state `|alpha>` passing through a Kerr medium of length `z`
//! becomes a crescent-shaped state with Poissonian photon statistics. Adding a
//! small coherent shift `alpha_S` rotates the crescent against the photon-number
//! axis and pushes the Fano factor far below one. This crate computes that
//! Fano factor exactly, optimizes the shift and the length, evaluates the
//! closed-form approximations, converts to waveguide units and renders Wigner
//! functions.
//!
//! ```
//! use kerr_noise::{fano_displaced, DisplacementSetting, KerrScenario};
//! use num_complex::Complex64;
//!
//! let s = KerrScenario::real(10.0, 0.0218).unwrap();
//! let r = fano_displaced(&s, &DisplacementSetting::unit(Complex64::new(0.0, 0.0))).unwrap();
//! assert!((r.fano - 1.0).abs() < 1e-12);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx;
pub mod error;
pub mod fock;
pub mod laguerre;
pub mod moments;
pub mod optimize;
pub mod reproduce;
pub mod waveguide;
pub mod wigner;

pub use approx::{
    f1_short, f2_near_opt, f_min_approx, f_piecewise, kz_app, kz_opt_approx, ApproxCurve,
    PiecewiseValue, Regime,
};
pub use error::{Error, Result};
pub use fock::{
    coherent_state, coherent_state_with, displace, displace_with, field_moment, kerr_evolve,
    kerr_evolve_with, photon_distribution, photon_moments, photon_statistics, FockConfig,
    FockState, KerrHamiltonian, KerrScenario,
};
pub use moments::{
    closed_form_moment, fano_displaced, from_db, g_factors, mean_field, to_db, DisplacementSetting,
    FanoReport,
};
pub use optimize::{
    optimize_beta, optimize_beta_with, optimize_length, optimize_length_with, rayleigh_bound,
    rayleigh_lower_bound, sweep_length, OptimizerConfig, Optimum,
};
pub use reproduce::{reproduce, Report, ReproduceOptions, Target};
pub use waveguide::{
    alpha_from_power, fano_floor_physical, gamma, kerr_coupling, length_for_suppression,
    nonlinear_phase, z_opt_physical, BeamSpec, LengthEstimate, WaveguideSpec,
};
pub use wigner::{laguerre_assoc, wigner, wigner_at, GridSpec, WignerGrid};

pub use num_complex::Complex64;
