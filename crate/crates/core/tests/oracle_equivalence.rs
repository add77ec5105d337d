//! The closed-form Fano factor against brute-force Fock-space evolution.

use kerr_noise::approx::kz_app;
use kerr_noise::optimize::beta_scale;
use kerr_noise::{
    closed_form_moment, coherent_state, displace, fano_displaced, field_moment, kerr_evolve,
    photon_statistics, Complex64, DisplacementSetting, KerrScenario,
};
use proptest::prelude::*;

fn fock_fano(alpha: Complex64, kz: f64, beta: Complex64) -> (f64, f64, f64) {
    let scenario = KerrScenario::new(alpha, kz).unwrap();
    let setting = DisplacementSetting::unit(beta);
    let state = kerr_evolve(&coherent_state(alpha, 1e-14).unwrap(), kz).unwrap();
    let shifted = displace(&state, setting.shift_amplitude(&scenario)).unwrap();
    let r = photon_statistics(&shifted).unwrap();
    (r.fano, r.mean_photon, r.variance)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn analytic_matches_fock(
        a in 0.5f64..30.0,
        phase in -3.2f64..3.2,
        kz_frac in 0.0f64..3.0,
        b_frac in 0.0f64..3.0,
        b_angle in -3.2f64..3.2,
    ) {
        let alpha = Complex64::from_polar(a, phase);
        let kz = kz_frac * kz_app(a * a);
        let beta = Complex64::from_polar(b_frac * beta_scale(a), b_angle);
        let scenario = KerrScenario::new(alpha, kz).unwrap();
        let analytic = fano_displaced(&scenario, &DisplacementSetting::unit(beta)).unwrap();
        let (fano, mean, variance) = fock_fano(alpha, kz, beta);
        prop_assert!((analytic.fano - fano).abs() < 1e-6, "F {} vs {}", analytic.fano, fano);
        prop_assert!((analytic.mean_photon / mean - 1.0).abs() < 1e-9);
        prop_assert!((analytic.variance - variance).abs() < 1e-6 * mean);
    }
}

#[test]
fn table_point_alpha_10() {
    // optimum from Table 1 conditions
    let alpha = Complex64::new(10.0, 0.0);
    let s = KerrScenario::new(alpha, 0.0218).unwrap();
    let opt = kerr_noise::optimize_beta(&s).unwrap();
    let (fano, mean, _) = fock_fano(alpha, 0.0218, opt.beta_opt);
    assert!((fano - opt.fano_min).abs() < 1e-9);
    assert!((mean - opt.mean_photon).abs() < 1e-8 * mean);
}

#[test]
fn moments_of_evolved_state() {
    for (a, kz) in [(3.0, 0.05), (6.5, 0.011), (12.0, 0.3)] {
        let alpha = Complex64::from_polar(a, 0.4);
        let scenario = KerrScenario::new(alpha, kz).unwrap();
        let state = kerr_evolve(&coherent_state(alpha, 1e-14).unwrap(), kz).unwrap();
        for (k, l) in [(0, 1), (1, 1), (0, 2), (1, 2), (2, 2), (0, 4), (1, 3)] {
            let fock = field_moment(&state, k, l).unwrap();
            let closed = closed_form_moment(&scenario, k as u32, l as u32);
            // cancelled moments are judged against the size of the summed terms
            let scale = closed.norm().max(a.powi((k + l) as i32) * 1e-3);
            assert!(
                (fock - closed).norm() < 1e-9 * scale,
                "({k},{l}) a={a}: {fock} vs {closed}"
            );
        }
    }
}

#[test]
fn large_kz_cat_regime() {
    // Far past the operating range the formula still matches the state.
    let alpha = Complex64::new(4.0, 0.0);
    for kz in [0.5, std::f64::consts::FRAC_PI_4, 1.3] {
        let beta = Complex64::new(0.2, -0.1);
        let s = KerrScenario::new(alpha, kz).unwrap();
        let analytic = fano_displaced(&s, &DisplacementSetting::unit(beta)).unwrap();
        let (fano, _, _) = fock_fano(alpha, kz, beta);
        assert!((analytic.fano - fano).abs() < 1e-9);
    }
}
