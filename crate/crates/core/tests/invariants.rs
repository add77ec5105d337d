use std::f64::consts::FRAC_2_PI;

use kerr_noise::approx::{f1_short, f2_near_opt, f_min_approx, f_piecewise, kz_app, kz_opt_approx};
use kerr_noise::optimize::simplex::{nelder_mead, SimplexOptions};
use kerr_noise::optimize::{beta_scale, optimize_beta_with, rayleigh_lower_bound, OptimizerConfig};
use kerr_noise::waveguide::{
    alpha_from_power, fano_floor_physical, gamma, kerr_coupling, BeamSpec, WaveguideSpec,
};
use kerr_noise::wigner::{wigner, GridSpec};
use kerr_noise::{
    coherent_state, displace, fano_displaced, field_moment, kerr_evolve, kerr_evolve_with,
    mean_field, optimize_beta, optimize_length, photon_distribution, photon_statistics, to_db,
    Complex64, DisplacementSetting, FockState, KerrHamiltonian, KerrScenario,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn kerr_state(a: f64, kz: f64) -> FockState {
    kerr_evolve(&coherent_state(c(a, 0.0), 1e-14).unwrap(), kz).unwrap()
}

#[test]
fn operations_preserve_norm() {
    let coh = coherent_state(c(7.0, -2.0), 1e-12).unwrap();
    assert!(coh.is_normalized());
    let evolved = kerr_evolve(&coh, 0.013).unwrap();
    assert!(evolved.is_normalized());
    let shifted = displace(&evolved, c(-0.8, 1.1)).unwrap();
    assert!(shifted.is_normalized());
    assert!(shifted.tail_mass() < 1e-12);
}

#[test]
fn kerr_phases_leave_distribution_unchanged() {
    let coh = coherent_state(c(5.0, 1.0), 1e-12).unwrap();
    for kz in [0.0, 0.02, 1.7, 40.0] {
        for h in [
            KerrHamiltonian::NumberSquared,
            KerrHamiltonian::NormalOrdered,
        ] {
            let evolved = kerr_evolve_with(&coh, kz, h).unwrap();
            // |e^{i phi} c|^2 can differ from |c|^2 in the last bit only
            for (p, q) in photon_distribution(&coh)
                .iter()
                .zip(photon_distribution(&evolved))
            {
                assert!((p - q).abs() <= 4.0 * f64::EPSILON * p);
            }
        }
    }
}

#[test]
fn displacement_round_trip() {
    let state = kerr_state(4.0, 0.07);
    for delta in [c(2.0, 0.0), c(-1.2, 1.5), c(0.0, -2.0), c(0.3, 0.1)] {
        let there = displace(&state, delta).unwrap();
        let back = displace(&there, -delta).unwrap();
        assert!(state.fidelity(&back) >= 1.0 - 1e-9);
    }
}

#[test]
fn hamiltonian_variants_differ_by_rotation() {
    let a = 5.0;
    let kz = 0.03;
    let coh = coherent_state(c(a, 0.0), 1e-14).unwrap();
    let squared = kerr_evolve_with(&coh, kz, KerrHamiltonian::NumberSquared).unwrap();
    let ordered = kerr_evolve_with(&coh, kz, KerrHamiltonian::NormalOrdered).unwrap();
    let rotation = Complex64::from_polar(1.0, -kz);
    for (k, l) in [(0, 1), (0, 2), (1, 2), (2, 2)] {
        let m1 = field_moment(&squared, k, l).unwrap();
        let m2 = field_moment(&ordered, k, l).unwrap();
        let expected = m1 * rotation.powi(l as i32 - k as i32);
        assert!((m2 - expected).norm() < 1e-11 * m1.norm().max(1.0));
    }

    // minimize the Fock-space Fano factor of each output over the shift
    let fano_of = |state: &FockState| {
        let state = state.clone();
        move |x: &[f64]| {
            photon_statistics(&displace(&state, c(x[0], x[1])).unwrap())
                .unwrap()
                .fano
        }
    };
    let s = KerrScenario::real(a, kz).unwrap();
    let start = DisplacementSetting::unit(optimize_beta(&s).unwrap().beta_opt).shift_amplitude(&s);
    let opts = SimplexOptions {
        ftol: 1e-13,
        xtol: 1e-9,
        max_iter: 4000,
    };
    let r1 = nelder_mead(
        fano_of(&squared),
        &[start.re, start.im],
        &[0.05, 0.05],
        &opts,
    );
    let rotated = start * rotation;
    let r2 = nelder_mead(
        fano_of(&ordered),
        &[rotated.re, rotated.im],
        &[0.05, 0.05],
        &opts,
    );
    assert!(r1.converged && r2.converged);
    assert!((r1.f - r2.f).abs() < 1e-8, "{} vs {}", r1.f, r2.f);
}

#[test]
fn fano_is_one_without_shift_and_phase_covariant() {
    for (a, kz) in [(3.0, 0.1), (30.0, 0.002), (100.0, 0.0009)] {
        let s = KerrScenario::real(a, kz).unwrap();
        let zero = fano_displaced(&s, &DisplacementSetting::unit(c(0.0, 0.0))).unwrap();
        assert!((zero.fano - 1.0).abs() < 1e-12);
        let beta = c(0.01, -0.03);
        let base = fano_displaced(&s, &DisplacementSetting::unit(beta)).unwrap();
        for theta in [0.3, -2.0, 3.1] {
            let r = KerrScenario::new(Complex64::from_polar(a, theta), kz).unwrap();
            let rot = fano_displaced(&r, &DisplacementSetting::unit(beta)).unwrap();
            assert!((rot.fano - base.fano).abs() < 1e-12);
            assert!(rot.mean_photon >= 0.0 && rot.variance >= 0.0);
        }
    }
}

#[test]
fn optimized_fano_bounds() {
    let cfg = OptimizerConfig::default();
    for a in [10.0, 30.0, 50.0, 100.0] {
        for frac in [0.01, 0.1, 0.5, 1.0, 1.5, 2.0] {
            let s = KerrScenario::real(a, frac * kz_opt_approx(a)).unwrap();
            let opt = optimize_beta_with(&s, &cfg, None).unwrap();
            assert!(opt.fano_min < 1.0);
            let bound = rayleigh_lower_bound(&s).unwrap();
            assert!(
                bound <= opt.fano_min + 1e-9,
                "a={a} kz={}: {bound} > {}",
                s.kz,
                opt.fano_min
            );
        }
    }
}

#[test]
fn optimal_shift_is_roughly_perpendicular() {
    for a in [10.0, 30.0, 50.0, 100.0] {
        let opt = optimize_length(c(a, 0.0)).unwrap();
        let s = KerrScenario::real(a, opt.kz).unwrap();
        let shift = DisplacementSetting::unit(opt.beta_opt).shift_amplitude(&s);
        let mean = mean_field(&s);
        let cos = (shift.arg() - mean.arg()).cos();
        assert!(cos.abs() < 0.35, "a={a}: cos = {cos}");
    }
}

#[test]
fn optimum_scaling_bands() {
    for a in [10.0, 20.0, 40.0, 70.0, 100.0] {
        let opt = optimize_length(c(a, 0.0)).unwrap();
        let scale = a.powf(4.0 / 3.0);
        assert!((0.43..=0.53).contains(&(opt.kz * scale)));
        assert!((0.37..=0.46).contains(&(opt.fano_min * scale)));
    }
}

#[test]
fn short_length_formula_decreases() {
    let a2 = 900.0;
    let top = 2.0 / a2;
    let mut prev = f1_short(a2, 0.0);
    for i in 1..=200 {
        let v = f1_short(a2, top * i as f64 / 200.0);
        assert!(v < prev);
        prev = v;
    }
}

#[test]
fn near_optimum_formula_is_convex_with_stated_minimum() {
    for a in [3.0, 10.0, 50.0, 1e3, 1e5] {
        let a2 = a * a;
        let opt = kz_opt_approx(a);
        // f2' = (32/3) A^2 kz^3 - 1 / (8 A^2 kz^3) vanishes at the optimum
        let grad = 32.0 / 3.0 * a2 * a2 * opt.powi(3) - 1.0 / (8.0 * a2 * a2 * opt.powi(3));
        let term = 32.0 / 3.0 * a2 * a2 * opt.powi(3);
        assert!((grad / term).abs() < 1e-12);
        let fmin = f2_near_opt(a2, opt).unwrap();
        assert!((fmin / f_min_approx(a) - 1.0).abs() < 1e-12);
        for h in [1e-3, 1e-2, 0.2] {
            let left = f2_near_opt(a2, opt * (1.0 - h)).unwrap();
            let right = f2_near_opt(a2, opt * (1.0 + h)).unwrap();
            assert!(left > fmin && right > fmin);
            assert!(left + right > 2.0 * fmin);
        }
    }
    assert!((kz_opt_approx(1.0) - (3f64 / 256.0).powf(1.0 / 6.0)).abs() < 1e-12);
    assert!((f_min_approx(1.0) - 0.25 * (4.5f64).powf(1.0 / 3.0)).abs() < 1e-12);
}

#[test]
fn piecewise_tracks_numeric_optimum() {
    let cfg = OptimizerConfig::default();
    for a in [30.0, 50.0, 100.0] {
        let top = 2.0 * kz_opt_approx(a);
        let mut worst: f64 = 0.0;
        for i in 1..=40 {
            let kz = top * i as f64 / 40.0;
            let s = KerrScenario::real(a, kz).unwrap();
            let numeric = optimize_beta_with(&s, &cfg, None).unwrap().suppression_db;
            let approx = to_db(f_piecewise(a, kz).unwrap().value);
            worst = worst.max((numeric - approx).abs());
        }
        assert!(worst < 1.0, "a={a}: {worst} dB");
        assert!(kz_app(a * a) < top);
    }
}

#[test]
fn waveguide_identities() {
    let wg = WaveguideSpec::si3n4();
    for (p, df) in [(1e-3, 1e6), (0.01, 3e7), (0.1, 1e8), (2.0, 5e5)] {
        let beam = BeamSpec::new(p, df).unwrap();
        let a = alpha_from_power(&beam, &wg);
        let lhs = 2.0 * a * a * kerr_coupling(&wg, &beam);
        assert!((lhs / (gamma(&wg) * p) - 1.0).abs() < 1e-12);
        let direct = 10.0 * (0.25 * (3.0 / (2f64.sqrt() * a * a)).powf(2.0 / 3.0)).log10();
        assert!((fano_floor_physical(&wg, &beam) - direct).abs() < 1e-12 * direct.abs());
    }
}

#[test]
fn seed_scale_tracks_table_shifts() {
    for (a, beta) in [
        (10.0, 0.123),
        (30.0, 0.0569),
        (50.0, 0.0401),
        (100.0, 0.0253),
    ] {
        let ratio = beta_scale(a) / beta;
        assert!((0.8..1.25).contains(&ratio));
    }
}

#[test]
fn wigner_of_kerr_state() {
    let state = kerr_state(4.0, 0.05);
    let grid = GridSpec::covering(&state, 3.0, 161).unwrap();
    let w = wigner(&state, &grid).unwrap();
    assert!((w.integral() - 1.0).abs() < 1e-3);
    assert!(w.max_abs() <= FRAC_2_PI + 1e-9);
    let mass: f64 = w.marginal().iter().map(|(_, p)| p).sum::<f64>() * grid.x_step();
    assert!((mass - 1.0).abs() < 1e-3);
    assert!((mass - w.integral()).abs() < 1e-12);
}

#[test]
fn wigner_rotation_invariance_on_grids() {
    // Rotating the state so that <a> is real rotates its Wigner function rigidly.
    let state = kerr_state(3.0, 0.08);
    let phase = field_moment(&state, 0, 1).unwrap().arg();
    let aligned = state.rotated(-phase);
    let spec = GridSpec::centered(c(0.0, 0.0), 5.0, 41).unwrap();
    let w = wigner(&aligned, &spec).unwrap();
    let turn = Complex64::from_polar(1.0, phase);
    for j in (0..41).step_by(5) {
        for i in (0..41).step_by(5) {
            let p = c(spec.x_at(i), spec.y_at(j));
            let original = kerr_noise::wigner_at(&state, p * turn).unwrap();
            assert!((w.values[j][i] - original).abs() < 1e-6);
        }
    }
}
