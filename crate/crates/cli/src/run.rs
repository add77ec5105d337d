use kerr_noise::approx::{kz_opt_approx, Regime};
use kerr_noise::reproduce::{reproduce, Report, ReproduceOptions, Tolerance};
use kerr_noise::waveguide::{z_opt_from_coupling, REGIME_SWITCH_DB};
use kerr_noise::wigner::{GridSpec, DEFAULT_RESOLUTION};
use kerr_noise::{
    alpha_from_power, coherent_state_with, displace_with, fano_displaced, fano_floor_physical,
    field_moment, gamma, kerr_coupling, kerr_evolve, length_for_suppression, optimize_beta_with,
    optimize_length_with, photon_distribution, photon_statistics, sweep_length, wigner, BeamSpec,
    Complex64, DisplacementSetting, FockState, KerrScenario, Optimum, WaveguideSpec,
};
use serde_json::json;

use crate::artifact::{Artifact, Field, Table};
use crate::config::{Command, RunConfig, Spacing, Window};
use crate::error::CliError;

/// Runs one configured command. The second value is false when a
/// reproduction check missed its tolerance.
pub fn execute(config: &RunConfig) -> Result<(Artifact, bool), CliError> {
    config.validate()?;
    let artifact = match &config.command {
        Command::Fano {
            alpha,
            alpha_phase,
            kz,
            beta_re,
            beta_im,
            tau,
        } => fano(
            config,
            *alpha,
            *alpha_phase,
            *kz,
            Complex64::new(*beta_re, *beta_im),
            *tau,
        )?,
        Command::Optimize { alpha, kz } => optimize(config, *alpha, *kz)?,
        Command::SweepLength {
            alpha,
            kz_min,
            kz_max,
            points,
            spacing,
        } => sweep(config, *alpha, *kz_min, *kz_max, *points, *spacing)?,
        Command::Wigner { .. } => wigner_grid(config)?,
        Command::PhotonDist { alpha, kz, beta } => photon_dist(config, *alpha, *kz, *beta)?,
        Command::Design {
            power,
            spectral_width,
            target_db,
        } => design(config, *power, *spectral_width, *target_db)?,
        Command::Reproduce {
            target,
            sweep_points,
        } => {
            let options = ReproduceOptions {
                optimizer: config.tolerances.optimizer(),
                waveguide: config.resolved_waveguide()?,
                parallelism: config.parallelism,
                sweep_points: *sweep_points,
            };
            let report = reproduce(*target, &options)?;
            let pass = report.all_pass();
            return Ok((report_artifact(config, &report), pass));
        }
    };
    Ok((artifact, true))
}

fn real_alpha(alpha: f64) -> Result<Complex64, CliError> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(CliError::Validation(format!(
            "alpha: must be positive, got {alpha}"
        )));
    }
    Ok(Complex64::new(alpha, 0.0))
}

fn fano(
    config: &RunConfig,
    alpha: f64,
    phase: f64,
    kz: f64,
    beta: Complex64,
    tau: f64,
) -> Result<Artifact, CliError> {
    real_alpha(alpha)?;
    let scenario = KerrScenario::new(Complex64::from_polar(alpha, phase), kz)?;
    let setting = DisplacementSetting::new(tau, beta)?;
    let r = fano_displaced(&scenario, &setting)?;
    let mut table = Table::new(&[
        "alpha",
        "kz",
        "beta_re",
        "beta_im",
        "tau",
        "mean_photon",
        "variance",
        "fano",
        "mandel_q",
        "suppression_db",
    ]);
    table.push(vec![
        alpha.into(),
        kz.into(),
        beta.re.into(),
        beta.im.into(),
        tau.into(),
        r.mean_photon.into(),
        r.variance.into(),
        r.fano.into(),
        r.mandel_q.into(),
        r.suppression_db.into(),
    ]);
    Ok(Artifact::new(config, r, table).with_summary(vec![
        ("mean", r.mean_photon),
        ("variance", r.variance),
        ("F", r.fano),
        ("Q", r.mandel_q),
        ("dB", r.suppression_db),
    ]))
}

const OPTIMUM_COLUMNS: [&str; 8] = [
    "alpha",
    "kz",
    "beta_re",
    "beta_im",
    "beta_magnitude",
    "fano_min",
    "suppression_db",
    "mean_photon",
];

fn optimum_row(o: &Optimum) -> Vec<Field> {
    vec![
        o.alpha.into(),
        o.kz.into(),
        o.beta_opt.re.into(),
        o.beta_opt.im.into(),
        o.beta_magnitude.into(),
        o.fano_min.into(),
        o.suppression_db.into(),
        o.mean_photon.into(),
    ]
}

fn optimize(config: &RunConfig, alpha: f64, kz: Option<f64>) -> Result<Artifact, CliError> {
    let a = real_alpha(alpha)?;
    let opt_cfg = config.tolerances.optimizer();
    let o = match kz {
        Some(kz) => optimize_beta_with(&KerrScenario::new(a, kz)?, &opt_cfg, None)?,
        None => optimize_length_with(a, &opt_cfg)?,
    };
    let mut table = Table::new(&OPTIMUM_COLUMNS);
    table.push(optimum_row(&o));
    Ok(Artifact::new(config, o, table).with_summary(vec![
        ("beta_re", o.beta_opt.re),
        ("beta_im", o.beta_opt.im),
        ("|beta|", o.beta_magnitude),
        ("kz", o.kz),
        ("F", o.fano_min),
        ("dB", o.suppression_db),
        ("<n>", o.mean_photon),
    ]))
}

fn sweep(
    config: &RunConfig,
    alpha: f64,
    kz_min: f64,
    kz_max: f64,
    points: usize,
    spacing: Spacing,
) -> Result<Artifact, CliError> {
    let a = real_alpha(alpha)?;
    if !(kz_min >= 0.0 && kz_max >= kz_min && kz_max.is_finite()) {
        return Err(CliError::Validation(
            "kz range: need 0 <= kz_min <= kz_max".into(),
        ));
    }
    if points == 0 {
        return Err(CliError::Validation("points: must be at least 1".into()));
    }
    let grid: Vec<f64> = match (spacing, points) {
        (_, 1) => vec![kz_min],
        (Spacing::Linear, n) => (0..n)
            .map(|i| kz_min + (kz_max - kz_min) * i as f64 / (n - 1) as f64)
            .collect(),
        (Spacing::Log, n) => {
            if kz_min <= 0.0 {
                return Err(CliError::Validation(
                    "kz_min: log spacing needs kz_min > 0".into(),
                ));
            }
            let step = (kz_max / kz_min).ln() / (n - 1) as f64;
            (0..n).map(|i| kz_min * (step * i as f64).exp()).collect()
        }
    };
    let optima = sweep_length(a, &grid, &config.tolerances.optimizer(), config.parallelism)?;
    let mut table = Table::new(&OPTIMUM_COLUMNS);
    for o in &optima {
        table.push(optimum_row(o));
    }
    let best = optima
        .iter()
        .min_by(|x, y| x.fano_min.total_cmp(&y.fano_min))
        .expect("non-empty sweep");
    let summary = vec![
        ("points", optima.len() as f64),
        ("min F", best.fano_min),
        ("at kz", best.kz),
    ];
    Ok(Artifact::new(config, &optima, table).with_summary(summary))
}

/// Scenario and the Kerr-evolved coherent state.
fn evolved_state(
    config: &RunConfig,
    alpha: f64,
    kz: f64,
) -> Result<(KerrScenario, FockState), CliError> {
    let a = real_alpha(alpha)?;
    let scenario = KerrScenario::new(a, kz)?;
    let coherent = coherent_state_with(a, &config.tolerances.fock())?;
    Ok((scenario, kerr_evolve(&coherent, kz)?))
}

fn chosen_beta(
    config: &RunConfig,
    scenario: &KerrScenario,
    beta: Option<[f64; 2]>,
) -> Result<Complex64, CliError> {
    Ok(match beta {
        Some([re, im]) => Complex64::new(re, im),
        None if scenario.kz == 0.0 => Complex64::new(0.0, 0.0),
        None => optimize_beta_with(scenario, &config.tolerances.optimizer(), None)?.beta_opt,
    })
}

fn wigner_grid(config: &RunConfig) -> Result<Artifact, CliError> {
    let Command::Wigner {
        alpha,
        kz,
        beta,
        shifted,
        window,
        half_width,
        margin,
        resolution,
    } = config.command.clone()
    else {
        unreachable!()
    };
    let (scenario, kerr) = evolved_state(config, alpha, kz)?;
    let beta = chosen_beta(config, &scenario, beta)?;
    let shift = DisplacementSetting::unit(beta).shift_amplitude(&scenario);
    let state = if shifted {
        displace_with(&kerr, shift, &config.tolerances.fock())?
    } else {
        kerr
    };
    let mean = field_moment(&state, 0, 1)?;
    let spec = match window {
        Window::Mean => GridSpec::centered(mean, half_width, resolution)?,
        Window::Cover => GridSpec::covering(&state, margin, resolution)?,
    };
    let grid = wigner(&state, &spec)?;
    let integral = grid.integral();
    let max_abs = grid.max_abs();
    if (integral - 1.0).abs() > 1e-3 {
        eprintln!(
            "warning: grid integrates to {integral:.6}; the window cuts off part of the state"
        );
    }
    // The point the optimal shift moves to the origin.
    let marker = -shift;

    let mut table = Table::new(&["x", "y", "w"]);
    for (j, row) in grid.values.iter().enumerate() {
        for (i, w) in row.iter().enumerate() {
            table.push(vec![spec.x_at(i).into(), spec.y_at(j).into(), (*w).into()]);
        }
    }
    let data = json!({
        "x_range": grid.x_range,
        "y_range": grid.y_range,
        "resolution": grid.resolution,
        "integral": integral,
        "max_abs": max_abs,
        "mean_field": [mean.re, mean.im],
        "beta": [beta.re, beta.im],
        "shift_marker": [marker.re, marker.im],
        "n_trunc": state.n_trunc(),
        "values": grid.values,
    });
    let mut artifact = Artifact::new(config, data, table).with_summary(vec![
        ("integral", integral),
        ("max |W|", max_abs),
        ("<a> re", mean.re),
        ("<a> im", mean.im),
    ]);
    artifact.notes = vec![
        format!("integral: {integral:.16e}"),
        format!("shift_marker: {:.16e} {:.16e}", marker.re, marker.im),
    ];
    Ok(artifact)
}

fn photon_dist(
    config: &RunConfig,
    alpha: f64,
    kz: f64,
    beta: Option<[f64; 2]>,
) -> Result<Artifact, CliError> {
    let (scenario, kerr) = evolved_state(config, alpha, kz)?;
    let beta = chosen_beta(config, &scenario, beta)?;
    let shift = DisplacementSetting::unit(beta).shift_amplitude(&scenario);
    let state = displace_with(&kerr, shift, &config.tolerances.fock())?;
    let stats = photon_statistics(&state)?;
    let p = photon_distribution(&state);
    let mean = stats.mean_photon;
    let mut table = Table::new(&["n", "probability", "poisson"]);
    // Poisson reference with the same mean, ln q_n = ln q_{n-1} + ln(mean / n)
    let mut poisson = Vec::with_capacity(p.len());
    let mut ln_q = -mean;
    for (n, pn) in p.iter().enumerate() {
        if n > 0 {
            ln_q += (mean / n as f64).ln();
        }
        let q = ln_q.exp();
        poisson.push(q);
        table.push(vec![n.into(), (*pn).into(), q.into()]);
    }
    let data = json!({
        "beta": [beta.re, beta.im],
        "statistics": stats,
        "tail_mass": state.tail_mass(),
        "probability": p,
        "poisson": poisson,
    });
    Ok(Artifact::new(config, data, table).with_summary(vec![
        ("<n>", stats.mean_photon),
        ("variance", stats.variance),
        ("F", stats.fano),
        ("dB", stats.suppression_db),
    ]))
}

fn design(
    config: &RunConfig,
    power: f64,
    spectral_width: Option<f64>,
    target_db: Option<f64>,
) -> Result<Artifact, CliError> {
    let wg: WaveguideSpec = config.resolved_waveguide()?;
    let mut table = Table::new(&["quantity", "value", "unit"]);
    let mut summary: Vec<(&str, f64)> = Vec::new();
    let mut data = json!({ "waveguide": wg, "power_w": power, "gamma_per_w_m": gamma(&wg) });
    table.push(vec!["gamma".into(), gamma(&wg).into(), "1/(W m)".into()]);

    if let Some(width) = spectral_width {
        let beam = BeamSpec::new(power, width)?;
        let alpha = alpha_from_power(&beam, &wg);
        let k = kerr_coupling(&wg, &beam);
        let z_opt = kerr_noise::z_opt_physical(&wg, &beam);
        let floor = fano_floor_physical(&wg, &beam);
        for (q, v, u) in [
            ("alpha", alpha, ""),
            ("kerr_coupling", k, "1/m"),
            ("kz_opt", kz_opt_approx(alpha), ""),
            ("z_opt", z_opt, "m"),
            ("z_opt_via_coupling", z_opt_from_coupling(&wg, &beam), "m"),
            ("fano_floor", floor, "dB"),
        ] {
            table.push(vec![q.into(), v.into(), u.into()]);
        }
        data["spectral_width_hz"] = json!(width);
        data["alpha"] = json!(alpha);
        data["kerr_coupling_per_m"] = json!(k);
        data["z_opt_m"] = json!(z_opt);
        data["fano_floor_db"] = json!(floor);
        summary.extend([
            ("|alpha|", alpha),
            ("z_opt [m]", z_opt),
            ("floor [dB]", floor),
        ]);
    }
    if let Some(target) = target_db {
        let est = length_for_suppression(target, power, &wg, spectral_width)?;
        let regime = if est.used_short_formula {
            Regime::ShortLength
        } else {
            Regime::NearOptimum
        };
        table.push(vec!["target".into(), target.into(), "dB".into()]);
        table.push(vec!["x".into(), est.x.into(), "|alpha|^2 Kz".into()]);
        table.push(vec!["z".into(), est.z.into(), "m".into()]);
        data["target_db"] = json!(target);
        data["x"] = json!(est.x);
        data["z_m"] = json!(est.z);
        data["regime"] = json!(regime);
        data["regime_switch_db"] = json!(REGIME_SWITCH_DB);
        summary.extend([("x", est.x), ("z [m]", est.z)]);
    }
    if spectral_width.is_none() && target_db.is_none() {
        return Err(CliError::Validation(
            "design: give a spectral width, a target, or both".into(),
        ));
    }
    Ok(Artifact::new(config, data, table).with_summary(summary))
}

fn tolerance_text(t: Tolerance) -> String {
    match t {
        Tolerance::Relative(r) => format!("rel {r}"),
        Tolerance::Absolute(a) => format!("abs {a}"),
        Tolerance::Interval(lo, hi) => format!("in [{lo}, {hi}]"),
        Tolerance::AtMost(m) => format!("<= {m}"),
        Tolerance::Report => "report".into(),
    }
}

fn pass_text(pass: Option<bool>) -> &'static str {
    match pass {
        Some(true) => "PASS",
        Some(false) => "FAIL",
        None => "REPORT",
    }
}

fn report_artifact(config: &RunConfig, report: &Report) -> Artifact {
    let check_columns = [
        "quantity",
        "label",
        "computed",
        "reference",
        "delta",
        "tolerance",
        "status",
    ];
    let check_rows: Vec<Vec<Field>> = report
        .checks
        .iter()
        .map(|c| {
            vec![
                c.quantity.as_str().into(),
                c.label.as_str().into(),
                c.computed.into(),
                c.reference.into(),
                c.delta.into(),
                tolerance_text(c.tolerance).into(),
                pass_text(c.pass).into(),
            ]
        })
        .collect();
    let is_table = report.target.name().starts_with("table");
    let mut notes = Vec::new();
    let table = if is_table {
        Table {
            columns: check_columns.iter().map(|s| s.to_string()).collect(),
            rows: check_rows,
        }
    } else {
        for c in &report.checks {
            notes.push(format!(
                "check {} [{}]: {:.16e} {} {}",
                c.quantity,
                c.label,
                c.computed,
                tolerance_text(c.tolerance),
                pass_text(c.pass)
            ));
        }
        Table {
            columns: report.columns.clone(),
            rows: report
                .rows
                .iter()
                .map(|r| r.iter().map(|&v| Field::Num(v)).collect())
                .collect(),
        }
    };
    let failed = report.failures().count() as f64;
    let mut artifact = Artifact::new(config, report, table).with_summary(vec![
        ("checks", report.checks.len() as f64),
        ("failed", failed),
    ]);
    artifact.notes = notes;
    artifact
}

/// Default grid resolution re-exported for the argument parser.
pub const WIGNER_RESOLUTION: usize = DEFAULT_RESOLUTION;
