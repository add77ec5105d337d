//! Recomputes the published tables and figure data and compares each number
//! with its printed value.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::approx::{f1_short, f2_near_opt, f_min_approx, f_piecewise, kz_app, kz_opt_approx};
use crate::error::{invalid, Error, Result};
use crate::fock::KerrScenario;
use crate::moments::to_db;
use crate::optimize::{
    log_log_slope, optimize_beta_with, optimize_length_with, sweep_length, OptimizerConfig, Optimum,
};
use crate::waveguide::{
    alpha_from_power, fano_floor_physical, length_for_suppression, length_for_x, z_opt_physical,
    BeamSpec, WaveguideSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Table1,
    Table2,
    Table3,
    Fig3,
    Fig4,
    Fig5,
}

impl Target {
    pub const ALL: [Target; 6] = [
        Target::Table1,
        Target::Table2,
        Target::Table3,
        Target::Fig3,
        Target::Fig4,
        Target::Fig5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Target::Table1 => "table1",
            Target::Table2 => "table2",
            Target::Table3 => "table3",
            Target::Fig3 => "fig3",
            Target::Fig4 => "fig4",
            Target::Fig5 => "fig5",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Target::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| invalid("target", format!("unknown target `{s}`")))
    }
}

/// How a computed value is judged against its reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Tolerance {
    /// `|computed / reference - 1| <= r`
    Relative(f64),
    /// `|computed - reference| <= a`
    Absolute(f64),
    /// `lo <= computed <= hi`
    Interval(f64, f64),
    /// `computed <= m`
    AtMost(f64),
    /// Listed for comparison only.
    Report,
}

impl Tolerance {
    /// Half a unit in the second significant digit of `reference`.
    pub fn two_significant(reference: f64) -> Self {
        let unit = 10f64.powf(reference.abs().log10().floor() - 1.0);
        Tolerance::Absolute(0.5 * unit)
    }

    fn judge(self, computed: f64, reference: Option<f64>) -> Option<bool> {
        let ok = match (self, reference) {
            (Tolerance::Relative(r), Some(x)) => (computed / x - 1.0).abs() <= r,
            (Tolerance::Absolute(a), Some(x)) => (computed - x).abs() <= a,
            (Tolerance::Interval(lo, hi), _) => (lo..=hi).contains(&computed),
            (Tolerance::AtMost(m), _) => computed <= m,
            _ => return None,
        };
        Some(ok)
    }
}

/// One compared number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub quantity: String,
    /// Column or condition the number belongs to.
    pub label: String,
    pub computed: f64,
    pub reference: Option<f64>,
    pub delta: Option<f64>,
    pub tolerance: Tolerance,
    /// `None` for report-only rows.
    pub pass: Option<bool>,
}

impl Check {
    pub fn new(
        quantity: impl Into<String>,
        label: impl Into<String>,
        computed: f64,
        reference: Option<f64>,
        tolerance: Tolerance,
    ) -> Self {
        Self {
            quantity: quantity.into(),
            label: label.into(),
            computed,
            reference,
            delta: reference.map(|r| computed - r),
            tolerance,
            pass: tolerance.judge(computed, reference),
        }
    }
}

/// Data rows plus the comparisons made on them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub target: Target,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub checks: Vec<Check>,
}

impl Report {
    fn new(target: Target, columns: &[&str]) -> Self {
        Self {
            target,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass != Some(false))
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.pass == Some(false))
    }

    fn check(&mut self, c: Check) {
        self.checks.push(c);
    }
}

/// Inputs shared by all reproduction targets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReproduceOptions {
    pub optimizer: OptimizerConfig,
    pub waveguide: WaveguideSpec,
    /// Threads for length sweeps; 1 runs them sequentially with warm starts.
    pub parallelism: usize,
    /// Points per figure sweep.
    pub sweep_points: usize,
}

impl Default for ReproduceOptions {
    fn default() -> Self {
        Self {
            optimizer: OptimizerConfig::default(),
            waveguide: WaveguideSpec::si3n4(),
            parallelism: 1,
            sweep_points: 41,
        }
    }
}

pub const TABLE1_ALPHA: [f64; 4] = [10.0, 30.0, 50.0, 100.0];
pub const TABLE1_FANO: [f64; 4] = [0.0203, 0.00449, 0.00226, 0.000892];
pub const TABLE1_FANO_DB: [f64; 4] = [-16.9, -23.5, -26.5, -30.5];
pub const TABLE1_KZ: [f64; 4] = [0.0218, 0.00511, 0.00257, 0.00102];
pub const TABLE1_BETA: [f64; 4] = [0.123, 0.0569, 0.0401, 0.0253];
pub const TABLE1_MEAN: [f64; 4] = [98.6, 894.0, 2490.0, 9980.0];
pub const SPOTLIGHT_VARIANCE: f64 = 1.99;

pub const TABLE2_POWER: [f64; 3] = [1e-3, 10e-3, 100e-3];
pub const TABLE2_WIDTH: [f64; 3] = [1e6, 10e6, 100e6];
/// `[width][power]`
pub const TABLE2_ALPHA: [[f64; 3]; 3] = [
    [88e3, 280e3, 880e3],
    [28e3, 88e3, 280e3],
    [8.8e3, 28e3, 88e3],
];
pub const TABLE2_FLOOR_DB: [[f64; 3]; 3] = [
    [-70.0, -76.0, -83.0],
    [-63.0, -70.0, -76.0],
    [-56.0, -63.0, -70.0],
];
/// m
pub const TABLE2_Z_OPT: [[f64; 3]; 3] = [
    [560e3, 120e3, 26e3],
    [260e3, 56e3, 12e3],
    [121e3, 26e3, 5.6e3],
];

pub const TABLE3_DB: [f64; 3] = [-5.0, -10.0, -15.0];
pub const TABLE3_X: [f64; 3] = [0.31, 0.70, 1.80];
pub const TABLE3_Z_10MW: [f64; 3] = [18.0, 41.0, 82.0];
pub const TABLE3_Z_100MW: [f64; 3] = [1.8, 4.1, 8.2];

pub const CROSSOVER_ALPHA: [f64; 3] = [30.0, 50.0, 100.0];
pub const CROSSOVER_DB: f64 = -12.1;
pub const FIG5_ALPHA: [f64; 6] = [10.0, 20.0, 30.0, 50.0, 70.0, 100.0];

pub fn reproduce(target: Target, options: &ReproduceOptions) -> Result<Report> {
    if options.parallelism == 0 {
        return Err(invalid("parallel", "must be at least 1"));
    }
    if options.sweep_points < 2 {
        return Err(invalid("sweep_points", "need at least 2"));
    }
    match target {
        Target::Table1 => table1(options),
        Target::Table2 => table2(options),
        Target::Table3 => table3(options),
        Target::Fig3 => fig3(options),
        Target::Fig4 => fig4(options),
        Target::Fig5 => fig5(options),
    }
}

fn real(alpha: f64) -> Complex64 {
    Complex64::new(alpha, 0.0)
}

fn geometric(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let ratio = (hi / lo).ln() / (n - 1) as f64;
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo * (ratio * i as f64).exp()
            }
        })
        .collect()
}

fn table1(options: &ReproduceOptions) -> Result<Report> {
    let mut report = Report::new(
        Target::Table1,
        &[
            "alpha",
            "fano_min",
            "suppression_db",
            "kz_opt",
            "beta_magnitude",
            "mean_photon",
            "variance",
        ],
    );
    for (i, &alpha) in TABLE1_ALPHA.iter().enumerate() {
        let opt = optimize_length_with(real(alpha), &options.optimizer)?;
        let variance = opt.fano_min * opt.mean_photon;
        report.rows.push(vec![
            alpha,
            opt.fano_min,
            opt.suppression_db,
            opt.kz,
            opt.beta_magnitude,
            opt.mean_photon,
            variance,
        ]);
        let label = format!("alpha={alpha}");
        report.check(Check::new(
            "fano_min",
            &label,
            opt.fano_min,
            Some(TABLE1_FANO[i]),
            Tolerance::Relative(0.02),
        ));
        report.check(Check::new(
            "suppression_db",
            &label,
            opt.suppression_db,
            Some(TABLE1_FANO_DB[i]),
            Tolerance::Absolute(0.1),
        ));
        report.check(Check::new(
            "kz_opt",
            &label,
            opt.kz,
            Some(TABLE1_KZ[i]),
            Tolerance::Relative(0.02),
        ));
        report.check(Check::new(
            "beta_magnitude",
            &label,
            opt.beta_magnitude,
            Some(TABLE1_BETA[i]),
            Tolerance::Relative(0.05),
        ));
        report.check(Check::new(
            "mean_photon",
            &label,
            opt.mean_photon,
            Some(TABLE1_MEAN[i]),
            Tolerance::Relative(0.005),
        ));
        if alpha == 10.0 {
            report.check(Check::new(
                "variance",
                &label,
                variance,
                Some(SPOTLIGHT_VARIANCE),
                Tolerance::Absolute(0.05),
            ));
        }
    }
    Ok(report)
}

fn table2(options: &ReproduceOptions) -> Result<Report> {
    let wg = &options.waveguide;
    let mut report = Report::new(
        Target::Table2,
        &[
            "power_w",
            "spectral_width_hz",
            "alpha",
            "fano_floor_db",
            "z_opt_m",
        ],
    );
    for (w, &width) in TABLE2_WIDTH.iter().enumerate() {
        for (p, &power) in TABLE2_POWER.iter().enumerate() {
            let beam = BeamSpec::new(power, width)?;
            let alpha = alpha_from_power(&beam, wg);
            let floor = fano_floor_physical(wg, &beam);
            let z = z_opt_physical(wg, &beam);
            report.rows.push(vec![power, width, alpha, floor, z]);
            let label = format!("P={power} W, df={width} Hz");
            for (quantity, computed, reference) in [
                ("alpha", alpha, TABLE2_ALPHA[w][p]),
                ("fano_floor_db", floor, TABLE2_FLOOR_DB[w][p]),
                ("z_opt_m", z, TABLE2_Z_OPT[w][p]),
            ] {
                report.check(Check::new(
                    quantity,
                    &label,
                    computed,
                    Some(reference),
                    Tolerance::two_significant(reference),
                ));
            }
        }
    }
    Ok(report)
}

fn table3(options: &ReproduceOptions) -> Result<Report> {
    let wg = &options.waveguide;
    let mut report = Report::new(
        Target::Table3,
        &[
            "target_db",
            "x_table",
            "x_inverted",
            "z_10mw_table_x",
            "z_100mw_table_x",
            "z_10mw_inverted_x",
            "z_100mw_inverted_x",
        ],
    );
    for i in 0..TABLE3_DB.len() {
        let db = TABLE3_DB[i];
        let x_table = TABLE3_X[i];
        let inverted = length_for_suppression(db, 10e-3, wg, None)?;
        let at_100 = length_for_suppression(db, 100e-3, wg, None)?;
        let z10 = length_for_x(x_table, 10e-3, wg);
        let z100 = length_for_x(x_table, 100e-3, wg);
        report.rows.push(vec![
            db, x_table, inverted.x, z10, z100, inverted.z, at_100.z,
        ]);
        let label = format!("{db} dB");
        // The deepest row's printed x disagrees with both formulas; list it only.
        let x_tol = if db >= -10.0 {
            Tolerance::Relative(0.03)
        } else {
            Tolerance::Report
        };
        report.check(Check::new(
            "x_inverted",
            &label,
            inverted.x,
            Some(x_table),
            x_tol,
        ));
        report.check(Check::new(
            "z_10mw_table_x",
            &label,
            z10,
            Some(TABLE3_Z_10MW[i]),
            Tolerance::Relative(0.03),
        ));
        report.check(Check::new(
            "z_100mw_table_x",
            &label,
            z100,
            Some(TABLE3_Z_100MW[i]),
            Tolerance::Relative(0.03),
        ));
        report.check(Check::new(
            "z_10mw_inverted_x",
            &label,
            inverted.z,
            Some(TABLE3_Z_10MW[i]),
            Tolerance::Report,
        ));
        report.check(Check::new(
            "z_100mw_inverted_x",
            &label,
            at_100.z,
            Some(TABLE3_Z_100MW[i]),
            Tolerance::Report,
        ));
    }
    Ok(report)
}

fn sweep_rows(alpha: f64, points: &[Optimum]) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|o| {
            vec![
                alpha,
                o.kz,
                o.fano_min,
                o.suppression_db,
                o.beta_magnitude,
                o.mean_photon,
            ]
        })
        .collect()
}

fn fig3(options: &ReproduceOptions) -> Result<Report> {
    let mut report = Report::new(
        Target::Fig3,
        &[
            "alpha",
            "kz",
            "fano",
            "suppression_db",
            "beta_magnitude",
            "mean_photon",
        ],
    );
    for (alpha, table_kz, table_f) in [
        (50.0, TABLE1_KZ[2], TABLE1_FANO[2]),
        (100.0, TABLE1_KZ[3], TABLE1_FANO[3]),
    ] {
        let center = kz_opt_approx(alpha);
        let grid = geometric(0.05 * center, 2.5 * center, options.sweep_points);
        let points = sweep_length(real(alpha), &grid, &options.optimizer, options.parallelism)?;
        let best = points
            .iter()
            .min_by(|a, b| a.fano_min.total_cmp(&b.fano_min))
            .expect("non-empty sweep");
        let label = format!("alpha={alpha}");
        let spacing = grid[1] / grid[0] - 1.0;
        report.check(Check::new(
            "kz_at_curve_minimum",
            &label,
            best.kz,
            Some(table_kz),
            Tolerance::Relative(0.02 + spacing),
        ));
        report.check(Check::new(
            "curve_minimum",
            &label,
            best.fano_min,
            Some(table_f),
            Tolerance::Relative(0.02 + spacing),
        ));
        report.rows.extend(sweep_rows(alpha, &points));
    }
    Ok(report)
}

fn fig4(options: &ReproduceOptions) -> Result<Report> {
    let alpha = 50.0;
    let a2 = alpha * alpha;
    let mut report = Report::new(
        Target::Fig4,
        &[
            "alpha",
            "kz",
            "fano_numeric",
            "fano_f1",
            "fano_f2",
            "fano_piecewise",
            "deviation_db",
        ],
    );
    let center = kz_opt_approx(alpha);
    let mut grid = geometric(0.05 * center, 2.0 * center, options.sweep_points);
    grid.push(kz_app(a2));
    grid.sort_by(f64::total_cmp);
    let points = sweep_length(real(alpha), &grid, &options.optimizer, options.parallelism)?;
    let mut worst: f64 = 0.0;
    for o in &points {
        let f1 = f1_short(a2, o.kz);
        let f2 = f2_near_opt(a2, o.kz)?;
        let pw = f_piecewise(alpha, o.kz)?.value;
        let dev = to_db(pw) - o.suppression_db;
        worst = worst.max(dev.abs());
        report
            .rows
            .push(vec![alpha, o.kz, o.fano_min, f1, f2, pw, dev]);
    }
    report.check(Check::new(
        "max_abs_deviation_db",
        "alpha=50, kz in [0.05, 2] kz_opt",
        worst,
        None,
        Tolerance::AtMost(1.0),
    ));

    for alpha in CROSSOVER_ALPHA {
        let s = KerrScenario::real(alpha, kz_app(alpha * alpha))?;
        let db = optimize_beta_with(&s, &options.optimizer, None)?.suppression_db;
        let label = format!("alpha={alpha}");
        report.check(Check::new(
            "crossover_db",
            &label,
            db,
            None,
            Tolerance::Interval(-12.6, -11.6),
        ));
        report.check(Check::new(
            "crossover_db_vs_quoted",
            &label,
            db,
            Some(CROSSOVER_DB),
            Tolerance::Absolute(0.3),
        ));
    }
    Ok(report)
}

fn fig5(options: &ReproduceOptions) -> Result<Report> {
    let mut report = Report::new(
        Target::Fig5,
        &[
            "alpha",
            "kz_opt",
            "fano_min",
            "kz_opt_approx",
            "fano_min_approx",
        ],
    );
    let mut kz = Vec::new();
    let mut fano = Vec::new();
    for alpha in FIG5_ALPHA {
        let opt = optimize_length_with(real(alpha), &options.optimizer)?;
        report.rows.push(vec![
            alpha,
            opt.kz,
            opt.fano_min,
            kz_opt_approx(alpha),
            f_min_approx(alpha),
        ]);
        let label = format!("alpha={alpha}");
        let scale = alpha.powf(4.0 / 3.0);
        report.check(Check::new(
            "kz_opt_scaled",
            &label,
            opt.kz * scale,
            None,
            Tolerance::Interval(0.43, 0.53),
        ));
        report.check(Check::new(
            "fano_min_scaled",
            &label,
            opt.fano_min * scale,
            None,
            Tolerance::Interval(0.37, 0.46),
        ));
        kz.push(opt.kz);
        fano.push(opt.fano_min);
    }
    let expected = -4.0 / 3.0;
    report.check(Check::new(
        "fano_min_exponent",
        "alpha in 10..100",
        log_log_slope(&FIG5_ALPHA, &fano),
        Some(expected),
        Tolerance::Absolute(0.05),
    ));
    report.check(Check::new(
        "kz_opt_exponent",
        "alpha in 10..100",
        log_log_slope(&FIG5_ALPHA, &kz),
        Some(expected),
        Tolerance::Absolute(0.05),
    ));
    Ok(report)
}
