//! Exponent-scaled Laguerre recurrences.
//!
//! Two kernels live here. [`laguerre_assoc`] evaluates a generalized Laguerre
//! polynomial `L_n^m(x)` with a separate base-e exponent so that arguments in
//! the hundreds do not overflow. [`fill_band`] produces one diagonal band of
//! the real displacement matrix `<j+k| D(r) |j>`, which is the quantity both
//! the Fock-space displacement and the Wigner double sum are built from:
//!
//! ```text
//! <j+k| D(r) |j> = sqrt(j!/(j+k)!) r^k e^{-r^2/2} L_j^k(r^2)
//! ```
//!
//! The band is generated with the normalized three-term recurrence
//!
//! ```text
//! M_{j+1} sqrt((j+1)(j+k+1)) = (2j+1+k-x) M_j - sqrt(j(j+k)) M_{j-1}
//! ```
//!
//! whose seed `r^k e^{-x/2} / sqrt(k!)` is carried in the log domain.

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

const RESCALE_BITS: i32 = 600;

fn big() -> f64 {
    2f64.powi(RESCALE_BITS)
}

fn small() -> f64 {
    2f64.powi(-RESCALE_BITS)
}

fn ln_big() -> f64 {
    f64::from(RESCALE_BITS) * std::f64::consts::LN_2
}

/// A real number stored as `mantissa * e^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Scaled {
    pub mantissa: f64,
    pub exponent: f64,
}

impl Scaled {
    pub fn value(&self) -> f64 {
        if self.mantissa == 0.0 {
            return 0.0;
        }
        self.mantissa * self.exponent.exp()
    }

    /// Natural log of the absolute value; `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        self.mantissa.abs().ln() + self.exponent
    }

    /// `self * e^shift` as a plain float.
    pub fn value_shifted(&self, shift: f64) -> f64 {
        if self.mantissa == 0.0 {
            return 0.0;
        }
        self.mantissa * (self.exponent + shift).exp()
    }
}

/// Generalized Laguerre polynomial `L_n^m(x)` by the upward recurrence in `n`.
///
/// `m = 0` gives the ordinary polynomial. Intermediate values are rescaled by
/// powers of two, so the result is returned as mantissa and exponent.
pub fn laguerre_assoc(n: usize, m: usize, x: f64) -> Scaled {
    let mf = m as f64;
    if n == 0 {
        return Scaled {
            mantissa: 1.0,
            exponent: 0.0,
        };
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + mf - x;
    let mut exponent = 0.0;
    for j in 1..n {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + mf - x) * cur - (jf + mf) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
        if cur.abs() > big() {
            cur *= small();
            prev *= small();
            exponent += ln_big();
        } else if cur.abs() < small() && prev.abs() < small() && cur != 0.0 {
            cur *= big();
            prev *= big();
            exponent -= ln_big();
        }
    }
    Scaled {
        mantissa: cur,
        exponent,
    }
}

/// Precomputed recurrence coefficients for every band of a `dim`-level basis.
///
/// Worth building when the same basis is displaced many times, as in a
/// Wigner grid. Memory is `dim^2` floats.
#[derive(Debug, Clone)]
pub struct BandCoefficients {
    dim: usize,
    offsets: Vec<usize>,
    /// sqrt(j (j+k))
    lower: Vec<f64>,
    /// 1 / sqrt((j+1)(j+k+1))
    inv_norm: Vec<f64>,
}

impl BandCoefficients {
    pub fn new(dim: usize) -> Self {
        let mut offsets = Vec::with_capacity(dim + 1);
        let mut lower = Vec::new();
        let mut inv_norm = Vec::new();
        for k in 0..dim {
            offsets.push(lower.len());
            let kf = k as f64;
            for j in 0..(dim - k) {
                let jf = j as f64;
                lower.push((jf * (jf + kf)).sqrt());
                inv_norm.push(1.0 / ((jf + 1.0) * (jf + kf + 1.0)).sqrt());
            }
        }
        offsets.push(lower.len());
        Self {
            dim,
            offsets,
            lower,
            inv_norm,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Band `k` of the real displacement matrix `D(r)`, `out[j] = <j+k|D(r)|j>`.
    ///
    /// `out.len()` must not exceed `dim - k`.
    pub fn fill_band(&self, r: f64, k: usize, out: &mut [f64]) {
        assert!(k < self.dim && out.len() <= self.dim - k);
        let base = self.offsets[k];
        let lower = &self.lower[base..];
        let inv = &self.inv_norm[base..];
        band_recurrence(r, k, out, |j| (lower[j], inv[j]));
    }
}

/// Band `k` of the real displacement matrix with coefficients computed on the fly.
pub fn fill_band(r: f64, k: usize, out: &mut [f64]) {
    let kf = k as f64;
    band_recurrence(r, k, out, |j| {
        let jf = j as f64;
        (
            (jf * (jf + kf)).sqrt(),
            1.0 / ((jf + 1.0) * (jf + kf + 1.0)).sqrt(),
        )
    });
}

/// Log of the seed `<k|D(r)|0> = r^k e^{-r^2/2} / sqrt(k!)`.
pub fn ln_band_seed(r: f64, k: usize) -> f64 {
    let kf = k as f64;
    let ln_rk = if k == 0 { 0.0 } else { kf * r.ln() };
    ln_rk - 0.5 * r * r - 0.5 * ln_gamma(kf + 1.0)
}

#[inline(always)]
fn band_recurrence<C>(r: f64, k: usize, out: &mut [f64], coef: C)
where
    C: Fn(usize) -> (f64, f64),
{
    if out.is_empty() {
        return;
    }
    if r == 0.0 {
        out.fill(if k == 0 { 1.0 } else { 0.0 });
        return;
    }
    let x = r * r;
    let kf = k as f64;
    let mut scale = ln_band_seed(r, k);
    let mut factor = scale.exp();
    let mut prev = 0.0;
    let mut cur = 1.0;
    let n = out.len();
    for (j, slot) in out.iter_mut().enumerate() {
        *slot = cur * factor;
        if j + 1 == n {
            break;
        }
        let (lower, inv) = coef(j);
        let next = ((2.0 * j as f64 + 1.0 + kf - x) * cur - lower * prev) * inv;
        prev = cur;
        cur = next;
        let mag = cur.abs();
        if mag > big() {
            cur *= small();
            prev *= small();
            scale += ln_big();
            factor = scale.exp();
        } else if mag < small() && prev.abs() < small() && mag != 0.0 {
            cur *= big();
            prev *= big();
            scale -= ln_big();
            factor = scale.exp();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: usize, k: usize) -> f64 {
        (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
    }

    /// L_n^m(x) = sum_i (-1)^i C(n+m, n-i) x^i / i!
    fn laguerre_series(n: usize, m: usize, x: f64) -> f64 {
        let mut sum = 0.0;
        let mut term_x = 1.0;
        for i in 0..=n {
            if i > 0 {
                term_x *= x / i as f64;
            }
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * binomial(n + m, n - i) * term_x;
        }
        sum
    }

    #[test]
    fn degree_zero_is_one() {
        for m in [0, 1, 7, 40] {
            for x in [0.0, 0.3, 12.0, 900.0] {
                assert_eq!(laguerre_assoc(0, m, x).value(), 1.0);
            }
        }
    }

    #[test]
    fn degree_one_is_linear() {
        for x in [0.0, 0.5, 3.0, 100.0] {
            let v = laguerre_assoc(1, 0, x).value();
            assert!((v - (1.0 - x)).abs() < 1e-14);
        }
    }

    #[test]
    fn matches_series_at_small_degree() {
        let v = laguerre_assoc(5, 2, 3.7).value();
        let s = laguerre_series(5, 2, 3.7);
        assert!(((v - s) / s).abs() < 1e-10, "{v} vs {s}");
        for (n, m, x) in [(7, 0, 2.2), (10, 3, 0.4), (12, 5, 9.5)] {
            let v = laguerre_assoc(n, m, x).value();
            let s = laguerre_series(n, m, x);
            assert!(((v - s) / s).abs() < 1e-9, "L_{n}^{m}({x}): {v} vs {s}");
        }
    }

    #[test]
    fn large_argument_stays_finite() {
        let v = laguerre_assoc(160, 40, 400.0);
        assert!(v.mantissa.is_finite() && v.exponent.is_finite());
        assert!(v.ln_abs() > 100.0);
    }

    #[test]
    fn band_matches_closed_form() {
        let r: f64 = 1.3;
        let x = r * r;
        for k in [0usize, 1, 4, 9] {
            let mut out = vec![0.0; 15];
            fill_band(r, k, &mut out);
            for (j, &got) in out.iter().enumerate() {
                let lag = laguerre_series(j, k, x);
                let pref = 0.5 * (ln_gamma(j as f64 + 1.0) - ln_gamma((j + k) as f64 + 1.0));
                let want = pref.exp() * r.powi(k as i32) * (-x / 2.0).exp() * lag;
                assert!((got - want).abs() < 1e-12, "k={k} j={j}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn tabulated_and_direct_bands_agree() {
        let table = BandCoefficients::new(60);
        for k in [0, 3, 20] {
            let mut a = vec![0.0; 60 - k];
            let mut b = vec![0.0; 60 - k];
            table.fill_band(4.5, k, &mut a);
            fill_band(4.5, k, &mut b);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn zero_displacement_band_is_identity() {
        let mut out = vec![7.0; 5];
        fill_band(0.0, 0, &mut out);
        assert_eq!(out, vec![1.0; 5]);
        fill_band(0.0, 2, &mut out);
        assert_eq!(out, vec![0.0; 5]);
    }
}
