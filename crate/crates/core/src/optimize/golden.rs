//! Golden-section search for unimodal scalar functions.

use crate::error::Result;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenResult {
    pub x: f64,
    pub f: f64,
    pub iterations: usize,
}

/// Minimizes `f` on `[lo, hi]` until the bracket is narrower than `rel_tol * |x|`.
///
/// Returns `None` in place of a result if `max_iter` is exhausted first.
pub fn golden_section<F>(
    mut f: F,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    max_iter: usize,
) -> Result<Option<GoldenResult>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for iterations in 0..max_iter {
        let mid = 0.5 * (a + b);
        if (b - a) <= rel_tol * mid.abs() {
            let (x, fx) = if fc <= fd { (c, fc) } else { (d, fd) };
            return Ok(Some(GoldenResult {
                x,
                f: fx,
                iterations,
            }));
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_minimum() {
        let r = golden_section(|x| Ok((x - 1.7).powi(2) + 3.0), 0.2, 5.0, 1e-9, 500)
            .unwrap()
            .unwrap();
        // x is resolved to about sqrt(eps) on a quadratic minimum
        assert!((r.x - 1.7).abs() < 1e-7);
        assert!((r.f - 3.0).abs() < 1e-15);
    }

    #[test]
    fn asymmetric_unimodal() {
        let r = golden_section(|x: f64| Ok(x.exp() - 3.0 * x), 0.0, 4.0, 1e-10, 500)
            .unwrap()
            .unwrap();
        assert!((r.x - 3f64.ln()).abs() < 1e-7);
    }

    #[test]
    fn exhausted_iterations() {
        assert!(golden_section(|x| Ok(x * x), -1.0, 2.0, 1e-12, 3)
            .unwrap()
            .is_none());
    }
}
