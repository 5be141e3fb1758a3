//! Bracketed scalar root finding.

use crate::{Error, Result};

/// Brent's method on `[lo, hi]`, which must bracket a sign change.
///
/// Stops when the bracket is below `xtol` (absolute plus `4ε|x|`) or `f`
/// hits zero exactly; `max_iter` caps the work.
pub fn brent<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, xtol: f64, max_iter: usize) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if !(fa.is_finite() && fb.is_finite()) {
        return Err(Error::SingularEncountered);
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NotFound);
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
        if !fb.is_finite() {
            return Err(Error::SingularEncountered);
        }
    }
    Err(Error::NotFound)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_simple_roots() {
        let r = brent(|x| x * x - 2.0, 0.0, 2.0, 1e-15, 200).unwrap();
        assert!((r - core::f64::consts::SQRT_2).abs() < 1e-14);
        let r = brent(|x| libm::cos(x) - x, 0.0, 1.0, 1e-15, 200).unwrap();
        assert!((libm::cos(r) - r).abs() < 1e-15);
        let r = brent(|x| (x - 1.0) * (x - 1.0) * (x - 1.0), -3.0, 4.0, 1e-15, 200).unwrap();
        assert!((r - 1.0).abs() < 1e-5);
    }

    #[test]
    fn reports_missing_bracket() {
        assert_eq!(brent(|x| x * x + 1.0, -1.0, 1.0, 1e-12, 200), Err(Error::NotFound));
        assert_eq!(brent(|x| 1.0 / x, 0.0, 1.0, 1e-12, 200), Err(Error::SingularEncountered));
    }
}
