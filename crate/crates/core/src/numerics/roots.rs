//! Bracketing root finders and a golden-section maximizer.

use crate::error::{GelfandError, Result};

/// Termination rule for [`brent`].
#[derive(Debug, Clone, Copy)]
pub struct RootTol {
    /// Absolute tolerance on the abscissa.
    pub xtol: f64,
    /// Relative tolerance on the abscissa.
    pub rtol: f64,
    /// Stop as soon as `|g(x)| <= ftol`.
    pub ftol: f64,
    pub max_iter: usize,
}

impl Default for RootTol {
    fn default() -> Self {
        RootTol {
            xtol: 0.0,
            rtol: 4.0 * f64::EPSILON,
            ftol: 0.0,
            max_iter: 200,
        }
    }
}

/// Brent's method on `[a, b]`. `g(a)` and `g(b)` must have opposite signs
/// (or one of them must vanish).
pub fn brent<G>(mut g: G, a: f64, b: f64, tol: RootTol) -> Result<f64>
where
    G: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (a, b);
    let mut fa = g(a)?;
    let mut fb = g(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(GelfandError::Bracketing(format!(
            "g({a}) = {fa} and g({b}) = {fb} have the same sign"
        )));
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..tol.max_iter {
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
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * (tol.xtol + tol.rtol * b.abs());
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 || fb.abs() <= tol.ftol {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = g(b)?;
    }
    Ok(b)
}

/// Golden-section search for the maximum of a unimodal `h` on `[a, b]`.
/// Returns `(argmax, max)` once the bracket is narrower than
/// `rel_tol * |x| + abs_tol`, or after `max_iter` reductions.
pub fn golden_max<H>(
    mut h: H,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_iter: usize,
) -> Result<(f64, f64)>
where
    H: FnMut(f64) -> Result<f64>,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (a.min(b), a.max(b));
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut h1 = h(x1)?;
    let mut h2 = h(x2)?;
    for _ in 0..max_iter {
        let mid = 0.5 * (a + b);
        if b - a <= rel_tol * mid.abs() + abs_tol {
            break;
        }
        if h1 < h2 {
            a = x1;
            x1 = x2;
            h1 = h2;
            x2 = a + INV_PHI * (b - a);
            h2 = h(x2)?;
        } else {
            b = x2;
            x2 = x1;
            h2 = h1;
            x1 = b - INV_PHI * (b - a);
            h1 = h(x1)?;
        }
    }
    Ok(if h1 >= h2 { (x1, h1) } else { (x2, h2) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_finds_sqrt2() {
        let r = brent(|x| Ok(x * x - 2.0), 0.0, 2.0, RootTol::default()).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn brent_rejects_unbracketed() {
        let err = brent(|x| Ok(x * x + 1.0), -1.0, 1.0, RootTol::default()).unwrap_err();
        assert!(matches!(err, GelfandError::Bracketing(_)));
    }

    #[test]
    fn brent_stops_on_ftol() {
        let tol = RootTol {
            ftol: 1e-3,
            ..RootTol::default()
        };
        let r = brent(|x| Ok(x - 0.3), 0.0, 1.0, tol).unwrap();
        assert!((r - 0.3).abs() <= 1e-3);
    }

    #[test]
    fn golden_finds_parabola_vertex() {
        let (x, v) = golden_max(
            |x| Ok(-(x - 0.7) * (x - 0.7) + 2.0),
            0.0,
            3.0,
            1e-12,
            0.0,
            200,
        )
        .unwrap();
        assert!((x - 0.7).abs() < 1e-7);
        assert!((v - 2.0).abs() < 1e-14);
    }
}
