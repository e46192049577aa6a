//! Bracketing root search: uniform sign-change scan followed by bisection.

use crate::error::Result;

/// A sign change of f between two adjacent scan points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl Bracket {
    /// f goes from negative (or zero) to positive.
    pub fn rising(&self) -> bool {
        self.f_hi > self.f_lo
    }
}

/// Outcome of a grid scan.
#[derive(Debug, Clone, Default)]
pub struct Scan {
    pub brackets: Vec<Bracket>,
    /// Number of grid points at which f was defined.
    pub defined: usize,
    /// Largest |f| seen on the grid.
    pub max_abs: f64,
}

/// Evaluate f on `points` uniformly spaced nodes of [lo, hi] and collect every
/// sign change between consecutive defined nodes. `f` returns `Ok(None)` where
/// it is undefined; such nodes split the scan.
pub fn scan_sign_changes<F>(mut f: F, lo: f64, hi: f64, points: usize) -> Result<Scan>
where
    F: FnMut(f64) -> Result<Option<f64>>,
{
    let points = points.max(2);
    let mut scan = Scan::default();
    let mut prev: Option<(f64, f64)> = None;
    for k in 0..points {
        let x = if k == points - 1 {
            hi
        } else {
            lo + (hi - lo) * k as f64 / (points - 1) as f64
        };
        let fx = f(x)?;
        match fx {
            Some(v) if v.is_finite() => {
                scan.defined += 1;
                scan.max_abs = scan.max_abs.max(v.abs());
                if let Some((px, pv)) = prev {
                    let crossed = (pv < 0.0 && v >= 0.0) || (pv > 0.0 && v <= 0.0);
                    if crossed {
                        scan.brackets.push(Bracket { lo: px, hi: x, f_lo: pv, f_hi: v });
                    }
                }
                prev = Some((x, v));
            }
            _ => prev = None,
        }
    }
    Ok(scan)
}

/// Bisect a bracket until its width is at most `tol` and return the midpoint.
pub fn bisect<F>(mut f: F, bracket: Bracket, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let mut fa = bracket.f_lo;
    if fa == 0.0 {
        return Ok(a);
    }
    if bracket.f_hi == 0.0 && b - a <= tol {
        return Ok(b);
    }
    while b - a > tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}
