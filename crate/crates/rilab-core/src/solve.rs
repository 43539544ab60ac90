//! Scalar root finding and one-dimensional maximisation.

use crate::error::{Error, Result};

/// Bisection for a continuous function with a sign change on `[a, b]`.
///
/// Converges to relative width `rel_tol` (absolute near zero). The bracket is
/// validated first; a missing sign change is reported as `RootFailure`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = if a < b { (a, b) } else { (b, a) };
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.is_nan() || fhi.is_nan() {
        return Err(Error::RootFailure(format!(
            "NaN at bracket endpoints f({lo:e}) or f({hi:e})"
        )));
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::RootFailure(format!(
            "no sign change on [{lo:e}, {hi:e}]: f={flo:e} and {fhi:e}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if hi - lo <= rel_tol * (1.0 + mid.abs()) {
            return Ok(0.5 * (lo + hi));
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Bisection on a strictly decreasing function for `f(x) = target`.
///
/// The bracket is grown geometrically from `x0` in both directions until the
/// target is straddled; gives up after `max_grow` doublings.
pub fn bisect_decreasing<F: Fn(f64) -> f64>(
    f: F,
    x0: f64,
    target: f64,
    rel_tol: f64,
    max_grow: u32,
) -> Result<f64> {
    let mut lo = x0;
    let mut hi = x0;
    let mut grew = 0;
    while f(hi) > target {
        hi *= 2.0;
        grew += 1;
        if grew > max_grow || !hi.is_finite() {
            return Err(Error::RootFailure(format!(
                "decreasing bracket: f({hi:e}) still above {target:e}"
            )));
        }
    }
    grew = 0;
    while f(lo) < target {
        lo *= 0.5;
        grew += 1;
        if grew > max_grow || lo == 0.0 {
            return Err(Error::RootFailure(format!(
                "decreasing bracket: f({lo:e}) still below {target:e}"
            )));
        }
    }
    bisect(|x| f(x) - target, lo, hi, rel_tol)
}

/// Golden-section maximisation on `[a, b]` for a continuous unimodal-ish
/// function. Returns `(argmax, max)`. Robust to mild non-unimodality when the
/// initial bracket already isolates the peak.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (a.min(b), a.max(b));
    let mut x1 = hi - INVPHI * (hi - lo);
    let mut x2 = lo + INVPHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..120 {
        if hi - lo <= rel_tol * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INVPHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INVPHI * (hi - lo);
            f1 = f(x1);
        }
    }
    let mid = 0.5 * (lo + hi);
    let fm = f(mid);
    if fm >= f1 && fm >= f2 {
        (mid, fm)
    } else if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Maximise over a grid, then golden-refine inside the bracketing cells.
/// Returns `(argmax, max, bracket)`.
pub fn grid_then_golden<F: Fn(f64) -> f64>(
    f: &F,
    grid: &[f64],
    rel_tol: f64,
) -> Result<(f64, f64, (f64, f64))> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid("grid_then_golden".into()));
    }
    let mut best = 0usize;
    let mut best_val = f64::NEG_INFINITY;
    for (i, &p) in grid.iter().enumerate() {
        let v = f(p);
        if v > best_val {
            best_val = v;
            best = i;
        }
    }
    let lo = if best == 0 { grid[0] } else { grid[best - 1] };
    let hi = if best + 1 == grid.len() {
        grid[grid.len() - 1]
    } else {
        grid[best + 1]
    };
    if lo == hi {
        return Ok((grid[best], best_val, (lo, hi)));
    }
    let (xr, fr) = golden_max(f, lo, hi, rel_tol);
    if fr > best_val {
        Ok((xr, fr, (lo, hi)))
    } else {
        Ok((grid[best], best_val, (lo, hi)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn bisect_rejects_bad_bracket() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn golden_finds_parabola_peak() {
        let (x, v) = golden_max(|x| 3.0 - (x - 0.7) * (x - 0.7), 0.0, 2.0, 1e-12);
        assert!((x - 0.7).abs() < 1e-6);
        assert!((v - 3.0).abs() < 1e-12);
    }

    #[test]
    fn decreasing_bisection_hits_target() {
        let r = bisect_decreasing(|x| 1.0 / x, 1.0, 0.125, 1e-13, 80).unwrap();
        assert!((r - 8.0).abs() < 1e-10);
    }
}
