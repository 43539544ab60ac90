//! Tails of slowly decaying oscillatory integrals.
//!
//! The moment integrals of Fejer-type kernels reduce to
//! `int_Y^inf g(y) y^{-s} dy` with `g >= 0` periodic. Direct panel summation
//! needs ~1e9 arches at tolerance 1e-10 when `s` is close to 1, so the tail is
//! summed arch-by-arch with Euler-Maclaurin acceleration instead: writing the
//! tail as `sum_k a(k)` with
//! `a(t) = int_0^T g(u) (Y + tT + u)^{-s} du`,
//!
//! `sum_{k>=0} a(k) = int_0^inf a(t) dt + a(0)/2 - a'(0)/12 + a'''(0)/720 + R`
//!
//! and every term on the right collapses to a single smooth integral over one
//! period. The remainder `R` scales like `(sT/Y)^5`, so a start of a few dozen
//! periods already gives near machine precision.

use crate::error::{Error, Result};
use crate::quad::{integrate, Quad};

/// Evaluate `sin(u)/u` with a series switch near zero.
pub fn sinc(u: f64) -> f64 {
    let a = u.abs();
    if a < 1e-4 {
        let u2 = u * u;
        1.0 - u2 / 6.0 + u2 * u2 / 120.0 - u2 * u2 * u2 / 5040.0
    } else {
        u.sin() / u
    }
}

/// `int_0^T g(u) (start + u)^{-sigma} du` by adaptive quadrature.
fn period_moment<F: Fn(f64) -> f64>(g: &F, period: f64, start: f64, sigma: f64) -> Result<f64> {
    let f = |u: f64| g(u) * (start + u).powf(-sigma);
    Ok(integrate(&f, 0.0, period, 1e-12, 1e-280, 2, 2000)?.value)
}

/// Tail `int_{start}^inf g(y - start) y^{-s} dy` for periodic `g >= 0`.
///
/// `g` is sampled on one period `[0, T]`; the phase must be chosen by the
/// caller so that `g(u)` continues the integrand at `y = start + u`.
/// Requires `s > 1` and `start > 0`. The returned error field is the size of
/// the first neglected Euler-Maclaurin term.
pub fn periodic_power_tail<F: Fn(f64) -> f64>(
    g: &F,
    period: f64,
    s: f64,
    start: f64,
) -> Result<Quad> {
    if s <= 1.0 {
        return Err(Error::DivergentIntegral(format!(
            "periodic tail needs decay exponent > 1, got {s}"
        )));
    }
    if start <= 0.0 || period <= 0.0 {
        return Err(Error::InvalidParameter(
            "periodic tail needs start > 0 and period > 0".into(),
        ));
    }
    let t = period;
    // int_0^inf a(t) dt collapses by Fubini.
    let integral_part = period_moment(g, t, start, s - 1.0)? / (t * (s - 1.0));
    let j0 = period_moment(g, t, start, s)?;
    let j1 = period_moment(g, t, start, s + 1.0)?;
    let j3 = period_moment(g, t, start, s + 3.0)?;
    let j5 = period_moment(g, t, start, s + 5.0)?;
    let value = integral_part + 0.5 * j0 + s * t * j1 / 12.0
        - s * (s + 1.0) * (s + 2.0) * t.powi(3) * j3 / 720.0;
    let err = s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * t.powi(5) * j5 / 30240.0;
    Ok(Quad { value, error: err })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_weight_matches_power_tail() {
        // g = 1: tail is Y^{1-s}/(s-1) exactly. The defect must stay within
        // the reported first-neglected-term estimate, and far starts must
        // reach full precision.
        for &s in &[1.5, 2.0, 3.0, 7.5] {
            for &y in &[40.0, 250.0] {
                let q = periodic_power_tail(&|_| 1.0, 2.0, s, y).unwrap();
                let exact = y.powf(1.0 - s) / (s - 1.0);
                let allow = (2.0 * q.error).max(1e-13 * exact);
                assert!(
                    (q.value - exact).abs() < allow,
                    "s={s} y={y}: got {} want {exact} (allow {allow:e})",
                    q.value
                );
            }
            let far = periodic_power_tail(&|_| 1.0, 2.0, s, 250.0).unwrap();
            let exact = (250.0f64).powf(1.0 - s) / (s - 1.0);
            assert!(far.error < 1e-11 * exact, "s={s}: error {} not small", far.error);
        }
    }

    #[test]
    fn tail_consistent_with_direct_arch_sum() {
        // sum 2000 arches directly, then close with a far tail; must agree
        // with the accelerated tail started close in.
        let g = |u: f64| u.sin().powi(2);
        let s = 2.0;
        let near = periodic_power_tail(&g, PI, s, 64.0 * PI).unwrap();
        let mut direct = 0.0;
        for k in 64..2064 {
            let a = k as f64 * PI;
            direct += integrate(&|y: f64| y.sin().powi(2) * y.powf(-s), a, a + PI, 1e-13, 1e-300, 2, 400)
                .unwrap()
                .value;
        }
        let far = periodic_power_tail(&g, PI, s, 2064.0 * PI).unwrap();
        let combined = direct + far.value;
        assert!(
            (near.value - combined).abs() < 1e-12,
            "near {} vs direct+far {}",
            near.value,
            combined
        );
    }

    #[test]
    fn sinc_series_switch_is_smooth() {
        for &u in &[9.9e-5f64, 1.0e-4, 1.01e-4, 0.5, 2.0] {
            let exact = if u == 0.0 { 1.0 } else { u.sin() / u };
            assert!((sinc(u) - exact).abs() < 1e-15);
        }
        assert_eq!(sinc(0.0), 1.0);
    }
}
