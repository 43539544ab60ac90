//! Lorentz norms `int_0^inf phi(m{|f| > lambda}) dlambda`.
//!
//! The real-line Fejer kernel reduces exactly to the sinc-square
//! distribution: `m{D_n > lambda} = G(lambda)/n` with
//! `G(lambda) = m{y : sin^2(y/2)/y^2 > lambda}`, computed arch by arch.
//! Circle witnesses use a scan-and-bisect level-crossing search.

use crate::error::{Error, Result};
use crate::kernels::{sinc_sq_profile, KernelSpec, Witness};
use crate::moments::{sup_norm, Domain};
use crate::quad::integrate;
use crate::solve::bisect;
use std::f64::consts::PI;

/// Generator `phi(delta) = delta^{1/q} (1 + |log delta|)^s` of a Lorentz
/// space; `s = 0` is the plain power family.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LorentzPhi {
    pub q: f64,
    pub s: f64,
}

impl LorentzPhi {
    pub fn pow(q: f64) -> Result<Self> {
        Self::pow_log(q, 0.0)
    }

    pub fn pow_log(q: f64, s: f64) -> Result<Self> {
        let phi = LorentzPhi { q, s };
        phi.validate()?;
        Ok(phi)
    }

    pub fn value(&self, delta: f64) -> f64 {
        if delta <= 0.0 {
            return 0.0;
        }
        delta.powf(1.0 / self.q) * (1.0 + delta.ln().abs()).powf(self.s)
    }

    /// Inverse of the generator by log-space bisection; valid generators are
    /// strictly increasing with full range `(0, inf)`.
    pub fn inverse(&self, t: f64) -> Result<f64> {
        if t == 0.0 {
            return Ok(0.0);
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::OutOfRange(format!("generator inverse of {t}")));
        }
        let root = bisect(|s: f64| self.value(s.exp()) - t, -690.0, 690.0, 1e-13)?;
        Ok(root.exp())
    }

    /// Strict growth and quasi-concavity (`phi(delta)/delta` nonincreasing)
    /// on a wide log grid; distributions on the line exceed 1, so the grid
    /// does too.
    pub fn validate(&self) -> Result<()> {
        if !(self.q >= 1.0 && self.q.is_finite() && self.s.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "Lorentz generator needs q >= 1, got (q, s) = ({}, {})",
                self.q, self.s
            )));
        }
        let grid: Vec<f64> = (0..=110).map(|k| 10f64.powf(-16.0 + 0.2 * k as f64)).collect();
        let mut prev = 0.0f64;
        let mut prev_ratio = f64::INFINITY;
        for &d in &grid {
            let v = self.value(d);
            if !(v.is_finite() && v > prev) {
                return Err(Error::InvalidParameter(format!(
                    "phi(delta) = delta^(1/{}) (1+|log|)^{} is not strictly increasing near {d:e}",
                    self.q, self.s
                )));
            }
            let ratio = v / d;
            if ratio > prev_ratio * (1.0 + 1e-12) {
                return Err(Error::InvalidParameter(format!(
                    "phi(delta)/delta increases near {d:e}; generator is not quasi-concave"
                )));
            }
            prev = v;
            prev_ratio = ratio;
        }
        Ok(())
    }
}

/// Peak ordinate of the k-th side arch of `sin^2(y/2)/y^2`: the root of
/// `tan u = u` on `(pi k, pi k + pi/2)`, doubled. Large branches use the
/// classical series around `x = pi k + pi/2`, accurate to `O(x^{-5})`.
fn arch_peak(k: u32) -> f64 {
    if k >= 1000 {
        let x = PI * k as f64 + 0.5 * PI;
        return 2.0 * (x - 1.0 / x - 2.0 / (3.0 * x * x * x));
    }
    let g = |u: f64| u * u.cos() - u.sin();
    let lo = PI * k as f64;
    let hi = lo + 0.5 * PI;
    2.0 * bisect(g, lo, hi, 1e-14).expect("tan u = u always brackets on this branch")
}

/// Below this level the arch sum is replaced by its equidistribution limit
/// `G = (4/pi) lambda^{-1/2}`; the relative error at the seam is ~3e-7 and
/// shrinks like `lambda^{1/2}`.
const G_ASYMPTOTIC_LEVEL: f64 = 4e-9;

/// Distribution function `G(lambda) = m{y in R : sin^2(y/2)/y^2 > lambda}`
/// for `lambda in (0, 1/4)`.
///
/// The central arch is strictly decreasing and contributes one crossing;
/// side arches contribute a rise/fall pair until their peaks drop below the
/// level, which the envelope `1/y^2` certifies to happen by `y =
/// lambda^{-1/2}`.
pub fn sinc_distribution(lambda: f64, tol: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda < 0.25) {
        return Err(Error::OutOfRange(format!("level {lambda} outside (0, 1/4)")));
    }
    if lambda < G_ASYMPTOTIC_LEVEL {
        return Ok((4.0 / PI) / lambda.sqrt());
    }
    let root_tol = tol.clamp(1e-14, 1e-6);
    let f = |y: f64| sinc_sq_profile(y) - lambda;
    let central = bisect(f, 1e-12, 2.0 * PI * (1.0 - 1e-14), root_tol)?;
    let mut total = central;
    let k_max = (lambda.powf(-0.5) / (2.0 * PI)).ceil() as u32 + 1;
    for k in 1..=k_max {
        let peak = arch_peak(k);
        if sinc_sq_profile(peak) <= lambda {
            // Peaks decay monotonically; later arches sit below the level.
            break;
        }
        let a = 2.0 * PI * k as f64;
        let b = a + 2.0 * PI;
        let rise = bisect(f, a + 1e-13 * a, peak, root_tol)?;
        let fall = bisect(f, peak, b - 1e-13 * b, root_tol)?;
        total += fall - rise;
    }
    Ok(2.0 * total)
}

/// Lebesgue measure of `{x in [a, b] : f(x) > level}` by dense sampling and
/// bisection of the crossings. Narrower features than `(b-a)/samples` can be
/// missed; callers pick the sample count from the kernel degree.
fn measure_above<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, level: f64, samples: usize) -> f64 {
    let h = (b - a) / samples as f64;
    let mut measure = 0.0;
    let mut x_prev = a;
    let mut above_prev = f(a) > level;
    let mut start = if above_prev { Some(a) } else { None };
    for i in 1..=samples {
        let x = a + i as f64 * h;
        let above = f(x) > level;
        if above != above_prev {
            let crossing =
                bisect(|t| f(t) - level, x_prev, x, 1e-13).unwrap_or(0.5 * (x_prev + x));
            if above {
                start = Some(crossing);
            } else if let Some(s) = start.take() {
                measure += crossing - s;
            }
        }
        x_prev = x;
        above_prev = above;
    }
    if let Some(s) = start {
        measure += b - s;
    }
    measure
}

fn eval_circle_sum(terms: &[(f64, KernelSpec)], x: f64) -> f64 {
    use crate::kernels::{eval_fejer_continuous, eval_fejer_discrete, eval_power};
    terms
        .iter()
        .map(|&(c, ref k)| {
            c * match *k {
                KernelSpec::FejerContinuous { n } => eval_fejer_continuous(n, x),
                KernelSpec::FejerDiscrete { n } => eval_fejer_discrete(n, x),
                KernelSpec::Power { n, m } => eval_power(n, m, x),
                KernelSpec::Generalized { .. } => f64::NAN,
            }
        })
        .sum()
}

/// Distribution function `m{|f| > lambda}` of a witness.
pub fn distribution_function(
    witness: &Witness,
    lambda: f64,
    domain: Domain,
    tol: f64,
) -> Result<f64> {
    witness.validate()?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::OutOfRange(format!("level {lambda} must be positive")));
    }
    match witness {
        Witness::Indicator { measure, height } => {
            Ok(if lambda < height.abs() { *measure } else { 0.0 })
        }
        Witness::Sum(terms) => match domain {
            Domain::RealLine => {
                if let [(c, spec)] = &terms[..] {
                    let ca = c.abs();
                    match *spec {
                        KernelSpec::FejerContinuous { n } => {
                            let level = lambda / ca;
                            if level >= 0.25 {
                                return Ok(0.0);
                            }
                            Ok(sinc_distribution(level, tol)? / n as f64)
                        }
                        KernelSpec::Power { n, m } => {
                            let level = (lambda / ca).powf(1.0 / m as f64);
                            if level >= 0.25 {
                                return Ok(0.0);
                            }
                            Ok(sinc_distribution(level, tol)? / n as f64)
                        }
                        _ => Err(Error::Unsupported(
                            "real-line distribution functions cover continuous Fejer kernels, \
                             their powers and indicators"
                                .into(),
                        )),
                    }
                } else {
                    Err(Error::Unsupported(
                        "real-line distribution functions cover single-kernel witnesses only"
                            .into(),
                    ))
                }
            }
            Domain::Circle => {
                if terms.iter().any(|(_, k)| matches!(k, KernelSpec::Generalized { .. })) {
                    return Err(Error::Unsupported(
                        "generalized kernels are not supported on the circle".into(),
                    ));
                }
                let degree: u32 = terms.iter().map(|(_, k)| k.class_degree()).max().unwrap_or(1);
                let samples = (64 * degree as usize).clamp(2048, 400_000);
                let f = |x: f64| eval_circle_sum(terms, x).abs();
                Ok(2.0 * measure_above(f, 0.0, PI, lambda, samples))
            }
        },
    }
}

/// Lorentz norm `int phi(d_f(lambda)) dlambda`.
///
/// The substitution `lambda = sup |f| u^2` clusters quadrature nodes where
/// the distribution blows up; optional breakpoints split the integration at
/// caller-supplied levels.
pub fn lorentz_norm(
    witness: &Witness,
    phi: &LorentzPhi,
    domain: Domain,
    lambda_grid: Option<&[f64]>,
    tol: f64,
) -> Result<f64> {
    witness.validate()?;
    phi.validate()?;
    if !(tol > 0.0 && tol <= 1e-2) {
        return Err(Error::InvalidParameter(format!("tolerance {tol} outside (0, 1e-2]")));
    }
    if let Witness::Indicator { measure, height } = witness {
        return Ok(height.abs() * phi.value(*measure));
    }
    let sup = sup_norm(witness, domain)?;
    if sup == 0.0 {
        return Ok(0.0);
    }
    let integrand = |u: f64| -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        let lambda = sup * u * u;
        match distribution_function(witness, lambda, domain, tol) {
            Ok(d) => phi.value(d) * 2.0 * sup * u,
            Err(_) => f64::NAN,
        }
    };
    // Probe once so structurally unsupported witnesses error out instead of
    // poisoning the quadrature with NaN.
    distribution_function(witness, 0.5 * sup, domain, tol)?;
    let mut knots = vec![0.0, 1.0];
    if let Some(grid) = lambda_grid {
        for &l in grid {
            if l > 0.0 && l < sup {
                knots.push((l / sup).sqrt());
            }
        }
    }
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let mut value = 0.0;
    for pair in knots.windows(2) {
        let q = integrate(&integrand, pair[0], pair[1], 0.5 * tol, 1e-280, 8, 40_000)?;
        value += q.value;
    }
    if !value.is_finite() {
        return Err(Error::DivergentIntegral(format!(
            "Lorentz level integral diverged near lambda = 0 for q = {}",
            phi.q
        )));
    }
    Ok(value)
}

/// Fundamental function of `Lambda(phi)`: an indicator's distribution is a
/// step, so the norm is `phi(delta)` exactly.
pub fn lorentz_fundamental(phi: &LorentzPhi, delta: f64) -> Result<f64> {
    phi.validate()?;
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::OutOfRange(format!("indicator measure {delta} outside (0, 1]")));
    }
    Ok(phi.value(delta))
}
