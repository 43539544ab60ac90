//! Power moments `|f|_p = (int |f|^p)^{1/p}` of witness functions.
//!
//! Two independent routes exist for the continuous Fejer family: direct
//! quadrature in `x` (arch by arch, far tail by the Euler-Maclaurin
//! acceleration) and the closed form `|D_n|_p^p = 2^{1-2p} I(2p) / n` through
//! the absolute sinc moment `I(s)`. Keeping both honest against each other is
//! one of the main consistency checks of the crate.

use crate::error::{Error, Result};
use crate::generalized::{profile_moments, GeneralizedEvaluator};
use crate::kernels::{
    eval_fejer_continuous, eval_fejer_discrete, eval_power, KernelSpec, Witness,
};
use crate::oscillatory::{periodic_power_tail, sinc};
use crate::quad::integrate;
use crate::solve::golden_max;
use rayon::prelude::*;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

/// Underlying measure space of a witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Domain {
    /// The real line with Lebesgue measure.
    RealLine,
    /// The circle, realised as `[-pi, pi]` with Lebesgue measure.
    Circle,
}

/// Geometric grid `1, 1.25, 1.5625, ... , 64` used wherever a moment profile
/// is needed and the caller does not supply one.
pub fn default_p_grid() -> Vec<f64> {
    let mut grid = Vec::new();
    let mut p = 1.0f64;
    while p < 64.0 * (1.0 - 1e-12) {
        grid.push(p);
        p *= 1.25;
    }
    grid.push(64.0);
    grid
}

/// Absolute sinc moment `I(s) = int_R |sin(y)/y|^s dy`, for `s > 1.01`.
///
/// Arch integrals over `[k pi, (k+1) pi]` plus the accelerated periodic tail.
/// Values are cached; a cache entry is reused when it was computed at least
/// as tightly as requested.
pub fn sinc_power_integral(s: f64, tol: f64) -> Result<f64> {
    if !(s > 1.01 && s.is_finite()) {
        return Err(Error::OutOfRange(format!(
            "sinc moment exponent s = {s} outside (1.01, inf)"
        )));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidParameter(format!("tolerance {tol} must be positive")));
    }
    static CACHE: OnceLock<Mutex<HashMap<u64, (f64, f64)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = s.to_bits();
    if let Some(&(value, tol_used)) = cache.lock().unwrap().get(&key) {
        if tol_used <= tol {
            return Ok(value);
        }
    }
    let tol_used = tol.min(1e-11);
    let value = arch_sum_with_tail(&|y: f64| sinc(y).abs().powf(s), PI, s, tol_used)?;
    cache.lock().unwrap().insert(key, (value, tol_used));
    Ok(value)
}

/// `2 (sum of arch integrals on [0, K T] + Euler-Maclaurin tail)` for an even
/// integrand `f >= 0` that factors as `g(x) x^{-s}` with `g` periodic of
/// period `T` (here `g = |sin|^s`-type numerators).
///
/// For `s >= 30` the tail beyond four arches is below relative 1e-25 and is
/// dropped outright.
fn arch_sum_with_tail(f: &dyn Fn(f64) -> f64, period: f64, s: f64, tol: f64) -> Result<f64> {
    let mut arches: usize = if s >= 30.0 { 4 } else { 64 };
    let mut core = 0.0;
    let mut done = 0usize;
    loop {
        for k in done..arches {
            let a = k as f64 * period;
            core += integrate(f, a, a + period, 0.25 * tol, 1e-300, 2, 800)?.value;
        }
        done = arches;
        if s >= 30.0 {
            return Ok(2.0 * core);
        }
        let start = arches as f64 * period;
        let g = |u: f64| f(start + u) * (start + u).powf(s);
        let tail = periodic_power_tail(&g, period, s, start)?;
        let total = core + tail.value;
        if tail.error <= 0.25 * tol * total || arches >= 1024 {
            if tail.error > tol * total {
                return Err(Error::QuadratureFailure {
                    context: format!("sinc-type moment tail at s = {s}"),
                    estimate: 2.0 * total,
                    tolerance: tol,
                });
            }
            return Ok(2.0 * total);
        }
        arches *= 2;
    }
}

/// Closed-form route `|D_n|_p = (2^{1-2p} I(2p) / n)^{1/p}` for the
/// continuous Fejer kernel.
pub fn fejer_moment_closed_form(n: u32, p: f64, tol: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("kernel degree n must be >= 1".into()));
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("moment order p = {p} outside [1, inf)")));
    }
    let i2p = sinc_power_integral(2.0 * p, tol)?;
    Ok(((2.0f64).powf(1.0 - 2.0 * p) * i2p / n as f64).powf(1.0 / p))
}

/// Quadrature route for `int_R S(nx)^q dx`: arches `[2 pi k/n, 2 pi (k+1)/n]`
/// in `x` plus the accelerated tail of `n^{-2q} |sin(nx/2)|^{2q} x^{-2q}`.
fn fejer_power_integral_x(n: u32, q: f64, tol: f64) -> Result<f64> {
    let nf = n as f64;
    let period = 2.0 * PI / nf;
    let s = 2.0 * q;
    let scale = nf.powf(-s);
    let mut arches: usize = if s >= 30.0 { 4 } else { 64 };
    let mut core = 0.0;
    let mut done = 0usize;
    let f = |x: f64| eval_fejer_continuous(n, x).powf(q);
    loop {
        for k in done..arches {
            let a = k as f64 * period;
            core += integrate(&f, a, a + period, 0.25 * tol, 1e-300, 2, 800)?.value;
        }
        done = arches;
        if s >= 30.0 {
            return Ok(2.0 * core);
        }
        let start = arches as f64 * period;
        let g = |u: f64| (0.5 * nf * (start + u)).sin().abs().powf(s);
        let tail = periodic_power_tail(&g, period, s, start)?;
        let total = core + scale * tail.value;
        if scale * tail.error <= 0.25 * tol * total || arches >= 1024 {
            return Ok(2.0 * total);
        }
        arches *= 2;
    }
}

fn validate_p_tol(p: f64, tol: f64) -> Result<()> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("moment order p = {p} outside [1, inf)")));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidParameter(format!("tolerance {tol} must be positive")));
    }
    Ok(())
}

/// `L_p` norm of a witness over the given domain.
pub fn lp_norm(witness: &Witness, p: f64, domain: Domain, tol: f64) -> Result<f64> {
    witness.validate()?;
    validate_p_tol(p, tol)?;
    match witness {
        Witness::Indicator { measure, height } => {
            if domain == Domain::Circle && *measure > 2.0 * PI + 1e-12 {
                return Err(Error::InvalidParameter(format!(
                    "indicator measure {measure} exceeds the circle length 2 pi"
                )));
            }
            Ok(height.abs() * measure.powf(1.0 / p))
        }
        Witness::Sum(terms) => match domain {
            Domain::RealLine => real_line_lp(terms, p, tol),
            Domain::Circle => circle_lp(terms, p, tol),
        },
    }
}

fn real_line_lp(terms: &[(f64, KernelSpec)], p: f64, tol: f64) -> Result<f64> {
    if terms.len() == 1 {
        let (c, ref spec) = terms[0];
        match *spec {
            KernelSpec::FejerContinuous { n } => {
                return Ok(c.abs() * fejer_power_integral_x(n, p, tol)?.powf(1.0 / p));
            }
            KernelSpec::Power { n, m } => {
                return Ok(c.abs() * fejer_power_integral_x(n, m as f64 * p, tol)?.powf(1.0 / p));
            }
            KernelSpec::Generalized { n, alpha, beta } => {
                let ev = GeneralizedEvaluator::new(alpha, beta)?;
                let (vals, _) = profile_moments(&ev, &[p], tol)?;
                return Ok(c.abs() * 2.0 * (n as f64).powf(1.0 - 1.0 / p) * vals[0]);
            }
            KernelSpec::FejerDiscrete { .. } => {
                return Err(Error::DivergentIntegral(
                    "periodic kernel has infinite L_p mass on the real line".into(),
                ));
            }
        }
    }
    sum_real_line_lp(terms, p, tol)
}

/// Multi-term real-line sums of continuous Fejer kernels and their powers.
///
/// Core `[0, X]` by adaptive panels; beyond `X` the `m = 1` part dominates:
/// it equals `G(x) / x^2` with `G` of period `2 pi` (integer degrees), so the
/// accelerated tail applies to `|G|^p x^{-2p}`, and the `m >= 2` residue is
/// bounded by a secant majorant and charged to the error budget.
fn sum_real_line_lp(terms: &[(f64, KernelSpec)], p: f64, tol: f64) -> Result<f64> {
    let mut parts: Vec<(f64, u32, u32)> = Vec::with_capacity(terms.len());
    for (c, spec) in terms {
        match *spec {
            KernelSpec::FejerContinuous { n } => parts.push((*c, n, 1)),
            KernelSpec::Power { n, m } => parts.push((*c, n, m)),
            KernelSpec::FejerDiscrete { .. } => {
                return Err(Error::DivergentIntegral(
                    "periodic kernel has infinite L_p mass on the real line".into(),
                ));
            }
            KernelSpec::Generalized { .. } => {
                return Err(Error::Unsupported(
                    "generalized kernels are only supported as single-kernel witnesses on the \
                     real line"
                        .into(),
                ));
            }
        }
    }
    let n_max = parts.iter().map(|&(_, n, _)| n).max().unwrap() as f64;
    let n_min = parts.iter().map(|&(_, n, _)| n).min().unwrap() as f64;
    let f = |x: f64| {
        parts
            .iter()
            .map(|&(c, n, m)| c * eval_power(n, m, x))
            .sum::<f64>()
            .abs()
            .powf(p)
    };
    // m = 1 numerator: G(u) = sum c_i sin^2(n_i u / 2) / n_i^2, period 2 pi.
    let g_terms: Vec<(f64, u32)> =
        parts.iter().filter(|&&(_, _, m)| m == 1).map(|&(c, n, _)| (c, n)).collect();
    let b_res: f64 = parts
        .iter()
        .filter(|&&(_, _, m)| m >= 2)
        .map(|&(c, n, _)| c.abs() / (n as f64).powi(4))
        .sum();
    let a_main: f64 = g_terms.iter().map(|&(c, n)| c.abs() / (n as f64).powi(2)).sum();
    let period = 2.0 * PI;
    let mut cycles = ((64.0 / period).ceil() as usize).max((8.0 / n_min).ceil() as usize);
    for _ in 0..6 {
        let x_cut = cycles as f64 * period;
        let splits = ((x_cut * n_max / PI).ceil() as usize + 4).min(100_000);
        let core = integrate(&f, 0.0, x_cut, 0.25 * tol, 1e-300, splits, 500_000)?.value;
        let g_abs_p = |u: f64| {
            let x = x_cut + u;
            g_terms
                .iter()
                .map(|&(c, n)| {
                    let sh = (0.5 * n as f64 * x).sin();
                    c * sh * sh / (n as f64 * n as f64)
                })
                .sum::<f64>()
                .abs()
                .powf(p)
        };
        let (tail_val, tail_err) = if g_terms.is_empty() {
            (0.0, 0.0)
        } else {
            let t = periodic_power_tail(&g_abs_p, period, 2.0 * p, x_cut)?;
            (t.value, t.error)
        };
        // | |G/x^2 + R|^p - |G/x^2|^p | <= p (A/x^2 + B/x^4)^{p-1} B / x^4.
        let c_bound = a_main + b_res / (x_cut * x_cut);
        let cross = p * c_bound.powf(p - 1.0) * b_res * x_cut.powf(-(2.0 * p + 1.0))
            / (2.0 * p + 1.0);
        let pure_res = b_res.powf(p) * x_cut.powf(1.0 - 4.0 * p) / (4.0 * p - 1.0);
        let total = core + tail_val;
        let err = tail_err + cross + pure_res;
        if err <= 0.5 * tol * total {
            return Ok((2.0 * total).powf(1.0 / p));
        }
        cycles *= 2;
    }
    Err(Error::QuadratureFailure {
        context: format!("real-line sum moment at p = {p}"),
        estimate: f64::NAN,
        tolerance: tol,
    })
}

/// Pointwise evaluator for a sum witness on the circle; generalized
/// components get a Filon table each.
struct CircleSum<'a> {
    terms: &'a [(f64, KernelSpec)],
    tables: Vec<Option<GeneralizedEvaluator>>,
}

impl<'a> CircleSum<'a> {
    fn new(terms: &'a [(f64, KernelSpec)]) -> Result<Self> {
        let tables = terms
            .iter()
            .map(|(_, spec)| match *spec {
                KernelSpec::Generalized { alpha, beta, .. } => {
                    GeneralizedEvaluator::new(alpha, beta).map(Some)
                }
                _ => Ok(None),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { terms, tables })
    }

    fn eval(&self, x: f64) -> f64 {
        self.terms
            .iter()
            .zip(&self.tables)
            .map(|(&(c, ref spec), table)| {
                c * match *spec {
                    KernelSpec::FejerContinuous { n } => eval_fejer_continuous(n, x),
                    KernelSpec::FejerDiscrete { n } => eval_fejer_discrete(n, x),
                    KernelSpec::Power { n, m } => eval_power(n, m, x),
                    KernelSpec::Generalized { n, .. } => {
                        table.as_ref().unwrap().kernel_value(n, x)
                    }
                }
            })
            .sum()
    }

    fn degree(&self) -> u32 {
        self.terms.iter().map(|(_, k)| k.class_degree()).sum::<u32>().max(1)
    }
}

fn circle_lp(terms: &[(f64, KernelSpec)], p: f64, tol: f64) -> Result<f64> {
    let sum = CircleSum::new(terms)?;
    let splits = (sum.degree() as usize).clamp(8, 20_000);
    let quad = integrate(
        &|x| sum.eval(x).abs().powf(p),
        0.0,
        PI,
        0.5 * tol,
        1e-300,
        splits,
        200_000,
    )?;
    Ok((2.0 * quad.value).powf(1.0 / p))
}

/// Essential supremum of a witness.
///
/// Exact peaks for single kernels (all families peak at the origin in
/// absolute value); dense grid plus golden-section refinement for sums.
pub fn sup_norm(witness: &Witness, domain: Domain) -> Result<f64> {
    witness.validate()?;
    match witness {
        Witness::Indicator { height, .. } => Ok(height.abs()),
        Witness::Sum(terms) => {
            if terms.len() == 1 {
                let (c, ref spec) = terms[0];
                let peak = match *spec {
                    KernelSpec::FejerContinuous { .. } => 0.25,
                    KernelSpec::Power { m, .. } => (0.25f64).powi(m as i32),
                    KernelSpec::FejerDiscrete { .. } => 1.0,
                    KernelSpec::Generalized { n, alpha, beta } => {
                        2.0 * n as f64 * GeneralizedEvaluator::new(alpha, beta)?.f0()
                    }
                };
                return Ok(c.abs() * peak);
            }
            match domain {
                Domain::Circle => {
                    let sum = CircleSum::new(terms)?;
                    let m = (32 * sum.degree() as usize).clamp(512, 200_000);
                    Ok(grid_sup(&|x| sum.eval(x).abs(), 0.0, PI, m))
                }
                Domain::RealLine => real_line_sup(terms),
            }
        }
    }
}

fn grid_sup(f: &dyn Fn(f64) -> f64, a: f64, b: f64, points: usize) -> f64 {
    let h = (b - a) / points as f64;
    let mut best_x = a;
    let mut best = f(a);
    for i in 1..=points {
        let x = a + i as f64 * h;
        let v = f(x);
        if v > best {
            best = v;
            best_x = x;
        }
    }
    let lo = (best_x - h).max(a);
    let hi = (best_x + h).min(b);
    let (_, refined) = golden_max(f, lo, hi, 1e-12);
    best.max(refined)
}

fn real_line_sup(terms: &[(f64, KernelSpec)]) -> Result<f64> {
    let mut parts: Vec<(f64, u32, u32)> = Vec::new();
    for (c, spec) in terms {
        match *spec {
            KernelSpec::FejerContinuous { n } => parts.push((*c, n, 1)),
            KernelSpec::Power { n, m } => parts.push((*c, n, m)),
            _ => {
                return Err(Error::Unsupported(
                    "real-line sup of sums is supported for continuous Fejer kernels and their \
                     powers only"
                        .into(),
                ))
            }
        }
    }
    let n_min = parts.iter().map(|&(_, n, _)| n).min().unwrap() as f64;
    let f = |x: f64| parts.iter().map(|&(c, n, m)| c * eval_power(n, m, x)).sum::<f64>().abs();
    let mut reach = 4.0 * PI / n_min;
    for _ in 0..14 {
        let best = grid_sup(&f, 0.0, reach, 8192);
        // Beyond `reach` every term is inside its envelope tail.
        let cap: f64 = parts
            .iter()
            .map(|&(c, n, m)| c.abs() * (n as f64 * reach).powi(-2 * m as i32))
            .sum();
        if cap <= best {
            return Ok(best);
        }
        reach *= 2.0;
    }
    Err(Error::QuadratureFailure {
        context: "real-line sup search did not localise the maximum".into(),
        estimate: f64::NAN,
        tolerance: 0.0,
    })
}

/// Moment profile of a witness over a `p` grid.
#[derive(Debug, Clone, serde::Serialize)]
pub struct MomentProfile {
    pub p_grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Essential supremum, when requested.
    pub sup: Option<f64>,
    /// Requested relative tolerance.
    pub rel_tol: f64,
    /// Estimated achieved relative tolerance (worse than requested when tail
    /// extrapolation had to close a slowly converging order).
    pub achieved_tol: f64,
}

pub fn validate_p_grid(p_grid: &[f64]) -> Result<()> {
    if p_grid.is_empty() {
        return Err(Error::EmptyGrid("empty p grid".into()));
    }
    for pair in p_grid.windows(2) {
        if !(pair[1] > pair[0]) {
            return Err(Error::InvalidParameter(
                "p grid must be strictly increasing".into(),
            ));
        }
    }
    for &p in p_grid {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::InvalidParameter(format!("moment order p = {p} outside [1, inf)")));
        }
    }
    Ok(())
}

/// All `L_p` norms on the grid, sharing oscillatory work where the witness is
/// a single generalized kernel.
pub fn moment_profile(
    witness: &Witness,
    p_grid: &[f64],
    domain: Domain,
    tol: f64,
    with_sup: bool,
) -> Result<MomentProfile> {
    witness.validate()?;
    validate_p_grid(p_grid)?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidParameter(format!("tolerance {tol} must be positive")));
    }
    let mut achieved = tol;
    let values = match witness {
        Witness::Sum(terms) if terms.len() == 1 && domain == Domain::RealLine => {
            if let (c, KernelSpec::Generalized { n, alpha, beta }) = (terms[0].0, &terms[0].1) {
                let ev = GeneralizedEvaluator::new(*alpha, *beta)?;
                let (profile, err) = profile_moments(&ev, p_grid, tol)?;
                achieved = err.max(tol);
                let nf = *n as f64;
                profile
                    .iter()
                    .zip(p_grid)
                    .map(|(v, &p)| c.abs() * 2.0 * nf.powf(1.0 - 1.0 / p) * v)
                    .collect()
            } else {
                par_profile(witness, p_grid, domain, tol)?
            }
        }
        _ => par_profile(witness, p_grid, domain, tol)?,
    };
    let sup = if with_sup { Some(sup_norm(witness, domain)?) } else { None };
    Ok(MomentProfile { p_grid: p_grid.to_vec(), values, sup, rel_tol: tol, achieved_tol: achieved })
}

fn par_profile(witness: &Witness, p_grid: &[f64], domain: Domain, tol: f64) -> Result<Vec<f64>> {
    p_grid.par_iter().map(|&p| lp_norm(witness, p, domain, tol)).collect()
}
