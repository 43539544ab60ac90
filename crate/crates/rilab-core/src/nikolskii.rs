//! The Nikol'skii two-space functional on explicit witnesses: single
//! evaluations, campaigns over degree grids, side-condition checks, and
//! kernel-shape optimization.
//!
//! All witness quotients are certified lower bounds: families are finite, so
//! no result here claims to realize the sup over a whole approximation class.
//! Witnesses live on the real line throughout this module.

use crate::error::{Error, Result};
use crate::fit::{fit_rates, RateFit};
use crate::grand::{clustered_grid, grand_fundamental, grand_norm_from_profile, GrandSpec};
use crate::kernels::{KernelSpec, Witness};
use crate::lorentz::{lorentz_fundamental, lorentz_norm, sinc_distribution, LorentzPhi};
use crate::moments::{moment_profile, Domain};
use crate::orlicz::{
    orlicz_amemiya_norm, orlicz_fundamental, orlicz_luxemburg_norm, OrliczPhi,
};
use crate::quad::integrate;
use crate::spaces::{fundamental_function, space_norm, SpaceSpec};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const NF_DOMAIN: Domain = Domain::RealLine;

/// Degree-to-type map `sigma(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SigmaRule {
    /// `sigma(n) = n`.
    Degree,
    /// `sigma(n) = c n^gamma`.
    PowerLaw { c: f64, gamma: f64 },
}

impl Default for SigmaRule {
    fn default() -> Self {
        SigmaRule::Degree
    }
}

impl SigmaRule {
    pub fn validate(&self) -> Result<()> {
        if let SigmaRule::PowerLaw { c, gamma } = self {
            if !(c.is_finite() && *c > 0.0 && gamma.is_finite() && *gamma > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "sigma rule needs c > 0 and gamma > 0, got ({c}, {gamma})"
                )));
            }
        }
        Ok(())
    }

    pub fn apply(&self, n: u32) -> f64 {
        match *self {
            SigmaRule::Degree => n as f64,
            SigmaRule::PowerLaw { c, gamma } => c * (n as f64).powf(gamma),
        }
    }
}

/// Normalization constants and the sigma rule of one experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NfParams {
    pub k1: f64,
    pub k2: f64,
    pub sigma_rule: SigmaRule,
}

impl Default for NfParams {
    fn default() -> Self {
        NfParams { k1: 1.0, k2: 1.0, sigma_rule: SigmaRule::Degree }
    }
}

impl NfParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.k1 > 0.0 && self.k1.is_finite() && self.k2 > 0.0 && self.k2.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "constants K1 = {}, K2 = {} must be positive",
                self.k1, self.k2
            )));
        }
        self.sigma_rule.validate()
    }

    /// `sigma(n)`, rejected below 3 where the normalization degenerates.
    pub fn sigma(&self, n: u32) -> Result<f64> {
        let s = self.sigma_rule.apply(n);
        if !(s >= 3.0 && s.is_finite()) {
            return Err(Error::OutOfRange(format!("sigma({n}) = {s} outside [3, inf)")));
        }
        Ok(s)
    }
}

/// One evaluated witness quotient with all four components retained.
#[derive(Debug, Clone, Serialize)]
pub struct NfEvaluation {
    pub n: u32,
    pub witness: KernelSpec,
    pub space_x: SpaceSpec,
    pub space_y: SpaceSpec,
    pub k1: f64,
    pub k2: f64,
    pub sigma: f64,
    pub norm_x: f64,
    pub norm_y: f64,
    pub fund_x: f64,
    pub fund_y: f64,
    pub value: f64,
}

impl NfEvaluation {
    /// The quotient recomputed from the stored components; agrees with
    /// `value` to machine precision.
    pub fn recompose(&self) -> f64 {
        (self.norm_x / self.fund_x) / (self.norm_y / self.fund_y)
    }
}

fn named_norm(space: &SpaceSpec, witness: &Witness, tol: f64) -> Result<f64> {
    space_norm(space, witness, NF_DOMAIN, tol).map_err(|e| match e {
        e @ Error::NormFailure { .. } => e,
        other => {
            Error::NormFailure { space: space.to_string(), reason: other.to_string() }
        }
    })
}

fn evaluate_quotient(
    x: &SpaceSpec,
    y: &SpaceSpec,
    t: &KernelSpec,
    ambient_n: u32,
    params: &NfParams,
    tol: f64,
) -> Result<NfEvaluation> {
    params.validate()?;
    t.validate()?;
    if t.class_degree() > ambient_n {
        return Err(Error::InvalidParameter(format!(
            "witness degree {} exceeds the ambient class degree {ambient_n}",
            t.class_degree()
        )));
    }
    let sigma = params.sigma(ambient_n)?;
    let witness = Witness::kernel(t.clone());
    let norm_x = named_norm(x, &witness, tol)?;
    let norm_y = named_norm(y, &witness, tol)?;
    let fund_x = fundamental_function(x, params.k1 / sigma)?;
    let fund_y = fundamental_function(y, params.k2 / sigma)?;
    let value = (norm_x / fund_x) / (norm_y / fund_y);
    if !(value.is_finite() && value > 0.0) {
        return Err(Error::NormFailure {
            space: format!("{x} / {y}"),
            reason: format!("witness quotient {value} is not a positive real"),
        });
    }
    Ok(NfEvaluation {
        n: ambient_n,
        witness: t.clone(),
        space_x: x.clone(),
        space_y: y.clone(),
        k1: params.k1,
        k2: params.k2,
        sigma,
        norm_x,
        norm_y,
        fund_x,
        fund_y,
        value,
    })
}

/// Witness quotient for one kernel; `sigma` is driven by the witness's own
/// class degree.
pub fn nf_witness_value(
    x: &SpaceSpec,
    y: &SpaceSpec,
    t: &KernelSpec,
    params: &NfParams,
    tol: f64,
) -> Result<NfEvaluation> {
    evaluate_quotient(x, y, t, t.class_degree(), params, tol)
}

/// Best witness quotient over a finite family inside the degree-`n` class.
/// Exact max, so enlarging the family never decreases the result.
pub fn nf_lower_bound(
    x: &SpaceSpec,
    y: &SpaceSpec,
    n: u32,
    params: &NfParams,
    family: &[KernelSpec],
    tol: f64,
) -> Result<NfEvaluation> {
    if family.is_empty() {
        return Err(Error::EmptyGrid("empty witness family".into()));
    }
    let evals: Vec<NfEvaluation> = family
        .par_iter()
        .map(|t| evaluate_quotient(x, y, t, n, params, tol))
        .collect::<Result<Vec<_>>>()?;
    let mut best = None::<NfEvaluation>;
    for e in evals {
        match &best {
            Some(b) if e.value <= b.value => {}
            _ => best = Some(e),
        }
    }
    Ok(best.expect("nonempty family"))
}

/// Witness families parameterized by the ambient degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum WitnessFamily {
    /// The single kernel of full degree.
    Fejer,
    /// Full-degree kernel plus powers `m = 2..=max_m` of lower-degree ones,
    /// keeping every member inside the class.
    FejerPowers { max_m: u32 },
    /// Two-parameter kernels on a shape grid.
    GeneralizedGrid { alphas: Vec<f64>, betas: Vec<f64> },
}

impl WitnessFamily {
    pub fn members(&self, n: u32) -> Vec<KernelSpec> {
        match self {
            WitnessFamily::Fejer => vec![KernelSpec::FejerContinuous { n }],
            WitnessFamily::FejerPowers { max_m } => {
                let mut out = vec![KernelSpec::FejerContinuous { n }];
                for m in 2..=*max_m {
                    if n / m >= 1 {
                        out.push(KernelSpec::Power { n: n / m, m });
                    }
                }
                out
            }
            WitnessFamily::GeneralizedGrid { alphas, betas } => {
                let mut out = Vec::with_capacity(alphas.len() * betas.len());
                for &a in alphas {
                    for &b in betas {
                        out.push(KernelSpec::Generalized { n, alpha: a, beta: b });
                    }
                }
                out
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PairVerdict {
    ConsistentWithBounded,
    Unstable,
    NotApplicable,
}

#[derive(Debug, Clone, Serialize)]
pub struct StrongPairReport {
    pub n_grid: Vec<u32>,
    pub evaluations: Vec<NfEvaluation>,
    pub running_max: Vec<f64>,
    /// Relative growth of the running max across the last octave of `n`.
    pub last_octave_increase: f64,
    pub verdict: PairVerdict,
    pub disclaimer: String,
}

fn check_n_grid(n_grid: &[u32], min_len: usize) -> Result<()> {
    if n_grid.len() < min_len {
        return Err(Error::EmptyGrid(format!(
            "degree grid needs at least {min_len} points, got {}",
            n_grid.len()
        )));
    }
    if n_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("degree grid must increase strictly".into()));
    }
    Ok(())
}

/// Support comparison behind the boundedness verdict: the left endpoint of
/// one interval beyond the right endpoint of the other.
fn supports_separated(x: &SpaceSpec, y: &SpaceSpec) -> bool {
    match (x.support(), y.support()) {
        (Some((ax, _)), Some((_, by))) => ax > by,
        _ => false,
    }
}

/// Lower-bound table over a degree grid with a boundedness stability verdict.
pub fn strong_pair_scan(
    x: &SpaceSpec,
    y: &SpaceSpec,
    n_grid: &[u32],
    params: &NfParams,
    family: &WitnessFamily,
    tol: f64,
) -> Result<StrongPairReport> {
    check_n_grid(n_grid, 2)?;
    let evaluations: Vec<NfEvaluation> = n_grid
        .par_iter()
        .map(|&n| nf_lower_bound(x, y, n, params, &family.members(n), tol))
        .collect::<Result<Vec<_>>>()?;
    let mut running_max = Vec::with_capacity(evaluations.len());
    let mut m = f64::NEG_INFINITY;
    for e in &evaluations {
        m = m.max(e.value);
        running_max.push(m);
    }
    let n_max = *n_grid.last().unwrap();
    let octave_start = n_grid.iter().position(|&n| 2 * n >= n_max).unwrap();
    let base = running_max[octave_start];
    let last_octave_increase = (running_max[running_max.len() - 1] - base) / base;
    let verdict = if !supports_separated(x, y) {
        PairVerdict::NotApplicable
    } else if last_octave_increase < 0.01 {
        PairVerdict::ConsistentWithBounded
    } else {
        PairVerdict::Unstable
    };
    Ok(StrongPairReport {
        n_grid: n_grid.to_vec(),
        evaluations,
        running_max,
        last_octave_increase,
        verdict,
        disclaimer: "finite witness families certify lower bounds only; the verdict is a \
                     stability heuristic, not a proof of boundedness"
            .into(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptBounds {
    pub alpha: (f64, f64),
    pub beta: (f64, f64),
}

impl Default for OptBounds {
    fn default() -> Self {
        OptBounds { alpha: (0.05, 8.0), beta: (0.05, 8.0) }
    }
}

impl OptBounds {
    pub fn validate(&self) -> Result<()> {
        for (name, (lo, hi)) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !(lo > 0.0 && lo < hi && hi.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} bounds ({lo}, {hi}) must satisfy 0 < lo < hi < inf"
                )));
            }
        }
        Ok(())
    }
}

/// Search effort knobs; the defaults match the documented pipeline
/// (17x17 grid, 200 simplex iterations, 3 restarts).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptBudget {
    pub grid: usize,
    pub nm_iters: usize,
    pub restarts: usize,
}

impl Default for OptBudget {
    fn default() -> Self {
        OptBudget { grid: 17, nm_iters: 200, restarts: 3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OptStage {
    Grid,
    Polish,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct OptTrace {
    pub alpha: f64,
    pub beta: f64,
    pub value: f64,
    pub stage: OptStage,
}

#[derive(Debug, Clone, Serialize)]
pub struct OptimizeReport {
    pub alpha: f64,
    pub beta: f64,
    pub best: NfEvaluation,
    pub trace: Vec<OptTrace>,
    /// Shape points whose quotient failed to evaluate and were skipped.
    pub skipped: usize,
}

/// Shared moment grid covering both spaces' search ranges.
fn pair_p_grid(gx: &GrandSpec, gy: &GrandSpec) -> Vec<f64> {
    let mut grid = Vec::new();
    for g in [gx, gy] {
        let (lo, hi) = g.search_range(64.0);
        grid.extend(clustered_grid(lo, hi, 28));
    }
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    grid
}

/// Quotient of a two-parameter kernel. Grand/Grand pairs go through one
/// shared moment profile per shape, which is what makes optimization
/// affordable; other pairs use the generic dispatch.
fn generalized_eval(
    x: &SpaceSpec,
    y: &SpaceSpec,
    n: u32,
    alpha: f64,
    beta: f64,
    params: &NfParams,
    tol: f64,
) -> Result<NfEvaluation> {
    let spec = KernelSpec::Generalized { n, alpha, beta };
    if let (SpaceSpec::Grand(gx), SpaceSpec::Grand(gy)) = (x, y) {
        spec.validate()?;
        let sigma = params.sigma(n)?;
        let witness = Witness::kernel(spec.clone());
        let profile = moment_profile(&witness, &pair_p_grid(gx, gy), NF_DOMAIN, tol, false)?;
        let norm_x = grand_norm_from_profile(&profile, gx)?.value;
        let norm_y = grand_norm_from_profile(&profile, gy)?.value;
        let fund_x = grand_fundamental(gx, params.k1 / sigma)?;
        let fund_y = grand_fundamental(gy, params.k2 / sigma)?;
        let value = (norm_x / fund_x) / (norm_y / fund_y);
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::NormFailure {
                space: format!("{x} / {y}"),
                reason: format!("witness quotient {value} is not a positive real"),
            });
        }
        return Ok(NfEvaluation {
            n,
            witness: spec,
            space_x: x.clone(),
            space_y: y.clone(),
            k1: params.k1,
            k2: params.k2,
            sigma,
            norm_x,
            norm_y,
            fund_x,
            fund_y,
            value,
        });
    }
    evaluate_quotient(x, y, &spec, n, params, tol)
}

/// Maximize the witness quotient over kernel shape `(alpha, beta)`:
/// a log-spaced grid, then simplex polish (reflection 1, expansion 2,
/// contraction 0.5, shrink 0.5) restarted from the top grid cells.
pub fn optimize_kernel_params(
    x: &SpaceSpec,
    y: &SpaceSpec,
    n: u32,
    params: &NfParams,
    bounds: &OptBounds,
    budget: &OptBudget,
    tol: f64,
) -> Result<OptimizeReport> {
    bounds.validate()?;
    params.validate()?;
    if budget.grid < 3 || budget.nm_iters == 0 || budget.restarts == 0 {
        return Err(Error::InvalidParameter(format!("degenerate search budget {budget:?}")));
    }
    let log_span = |(lo, hi): (f64, f64), k: usize, m: usize| -> f64 {
        (lo.ln() + (hi.ln() - lo.ln()) * k as f64 / (m - 1) as f64).exp()
    };
    let m = budget.grid;
    let mut cells: Vec<(f64, f64)> = (0..m * m)
        .map(|i| (log_span(bounds.alpha, i / m, m), log_span(bounds.beta, i % m, m)))
        .collect();
    // The triangle shape (1, 1) is the Fejer kernel up to scale; keeping it
    // in the grid makes `best >= Fejer baseline` hold by construction.
    let clamp = |(lo, hi): (f64, f64), v: f64| v.clamp(lo, hi);
    cells.push((clamp(bounds.alpha, 1.0), clamp(bounds.beta, 1.0)));
    let grid_results: Vec<(f64, f64, Option<f64>)> = cells
        .par_iter()
        .map(|&(a, b)| (a, b, generalized_eval(x, y, n, a, b, params, tol).ok().map(|e| e.value)))
        .collect();
    let mut trace = Vec::with_capacity(grid_results.len());
    let mut skipped = 0usize;
    let mut scored: Vec<(f64, f64, f64)> = Vec::new();
    for (a, b, v) in grid_results {
        match v {
            Some(v) => {
                trace.push(OptTrace { alpha: a, beta: b, value: v, stage: OptStage::Grid });
                scored.push((v, a, b));
            }
            None => skipped += 1,
        }
    }
    if scored.is_empty() {
        return Err(Error::NormFailure {
            space: format!("{x} / {y}"),
            reason: "no feasible (alpha, beta) shape points".into(),
        });
    }
    scored.sort_by(|p, q| q.0.partial_cmp(&p.0).unwrap());
    let in_bounds = |la: f64, lb: f64| {
        la >= bounds.alpha.0.ln()
            && la <= bounds.alpha.1.ln()
            && lb >= bounds.beta.0.ln()
            && lb <= bounds.beta.1.ln()
    };
    let mut best = scored[0];
    for &(_, a0, b0) in scored.iter().take(budget.restarts) {
        let mut objective = |la: f64, lb: f64| -> f64 {
            if !in_bounds(la, lb) {
                return f64::NEG_INFINITY;
            }
            match generalized_eval(x, y, n, la.exp(), lb.exp(), params, tol) {
                Ok(e) => {
                    trace.push(OptTrace {
                        alpha: la.exp(),
                        beta: lb.exp(),
                        value: e.value,
                        stage: OptStage::Polish,
                    });
                    e.value
                }
                Err(_) => {
                    skipped += 1;
                    f64::NEG_INFINITY
                }
            }
        };
        let ((la, lb), v) =
            nelder_mead_max(&mut objective, (a0.ln(), b0.ln()), 0.15, budget.nm_iters);
        if v > best.0 {
            best = (v, la.exp(), lb.exp());
        }
    }
    let best_eval = generalized_eval(x, y, n, best.1, best.2, params, tol)?;
    Ok(OptimizeReport { alpha: best.1, beta: best.2, best: best_eval, trace, skipped })
}

/// 2-D Nelder-Mead ascent; infeasible points carry value -inf.
fn nelder_mead_max<F: FnMut(f64, f64) -> f64>(
    f: &mut F,
    start: (f64, f64),
    step: f64,
    iters: usize,
) -> ((f64, f64), f64) {
    let mut simplex = [
        (start, f(start.0, start.1)),
        ((start.0 + step, start.1), f(start.0 + step, start.1)),
        ((start.0, start.1 + step), f(start.0, start.1 + step)),
    ];
    for _ in 0..iters {
        simplex.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
        let spread = simplex[0].1 - simplex[2].1;
        if spread.abs() <= 1e-10 * simplex[0].1.abs().max(1e-12) {
            break;
        }
        let (bp, _) = simplex[0];
        let (sp, _) = simplex[1];
        let (wp, wv) = simplex[2];
        let cx = 0.5 * (bp.0 + sp.0);
        let cy = 0.5 * (bp.1 + sp.1);
        let refl = (cx + (cx - wp.0), cy + (cy - wp.1));
        let rv = f(refl.0, refl.1);
        if rv > simplex[0].1 {
            let exp = (cx + 2.0 * (cx - wp.0), cy + 2.0 * (cy - wp.1));
            let ev = f(exp.0, exp.1);
            simplex[2] = if ev > rv { (exp, ev) } else { (refl, rv) };
        } else if rv > simplex[1].1 {
            simplex[2] = (refl, rv);
        } else {
            let con = (cx + 0.5 * (wp.0 - cx), cy + 0.5 * (wp.1 - cy));
            let cv = f(con.0, con.1);
            if cv > wv {
                simplex[2] = (con, cv);
            } else {
                for i in 1..3 {
                    let p = (
                        bp.0 + 0.5 * (simplex[i].0 .0 - bp.0),
                        bp.1 + 0.5 * (simplex[i].0 .1 - bp.1),
                    );
                    simplex[i] = (p, f(p.0, p.1));
                }
            }
        }
    }
    simplex.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    (simplex[0].0, simplex[0].1)
}

#[derive(Debug, Clone, Serialize)]
pub struct GPairRateReport {
    pub fit: RateFit,
    /// `1/b2 - 1/b1` from the support endpoints.
    pub predicted_e1: f64,
    /// `beta1 - beta2` as printed in the source inequality; the measured
    /// log exponent from the fit carries the opposite sign.
    pub predicted_e2: f64,
}

/// Norm-ratio rates for nested-support zeta-weight pairs, `x` the space with
/// the right-shifted support `(a1, b1)`.
pub fn g_pair_rate_check(
    x: &GrandSpec,
    y: &GrandSpec,
    n_grid: &[u32],
    tol: f64,
) -> Result<GPairRateReport> {
    x.validate()?;
    y.validate()?;
    if !(1.0 <= y.a && y.a < y.b && y.b < x.a && x.a < x.b && x.b.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= a2 < b2 < a1 < b1 < inf, got ({}, {}) and ({}, {})",
            x.a, x.b, y.a, y.b
        )));
    }
    check_n_grid(n_grid, 6)?;
    if n_grid[0] < 16 {
        return Err(Error::InvalidParameter(
            "rate fits need n >= 16 so that log log sigma exceeds 1".into(),
        ));
    }
    let ratios: Vec<f64> = n_grid
        .par_iter()
        .map(|&n| {
            let w = Witness::kernel(KernelSpec::FejerContinuous { n });
            let nx = crate::grand::grand_norm_of_witness(&w, x, NF_DOMAIN, tol)?.value;
            let ny = crate::grand::grand_norm_of_witness(&w, y, NF_DOMAIN, tol)?.value;
            Ok(nx / ny)
        })
        .collect::<Result<Vec<_>>>()?;
    let sigma: Vec<f64> = n_grid.iter().map(|&n| n as f64).collect();
    let fit = fit_rates(n_grid, &sigma, &ratios)?;
    Ok(GPairRateReport {
        fit,
        predicted_e1: 1.0 / y.b - 1.0 / x.b,
        predicted_e2: x.beta - y.beta,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Condition11Report {
    pub m: u32,
    pub v_grid: Vec<f64>,
    pub integrals: Vec<f64>,
    pub c_values: Vec<f64>,
    pub measured_c: f64,
    /// Max over the midpoint-refined grid.
    pub refined_c: f64,
    pub holds: bool,
}

/// `int_1^inf Phi(v y^{-2m}) dy` with a secant-majorant tail: convexity gives
/// `Phi(v y^{-2m}) <= (Y/y)^{2m} Phi(v Y^{-2m})` for `y >= Y`.
fn condition11_integral(phi: &OrliczPhi, m: u32, v: f64, tol: f64) -> Result<f64> {
    let e = -2.0 * m as f64;
    let mut upper = 16.0f64;
    for _ in 0..40 {
        let core =
            integrate(&|y: f64| phi.value(v * y.powf(e)), 1.0, upper, 0.1 * tol, 1e-280, 6, 20_000)?
                .value;
        let tail = phi.value(v * upper.powf(e)) * upper / (2.0 * m as f64 - 1.0);
        if tail <= 0.5 * tol * core.max(f64::MIN_POSITIVE) {
            return Ok(core + 0.5 * tail);
        }
        upper *= 2.0;
    }
    Err(Error::DivergentIntegral(format!(
        "condition-11 integral tail does not close for v = {v}, m = {m}"
    )))
}

fn geometric_midpoints(grid: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * grid.len() - 1);
    for (i, &g) in grid.iter().enumerate() {
        out.push(g);
        if i + 1 < grid.len() {
            out.push((g * grid[i + 1]).sqrt());
        }
    }
    out
}

/// Dominated-decay check for a Young function: the smallest `C` with
/// `Phi(C v) >=` the tail integral, maximized over `v`.
pub fn orlicz_condition11_check(
    phi: &OrliczPhi,
    m: u32,
    v_grid: &[f64],
    tol: f64,
) -> Result<Condition11Report> {
    phi.validate()?;
    if m == 0 {
        return Err(Error::InvalidParameter("power m must be a positive integer".into()));
    }
    if v_grid.len() < 20 {
        return Err(Error::EmptyGrid(format!(
            "condition-11 grid needs >= 20 points, got {}",
            v_grid.len()
        )));
    }
    if v_grid.windows(2).any(|w| w[1] <= w[0])
        || v_grid[0] < 1.0
        || *v_grid.last().unwrap() > 1e6
    {
        return Err(Error::OutOfRange("v grid must increase inside [1, 1e6]".into()));
    }
    let eval_c = |vs: &[f64]| -> Result<(Vec<f64>, Vec<f64>)> {
        let integrals: Vec<f64> = vs
            .par_iter()
            .map(|&v| condition11_integral(phi, m, v, tol))
            .collect::<Result<Vec<_>>>()?;
        let cs = integrals
            .iter()
            .zip(vs)
            .map(|(&i, &v)| phi.inverse(i).map(|u| u / v))
            .collect::<Result<Vec<_>>>()?;
        Ok((integrals, cs))
    };
    let (integrals, c_values) = eval_c(v_grid)?;
    let measured_c = c_values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let refined = geometric_midpoints(v_grid);
    let (_, refined_cs) = eval_c(&refined)?;
    let refined_c = refined_cs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let holds = measured_c.is_finite()
        && refined_c.is_finite()
        && (refined_c - measured_c).abs() <= 0.02 * measured_c.abs();
    Ok(Condition11Report {
        m,
        v_grid: v_grid.to_vec(),
        integrals,
        c_values,
        measured_c,
        refined_c,
        holds,
    })
}

pub fn default_v_grid() -> Vec<f64> {
    (0..24).map(|k| 10f64.powf(6.0 * k as f64 / 23.0)).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct OrliczPairReport {
    pub n_grid: Vec<u32>,
    pub quotients_amemiya: Vec<f64>,
    pub quotients_luxemburg: Vec<f64>,
    pub min_amemiya: f64,
    pub stable: bool,
    /// Range of `n ||D_n|| Phi^{-1}(1/n)` per space; bounded for regular
    /// Young functions.
    pub bracket_x: (f64, f64),
    pub bracket_y: (f64, f64),
}

/// Witness quotients for an Orlicz pair, Amemiya norms in the headline and
/// Luxemburg alongside.
pub fn orlicz_lower_bound_check(
    phi1: &OrliczPhi,
    phi2: &OrliczPhi,
    n_grid: &[u32],
    params: &NfParams,
    tol: f64,
) -> Result<OrliczPairReport> {
    params.validate()?;
    check_n_grid(n_grid, 2)?;
    let v_grid = default_v_grid();
    for (label, phi) in [("first", phi1), ("second", phi2)] {
        let report = orlicz_condition11_check(phi, 1, &v_grid, 1e-7)?;
        if !report.holds {
            return Err(Error::InvalidParameter(format!(
                "{label} Young function fails the dominated-decay condition; measured C = {}",
                report.measured_c
            )));
        }
    }
    struct Row {
        q_am: f64,
        q_lux: f64,
        bx: f64,
        by: f64,
    }
    let rows: Vec<Row> = n_grid
        .par_iter()
        .map(|&n| {
            let w = Witness::kernel(KernelSpec::FejerContinuous { n });
            let sigma = params.sigma(n)?;
            let am1 = orlicz_amemiya_norm(&w, phi1, NF_DOMAIN, tol)?;
            let am2 = orlicz_amemiya_norm(&w, phi2, NF_DOMAIN, tol)?;
            let lux1 = orlicz_luxemburg_norm(&w, phi1, NF_DOMAIN, tol)?;
            let lux2 = orlicz_luxemburg_norm(&w, phi2, NF_DOMAIN, tol)?;
            let f1 = orlicz_fundamental(phi1, params.k1 / sigma)?;
            let f2 = orlicz_fundamental(phi2, params.k2 / sigma)?;
            let inv_n1 = phi1.inverse(1.0 / n as f64)?;
            let inv_n2 = phi2.inverse(1.0 / n as f64)?;
            Ok(Row {
                q_am: (am1 / f1) / (am2 / f2),
                q_lux: (lux1 / f1) / (lux2 / f2),
                bx: n as f64 * am1 * inv_n1,
                by: n as f64 * am2 * inv_n2,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let quotients_amemiya: Vec<f64> = rows.iter().map(|r| r.q_am).collect();
    let quotients_luxemburg: Vec<f64> = rows.iter().map(|r| r.q_lux).collect();
    let min_amemiya = quotients_amemiya.iter().cloned().fold(f64::INFINITY, f64::min);
    let stable = min_amemiya > 0.0 && last_octave_spread(n_grid, &quotients_amemiya) < 0.1;
    let bracket = |get: fn(&Row) -> f64| {
        let vals = rows.iter().map(get);
        (
            vals.clone().fold(f64::INFINITY, f64::min),
            vals.fold(f64::NEG_INFINITY, f64::max),
        )
    };
    Ok(OrliczPairReport {
        n_grid: n_grid.to_vec(),
        quotients_amemiya,
        quotients_luxemburg,
        min_amemiya,
        stable,
        bracket_x: bracket(|r| r.bx),
        bracket_y: bracket(|r| r.by),
    })
}

/// Relative spread of the values over the closed last octave of the grid.
fn last_octave_spread(n_grid: &[u32], values: &[f64]) -> f64 {
    let n_max = *n_grid.last().unwrap();
    let start = n_grid.iter().position(|&n| 2 * n >= n_max).unwrap();
    let slice = &values[start..];
    let lo = slice.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = slice.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if lo <= 0.0 {
        return f64::INFINITY;
    }
    hi / lo - 1.0
}

/// The explicit two-bracket bound value at interior parameters `(r, s)`.
/// Both bracket factors blow up at their constraint boundary (`r -> q`,
/// `s -> p`), so the minimum over admissible `(r, s)` is interior whenever
/// the log weights are present.
pub fn zygmund_z(
    p: f64,
    q: f64,
    gamma: f64,
    beta: f64,
    sigma: f64,
    r: f64,
    s: f64,
) -> Result<f64> {
    if !(gamma >= 0.0 && beta >= 0.0 && gamma.is_finite() && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "log weights gamma = {gamma}, beta = {beta} must be nonnegative"
        )));
    }
    if !(sigma >= 3.0 && sigma.is_finite()) {
        return Err(Error::OutOfRange(format!("sigma = {sigma} outside [3, inf)")));
    }
    let interior =
        1.0 < s && s < p && p < q && q < r && r.is_finite();
    // The boundary values s = p (when beta = 0) and r = q (when gamma = 0)
    // are continuous limits with bracket factor 1.
    let s_boundary_ok = beta == 0.0 && s == p;
    let r_boundary_ok = gamma == 0.0 && r == q;
    let ordered = 1.0 < s && s <= p && p < q && q <= r && r.is_finite();
    if !(interior || (ordered && (s < p || s_boundary_ok) && (q < r || r_boundary_ok))) {
        return Err(Error::InvalidParameter(format!(
            "constraint 1 < s < p < q < r violated: (p, q, r, s) = ({p}, {q}, {r}, {s})"
        )));
    }
    let r_factor = if r == q { 1.0 } else { (r / (r - q)).powf(gamma / r) };
    let s_factor = if s == p { 1.0 } else { (s / (p - s)).powf(beta / s) };
    Ok(sigma.powf(1.0 / s - 1.0 / r) * r_factor * s_factor)
}

/// The closed-form near-optimal interior parameters.
pub fn zygmund_r0_s0(p: f64, q: f64, gamma: f64, beta: f64, sigma: f64) -> Result<(f64, f64)> {
    if !(1.0 < p && p < q && q.is_finite()) {
        return Err(Error::InvalidParameter(format!("need 1 < p < q, got ({p}, {q})")));
    }
    if !(sigma >= 3.0 && sigma.is_finite()) {
        return Err(Error::OutOfRange(format!("sigma = {sigma} outside [3, inf)")));
    }
    let l = sigma.ln();
    let r0 = q + gamma / (q * l);
    let s0 = p - beta / (p * l);
    if !(s0 > 1.0) {
        return Err(Error::OutOfRange(format!(
            "s0 = {s0} leaves (1, p); sigma too small for beta = {beta}"
        )));
    }
    Ok((r0, s0))
}

/// Numeric constrained minimum of the bound over `(r, s)`: a log-offset grid
/// from the constraint boundary plus coordinate golden polish.
pub fn zygmund_z_min(
    p: f64,
    q: f64,
    gamma: f64,
    beta: f64,
    sigma: f64,
) -> Result<(f64, (f64, f64))> {
    if !(1.0 < p && p < q && q.is_finite()) {
        return Err(Error::InvalidParameter(format!("need 1 < p < q, got ({p}, {q})")));
    }
    let offsets = |span: f64| -> Vec<f64> {
        (0..80).map(|k| span * 10f64.powf(-6.0 + 6.0 * k as f64 / 79.0)).collect()
    };
    let r_candidates: Vec<f64> = if gamma == 0.0 {
        vec![q]
    } else {
        offsets(3.0 * q).iter().map(|d| q + d).collect()
    };
    let s_candidates: Vec<f64> = if beta == 0.0 {
        vec![p]
    } else {
        offsets(p - 1.0).iter().map(|d| p - d).filter(|&s| s > 1.0).collect()
    };
    let mut best = (f64::INFINITY, (q, p));
    for &r in &r_candidates {
        for &s in &s_candidates {
            if let Ok(z) = zygmund_z(p, q, gamma, beta, sigma, r, s) {
                if z < best.0 {
                    best = (z, (r, s));
                }
            }
        }
    }
    if !best.0.is_finite() {
        return Err(Error::RootFailure("no admissible (r, s) found".into()));
    }
    // Coordinate polish in the log offsets.
    let (mut r, mut s) = best.1;
    for _ in 0..4 {
        if gamma > 0.0 {
            let f = |t: f64| {
                let rr = q + t.exp();
                -zygmund_z(p, q, gamma, beta, sigma, rr, s).unwrap_or(f64::INFINITY)
            };
            let t0 = (r - q).max(1e-12).ln();
            let (t, _) = crate::solve::golden_max(f, t0 - 1.5, t0 + 1.5, 1e-10);
            r = q + t.exp();
        }
        if beta > 0.0 {
            let f = |t: f64| {
                let ss = p - t.exp();
                if ss <= 1.0 {
                    return f64::NEG_INFINITY;
                }
                -zygmund_z(p, q, gamma, beta, sigma, r, ss).unwrap_or(f64::INFINITY)
            };
            let t0 = (p - s).max(1e-12).ln();
            let (t, _) = crate::solve::golden_max(f, t0 - 1.5, t0 + 1.5, 1e-10);
            if p - t.exp() > 1.0 {
                s = p - t.exp();
            }
        }
    }
    let z = zygmund_z(p, q, gamma, beta, sigma, r, s)?;
    if z < best.0 {
        best = (z, (r, s));
    }
    Ok(best)
}

#[derive(Debug, Clone, Serialize)]
pub struct ZygmundRateReport {
    pub fit: RateFit,
    /// `1/p - 1/q`.
    pub predicted_e1: f64,
    /// `gamma/q - beta/p` as printed in the source bound; measured log
    /// exponents come out at `gamma/q + beta/p`.
    pub predicted_e2: f64,
}

/// Measured growth of `||D_n||_{q,gamma} / ||D_n||_{p,-beta}` against the
/// two-exponent model.
pub fn zygmund_rate_check(
    p: f64,
    q: f64,
    gamma: f64,
    beta: f64,
    n_grid: &[u32],
    params: &NfParams,
    tol: f64,
) -> Result<ZygmundRateReport> {
    if !(1.0 < p && p < q && q.is_finite() && gamma >= 0.0 && beta >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need 1 < p < q and nonnegative log weights, got ({p}, {q}, {gamma}, {beta})"
        )));
    }
    params.validate()?;
    check_n_grid(n_grid, 6)?;
    if n_grid[0] < 16 {
        return Err(Error::InvalidParameter(
            "rate fits need n >= 16 so that log log sigma exceeds 1".into(),
        ));
    }
    let ratios: Vec<f64> = n_grid
        .par_iter()
        .map(|&n| {
            let w = Witness::kernel(KernelSpec::FejerContinuous { n });
            let hi = crate::orlicz::zygmund_norm(&w, q, gamma, NF_DOMAIN, tol)?;
            let lo = crate::orlicz::zygmund_norm(&w, p, -beta, NF_DOMAIN, tol)?;
            Ok(hi / lo)
        })
        .collect::<Result<Vec<_>>>()?;
    let sigma: Vec<f64> = n_grid.iter().map(|&n| params.sigma(n)).collect::<Result<Vec<_>>>()?;
    let fit = fit_rates(n_grid, &sigma, &ratios)?;
    Ok(ZygmundRateReport {
        fit,
        predicted_e1: 1.0 / p - 1.0 / q,
        predicted_e2: gamma / q - beta / p,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtrapolationReport {
    pub r_grid: Vec<f64>,
    pub ratios_a: Vec<f64>,
    pub max_a: f64,
    pub refined_max_a: f64,
    /// Ratios climb monotonically from the `r -> q` boundary (where the
    /// bracket blows up and the ratio collapses) to the grid argmax.
    pub decreasing_toward_q: bool,
    pub s_grid: Vec<f64>,
    pub ratios_b: Vec<f64>,
    pub max_b: f64,
    pub refined_max_b: f64,
    pub stable: bool,
}

/// Log-bracket extrapolation ratios of one witness: the overshoot of the
/// `(q, gamma)` norm against `[r/(r-q)]^{gamma/r} |g|_r` for `r > q`, and the
/// mirror-image lower family on `s in (1, q)` against the `(q, -gamma)` norm.
pub fn extrapolation_check(
    g: &KernelSpec,
    q: f64,
    gamma: f64,
    r_grid: &[f64],
    s_grid: &[f64],
    tol: f64,
) -> Result<ExtrapolationReport> {
    g.validate()?;
    if !(q > 1.0 && q.is_finite() && gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "need q > 1 and gamma >= 0, got ({q}, {gamma})"
        )));
    }
    if r_grid.is_empty() || r_grid.windows(2).any(|w| w[1] <= w[0]) || r_grid[0] <= q {
        return Err(Error::OutOfRange("r grid must increase strictly inside (q, inf)".into()));
    }
    if s_grid.is_empty()
        || s_grid.windows(2).any(|w| w[1] <= w[0])
        || s_grid[0] <= 1.0
        || *s_grid.last().unwrap() >= q
    {
        return Err(Error::OutOfRange("s grid must increase strictly inside (1, q)".into()));
    }
    let w = Witness::kernel(g.clone());
    let norm_hi = crate::orlicz::zygmund_norm(&w, q, gamma, NF_DOMAIN, tol)?;
    let norm_lo = crate::orlicz::zygmund_norm(&w, q, -gamma, NF_DOMAIN, tol)?;
    let ratio_a = |r: f64| -> Result<f64> {
        let bracket = if gamma == 0.0 { 1.0 } else { (r / (r - q)).powf(gamma / r) };
        let lr = crate::moments::lp_norm(&w, r, NF_DOMAIN, tol)?;
        Ok(norm_hi / (bracket * lr))
    };
    let ratio_b = |s: f64| -> Result<f64> {
        let bracket = if gamma == 0.0 { 1.0 } else { (s / (q - s)).powf(-gamma / s) };
        let ls = crate::moments::lp_norm(&w, s, NF_DOMAIN, tol)?;
        Ok(bracket * ls / norm_lo)
    };
    let eval_grid = |grid: &[f64], f: &dyn Fn(f64) -> Result<f64>| -> Result<Vec<f64>> {
        grid.iter().map(|&t| f(t)).collect()
    };
    let ratios_a = eval_grid(r_grid, &ratio_a)?;
    let ratios_b = eval_grid(s_grid, &ratio_b)?;
    let max_of = |v: &[f64]| v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let max_a = max_of(&ratios_a);
    let max_b = max_of(&ratios_b);
    let refined_max_a = max_of(&eval_grid(&geometric_midpoints(r_grid), &ratio_a)?);
    let refined_max_b = max_of(&eval_grid(&geometric_midpoints(s_grid), &ratio_b)?);
    let arg_max_a = ratios_a
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap();
    let decreasing_toward_q =
        ratios_a[..=arg_max_a].windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-9));
    let stable = (refined_max_a - max_a).abs() <= 0.02 * max_a.abs()
        && (refined_max_b - max_b).abs() <= 0.02 * max_b.abs();
    Ok(ExtrapolationReport {
        r_grid: r_grid.to_vec(),
        ratios_a,
        max_a,
        refined_max_a,
        decreasing_toward_q,
        s_grid: s_grid.to_vec(),
        ratios_b,
        max_b,
        refined_max_b,
        stable,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct QConditionReport {
    pub eps_grid: Vec<f64>,
    pub integrals: Vec<f64>,
    pub c_values: Vec<f64>,
    pub measured_c: f64,
    pub refined_c: f64,
    pub holds: bool,
    /// Min over the grid; its positivity certifies the always-true converse
    /// direction.
    pub converse_c: f64,
}

/// `int_0^{1/4} phi(eps G(lambda)) d lambda` through the square-root
/// substitution that clusters nodes at the blow-up end.
fn q_condition_integral(phi: &LorentzPhi, eps: f64, tol: f64) -> Result<f64> {
    let f = |u: f64| -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        let lambda = 0.25 * u * u;
        match sinc_distribution(lambda, 1e-12) {
            Ok(g) => phi.value(eps * g) * 0.5 * u,
            Err(_) => f64::NAN,
        }
    };
    let q = integrate(&f, 0.0, 1.0, tol, 1e-280, 8, 40_000).map_err(|e| {
        Error::DivergentIntegral(format!("Q-condition integral at eps = {eps}: {e}"))
    })?;
    Ok(q.value)
}

/// Membership check for the admissible-generator class: the smallest `C`
/// with `phi(C eps)` above the distribution integral, maximized over `eps`.
pub fn q_condition_check(
    phi: &LorentzPhi,
    eps_grid: &[f64],
    tol: f64,
) -> Result<QConditionReport> {
    phi.validate()?;
    if eps_grid.len() < 5 {
        return Err(Error::EmptyGrid(format!(
            "epsilon grid needs >= 5 points, got {}",
            eps_grid.len()
        )));
    }
    if eps_grid.windows(2).any(|w| w[1] <= w[0])
        || eps_grid[0] < 1e-6
        || *eps_grid.last().unwrap() > 1e2
    {
        return Err(Error::OutOfRange("epsilon grid must increase inside [1e-6, 1e2]".into()));
    }
    let eval = |es: &[f64]| -> Result<(Vec<f64>, Vec<f64>)> {
        let integrals: Vec<f64> = es
            .par_iter()
            .map(|&e| q_condition_integral(phi, e, tol))
            .collect::<Result<Vec<_>>>()?;
        let cs = integrals
            .iter()
            .zip(es)
            .map(|(&i, &e)| phi.inverse(i).map(|u| u / e))
            .collect::<Result<Vec<_>>>()?;
        Ok((integrals, cs))
    };
    let (integrals, c_values) = eval(eps_grid)?;
    let measured_c = c_values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let converse_c = c_values.iter().cloned().fold(f64::INFINITY, f64::min);
    let (_, refined_cs) = eval(&geometric_midpoints(eps_grid))?;
    let refined_c = refined_cs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let holds = measured_c.is_finite()
        && refined_c.is_finite()
        && (refined_c - measured_c).abs() <= 0.02 * measured_c.abs();
    Ok(QConditionReport {
        eps_grid: eps_grid.to_vec(),
        integrals,
        c_values,
        measured_c,
        refined_c,
        holds,
        converse_c,
    })
}

pub fn default_eps_grid() -> Vec<f64> {
    (0..20).map(|k| 10f64.powf(-6.0 + 8.0 * k as f64 / 19.0)).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct LorentzPairReport {
    pub n_grid: Vec<u32>,
    pub quotient_x: Vec<f64>,
    pub quotient_y: Vec<f64>,
    pub values: Vec<f64>,
    pub min_value: f64,
    pub positive: bool,
    pub stable: bool,
}

/// Witness quotients for a Lorentz pair whose generators both pass the
/// admissibility check.
pub fn lorentz_lower_bound_check(
    phi1: &LorentzPhi,
    phi2: &LorentzPhi,
    n_grid: &[u32],
    params: &NfParams,
    tol: f64,
) -> Result<LorentzPairReport> {
    params.validate()?;
    check_n_grid(n_grid, 2)?;
    let eps = default_eps_grid();
    for (label, phi) in [("first", phi1), ("second", phi2)] {
        if !q_condition_check(phi, &eps, 1e-6)?.holds {
            return Err(Error::InvalidParameter(format!(
                "{label} generator fails the admissibility condition"
            )));
        }
    }
    let rows: Vec<(f64, f64)> = n_grid
        .par_iter()
        .map(|&n| {
            let w = Witness::kernel(KernelSpec::FejerContinuous { n });
            let sigma = params.sigma(n)?;
            let n1 = lorentz_norm(&w, phi1, NF_DOMAIN, None, tol)?;
            let n2 = lorentz_norm(&w, phi2, NF_DOMAIN, None, tol)?;
            let q1 = n1 / lorentz_fundamental(phi1, params.k1 / sigma)?;
            let q2 = n2 / lorentz_fundamental(phi2, params.k2 / sigma)?;
            Ok((q1, q2))
        })
        .collect::<Result<Vec<_>>>()?;
    let quotient_x: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let quotient_y: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let values: Vec<f64> = rows.iter().map(|r| r.0 / r.1).collect();
    let min_value = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let positive = min_value > 0.0 && min_value.is_finite();
    let stable = positive && last_octave_spread(n_grid, &values) < 0.1;
    Ok(LorentzPairReport {
        n_grid: n_grid.to_vec(),
        quotient_x,
        quotient_y,
        values,
        min_value,
        positive,
        stable,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MixedPairReport {
    pub n_grid: Vec<u32>,
    pub values: Vec<f64>,
    pub min_value: f64,
    pub positive: bool,
    pub stable: bool,
}

/// Positivity campaign for an arbitrary space pair on the full-degree
/// witness; covers the mixed Lorentz-vs-grand variants.
pub fn mixed_pair_positivity(
    x: &SpaceSpec,
    y: &SpaceSpec,
    n_grid: &[u32],
    params: &NfParams,
    tol: f64,
) -> Result<MixedPairReport> {
    check_n_grid(n_grid, 2)?;
    let values: Vec<f64> = n_grid
        .par_iter()
        .map(|&n| {
            evaluate_quotient(x, y, &KernelSpec::FejerContinuous { n }, n, params, tol)
                .map(|e| e.value)
        })
        .collect::<Result<Vec<_>>>()?;
    let min_value = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let positive = min_value > 0.0 && min_value.is_finite();
    let stable = positive && last_octave_spread(n_grid, &values) < 0.1;
    Ok(MixedPairReport { n_grid: n_grid.to_vec(), values, min_value, positive, stable })
}

#[derive(Debug, Clone, Serialize)]
pub struct RegularReport {
    pub best_c: f64,
    /// `(min, max)` of the norm-to-fundamental ratio at the best `C`.
    pub bracket: (f64, f64),
    /// Bracket ratio `max/min`; below 20 counts as regular.
    pub ratio: f64,
    pub regular: bool,
    pub norms: Vec<f64>,
}

pub fn default_c_search(n_min: u32) -> Vec<f64> {
    let hi = 0.999 * n_min as f64;
    (0..25).map(|k| 0.05 * (hi / 0.05).powf(k as f64 / 24.0)).collect()
}

/// Does some constant `C` make `||D_n||_X` track `phi(X, C/n)` within a
/// bounded bracket across the degree grid?
pub fn regular_space_check(
    x: &SpaceSpec,
    n_grid: &[u32],
    c_search: &[f64],
    tol: f64,
) -> Result<RegularReport> {
    x.validate()?;
    check_n_grid(n_grid, 2)?;
    if c_search.is_empty() {
        return Err(Error::EmptyGrid("empty C search grid".into()));
    }
    let n_min = n_grid[0] as f64;
    let norms: Vec<f64> = n_grid
        .par_iter()
        .map(|&n| named_norm(x, &Witness::kernel(KernelSpec::FejerContinuous { n }), tol))
        .collect::<Result<Vec<_>>>()?;
    let mut best: Option<(f64, (f64, f64), f64)> = None;
    for &c in c_search {
        if !(c > 0.0 && c <= n_min) {
            continue;
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut ok = true;
        for (&n, &norm) in n_grid.iter().zip(&norms) {
            match fundamental_function(x, c / n as f64) {
                Ok(f) if f > 0.0 => {
                    let ratio = norm / f;
                    lo = lo.min(ratio);
                    hi = hi.max(ratio);
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let score = hi / lo;
        if best.map_or(true, |(_, _, s)| score < s) {
            best = Some((c, (lo, hi), score));
        }
    }
    let (best_c, bracket, ratio) = best.ok_or_else(|| {
        Error::OutOfRange(format!("no C candidate fits inside (0, {n_min}]"))
    })?;
    Ok(RegularReport { best_c, bracket, ratio, regular: ratio < 20.0, norms })
}

/// The house pair for campaigns: support `(3,5)` over `(1,2)`, unit branch
/// weights. The numerator space sits strictly to the right, the orientation
/// under which the witness table stays bounded; the reverse orientation
/// diverges along the flat-kernel edge of the shape box.
pub fn default_g_pair() -> (SpaceSpec, SpaceSpec) {
    (
        SpaceSpec::Grand(GrandSpec::zeta(3.0, 5.0, 1.0, 1.0).expect("valid default")),
        SpaceSpec::Grand(GrandSpec::zeta(1.0, 2.0, 1.0, 1.0).expect("valid default")),
    )
}
