//! Grand Lebesgue spaces: `||f||_{G(psi)} = sup_{p in (a,b)} |f|_p / psi(p)`.
//!
//! The built-in weight family uses `psi = 1/zeta` with `zeta` glued from two
//! power branches, `(p-a)^alpha` left of the crossover `h` and `(b-p)^beta`
//! (or `p^beta` with `beta < 0` when `b` is infinite) right of it. The
//! crossover is the root equating the branches, so `zeta` is continuous.

use crate::error::{Error, Result};
use crate::kernels::Witness;
use crate::moments::{lp_norm, Domain, MomentProfile};
use crate::solve::{bisect, golden_max};

/// How the weight `psi` is defined.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum PsiMode {
    /// `psi = 1/zeta` with the two-branch power weight.
    ZetaWeight,
    /// Tabulated `(p_i, psi_i)` nodes, log-linearly interpolated; the norm is
    /// restricted to the table hull.
    UserTable(Vec<(f64, f64)>),
}

/// Parameters of a `G(a,b; alpha,beta)` space.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GrandSpec {
    pub a: f64,
    /// Right support endpoint; `f64::INFINITY` for the unbounded family.
    pub b: f64,
    pub alpha: f64,
    pub beta: f64,
    pub psi_mode: PsiMode,
}

impl GrandSpec {
    pub fn zeta(a: f64, b: f64, alpha: f64, beta: f64) -> Result<Self> {
        let spec = GrandSpec { a, b, alpha, beta, psi_mode: PsiMode::ZetaWeight };
        spec.validate()?;
        Ok(spec)
    }

    pub fn user_table(a: f64, b: f64, table: Vec<(f64, f64)>) -> Result<Self> {
        let spec = GrandSpec { a, b, alpha: 0.0, beta: 0.0, psi_mode: PsiMode::UserTable(table) };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a >= 1.0 && self.a.is_finite() && self.b > self.a) {
            return Err(Error::InvalidParameter(format!(
                "grand support needs 1 <= a < b, got ({}, {})",
                self.a, self.b
            )));
        }
        if self.b.is_finite() {
            if self.alpha < 0.0 || self.beta < 0.0 {
                return Err(Error::InvalidParameter(
                    "finite-support zeta weight needs alpha, beta >= 0".into(),
                ));
            }
        } else if !(self.alpha >= 0.0 && self.beta < 0.0) {
            return Err(Error::InvalidParameter(
                "infinite-support zeta weight needs alpha >= 0 and beta < 0".into(),
            ));
        }
        if let PsiMode::UserTable(table) = &self.psi_mode {
            if table.len() < 2 {
                return Err(Error::EmptyGrid("psi table needs at least 2 nodes".into()));
            }
            for pair in table.windows(2) {
                if !(pair[1].0 > pair[0].0) {
                    return Err(Error::InvalidParameter("psi table nodes must increase".into()));
                }
            }
            for &(p, v) in table {
                if !(p > self.a && p < self.b) {
                    return Err(Error::OutOfRange(format!(
                        "psi table node p = {p} outside ({}, {})",
                        self.a, self.b
                    )));
                }
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::InvalidParameter(format!("psi value {v} must be positive")));
                }
            }
        }
        Ok(())
    }

    /// The root `h` of `(h-a)^alpha = (b-h)^beta`, or `(h-a)^alpha = h^beta`
    /// when `b` is infinite. With a flat weight (`alpha = beta = 0`) every
    /// point solves the equation; the midpoint is returned by convention.
    pub fn crossover_point(&self) -> Result<f64> {
        let (a, b) = (self.a, self.b);
        if self.alpha == 0.0 && self.beta == 0.0 {
            return Ok(if b.is_finite() { 0.5 * (a + b) } else { a + 1.0 });
        }
        if b.is_finite() {
            // alpha ln(h-a) - beta ln(b-h) rises from -inf to +inf.
            let s = |h: f64| self.alpha * (h - a).ln() - self.beta * (b - h).ln();
            let eps = 1e-14 * (b - a);
            let (lo, hi) = (a + eps, b - eps);
            if s(lo) > 0.0 || s(hi) < 0.0 {
                return Err(Error::RootFailure(format!(
                    "zeta crossover not bracketed on ({a}, {b}) with alpha {}, beta {}",
                    self.alpha, self.beta
                )));
            }
            bisect(s, lo, hi, 1e-14)
        } else {
            // alpha ln(h-a) - beta ln h with beta < 0: strictly increasing.
            let s = |h: f64| self.alpha * (h - a).ln() - self.beta * h.ln();
            let lo = a + 1e-13 * a.max(1.0);
            let mut hi = a + 1.0;
            let mut grow = 0;
            while s(hi) < 0.0 {
                hi = a + 2.0 * (hi - a);
                grow += 1;
                if grow > 200 {
                    return Err(Error::RootFailure("zeta crossover ran away".into()));
                }
            }
            if s(lo) > 0.0 {
                // alpha = 0 makes the left branch flat at 1; the equation
                // h^beta = 1 has no root above a >= 1 unless h = 1.
                return Err(Error::RootFailure(
                    "zeta crossover below the support for these parameters".into(),
                ));
            }
            bisect(s, lo, hi, 1e-14)
        }
    }

    /// Two-branch weight `zeta(p)`; positive inside `(a, b)`.
    pub fn zeta_weight(&self, p: f64) -> Result<f64> {
        if !(p > self.a && p < self.b) {
            return Err(Error::OutOfRange(format!(
                "p = {p} outside the grand support ({}, {})",
                self.a, self.b
            )));
        }
        if self.alpha == 0.0 && self.beta == 0.0 {
            return Ok(1.0);
        }
        let h = self.crossover_point()?;
        Ok(if p < h {
            (p - self.a).powf(self.alpha)
        } else if self.b.is_finite() {
            (self.b - p).powf(self.beta)
        } else {
            p.powf(self.beta)
        })
    }

    /// `1/psi(p)`: the factor multiplying `|f|_p` inside the sup.
    pub fn ratio_weight(&self, p: f64) -> Result<f64> {
        match &self.psi_mode {
            PsiMode::ZetaWeight => self.zeta_weight(p),
            PsiMode::UserTable(table) => {
                let lo = table[0].0;
                let hi = table[table.len() - 1].0;
                if !(p >= lo && p <= hi) {
                    return Err(Error::OutOfRange(format!(
                        "p = {p} outside the psi table hull [{lo}, {hi}]"
                    )));
                }
                let idx = table.partition_point(|&(q, _)| q < p).min(table.len() - 1).max(1);
                let (p0, v0) = table[idx - 1];
                let (p1, v1) = table[idx];
                let t = (p - p0) / (p1 - p0);
                let psi = (v0.ln() * (1.0 - t) + v1.ln() * t).exp();
                Ok(1.0 / psi)
            }
        }
    }

    /// Interval of `p` actually searched by sup computations: the open
    /// support for the zeta mode, the table hull otherwise. The cap bounds
    /// infinite supports.
    pub(crate) fn search_range(&self, cap: f64) -> (f64, f64) {
        match &self.psi_mode {
            PsiMode::ZetaWeight => (self.a, if self.b.is_finite() { self.b } else { cap }),
            PsiMode::UserTable(table) => (table[0].0, table[table.len() - 1].0),
        }
    }
}

/// Cosine-clustered interior grid on `(lo, hi)`: dense near both endpoints,
/// where the branch weights vanish fastest.
pub(crate) fn clustered_grid(lo: f64, hi: f64, m: usize) -> Vec<f64> {
    (1..m)
        .map(|j| {
            let u = 0.5 * (1.0 - (std::f64::consts::PI * j as f64 / m as f64).cos());
            lo + (hi - lo) * u
        })
        .collect()
}

/// A computed grand norm together with where the sup was attained.
#[derive(Debug, Clone, serde::Serialize)]
pub struct GrandNorm {
    pub value: f64,
    pub argmax_p: f64,
    /// Bracket inside which the golden-section refinement ran.
    pub refine_interval: (f64, f64),
}

/// Sup over a precomputed moment profile, refined on a local log-quadratic
/// interpolant around the grid argmax.
///
/// Needs at least 8 profile points inside the support.
pub fn grand_norm_from_profile(profile: &MomentProfile, spec: &GrandSpec) -> Result<GrandNorm> {
    spec.validate()?;
    let (lo, hi) = spec.search_range(f64::INFINITY);
    let pts: Vec<(f64, f64)> = profile
        .p_grid
        .iter()
        .zip(&profile.values)
        .filter(|&(&p, _)| p > lo && p < hi)
        .map(|(&p, &v)| (p, v))
        .collect();
    if pts.len() < 8 {
        return Err(Error::EmptyGrid(format!(
            "only {} profile points inside ({lo}, {hi}); need 8",
            pts.len()
        )));
    }
    let mut best = 0usize;
    let mut best_val = f64::NEG_INFINITY;
    for (i, &(p, v)) in pts.iter().enumerate() {
        let r = v * spec.ratio_weight(p)?;
        if r > best_val {
            best_val = r;
            best = i;
        }
    }
    // Interpolate ln |f|_p through the argmax and its neighbours, then chase
    // the weighted sup inside the bracketing cells.
    let (il, ir) = (best.saturating_sub(1), (best + 1).min(pts.len() - 1));
    let bracket = (pts[il].0, pts[ir].0);
    let interp: Box<dyn Fn(f64) -> f64> = if il == ir {
        let v = pts[best].1.ln();
        Box::new(move |_| v)
    } else if ir - il == 1 {
        let (p0, v0) = (pts[il].0, pts[il].1.ln());
        let (p1, v1) = (pts[ir].0, pts[ir].1.ln());
        Box::new(move |p| v0 + (v1 - v0) * (p - p0) / (p1 - p0))
    } else {
        let (p0, v0) = (pts[il].0, pts[il].1.ln());
        let (p1, v1) = (pts[best].0, pts[best].1.ln());
        let (p2, v2) = (pts[ir].0, pts[ir].1.ln());
        Box::new(move |p| {
            v0 * (p - p1) * (p - p2) / ((p0 - p1) * (p0 - p2))
                + v1 * (p - p0) * (p - p2) / ((p1 - p0) * (p1 - p2))
                + v2 * (p - p0) * (p - p1) / ((p2 - p0) * (p2 - p1))
        })
    };
    let f = |p: f64| match spec.ratio_weight(p) {
        Ok(w) => interp(p).exp() * w,
        Err(_) => f64::NEG_INFINITY,
    };
    let (xr, fr) = golden_max(f, bracket.0, bracket.1, 1e-10);
    let (argmax_p, value) =
        if fr > best_val { (xr, fr) } else { (pts[best].0, best_val) };
    Ok(GrandNorm { value, argmax_p, refine_interval: bracket })
}

/// Sup with the true `|f|_p` evaluator inside the golden refinement; the
/// accurate route when the witness itself is available.
///
/// Single generalized-kernel witnesses take a batched detour: one shared
/// panel sweep prices the whole p-grid, and the sup is refined on the
/// interpolated profile instead of fresh norm evaluations. Per-point norms
/// for those witnesses cost as much as the entire grid does here.
pub fn grand_norm_of_witness(
    witness: &Witness,
    spec: &GrandSpec,
    domain: Domain,
    tol: f64,
) -> Result<GrandNorm> {
    spec.validate()?;
    let (lo, hi) = spec.search_range(64.0);
    let grid = clustered_grid(lo, hi, 48);
    if let Witness::Sum(terms) = witness {
        if terms.len() == 1 && matches!(terms[0].1, crate::kernels::KernelSpec::Generalized { .. })
        {
            let profile = crate::moments::moment_profile(witness, &grid, domain, tol, false)?;
            return grand_norm_from_profile(&profile, spec);
        }
    }
    let mut first_err: Option<Error> = None;
    let mut ratios = Vec::with_capacity(grid.len());
    for &p in &grid {
        match lp_norm(witness, p, domain, tol) {
            Ok(v) => ratios.push(v * spec.ratio_weight(p)?),
            Err(e) => {
                first_err.get_or_insert(e);
                ratios.push(f64::NEG_INFINITY);
            }
        }
    }
    let best = ratios
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap();
    if ratios[best] == f64::NEG_INFINITY {
        return Err(Error::NormFailure {
            space: "grand".into(),
            reason: first_err.map(|e| e.to_string()).unwrap_or_else(|| "all grid points failed".into()),
        });
    }
    let bl = if best == 0 { lo + 1e-12 * (hi - lo) } else { grid[best - 1] };
    let br = if best + 1 == grid.len() { hi - 1e-12 * (hi - lo) } else { grid[best + 1] };
    let f = |p: f64| match (lp_norm(witness, p, domain, tol), spec.ratio_weight(p)) {
        (Ok(v), Ok(w)) => v * w,
        _ => f64::NEG_INFINITY,
    };
    let (xr, fr) = golden_max(f, bl, br, 1e-9);
    let (argmax_p, value) =
        if fr > ratios[best] { (xr, fr) } else { (grid[best], ratios[best]) };
    Ok(GrandNorm { value, argmax_p, refine_interval: (bl, br) })
}

/// Fundamental function `phi(G, delta) = sup_p delta^{1/p} / psi(p)`.
pub fn grand_fundamental(spec: &GrandSpec, delta: f64) -> Result<f64> {
    spec.validate()?;
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::OutOfRange(format!("indicator measure {delta} outside (0, 1]")));
    }
    // Unbounded supports: the maximiser sits near p = log(1/delta), so the
    // cap only needs to dominate that scale.
    let cap = 64f64.max(4.0 * (1.0 / delta).ln());
    let (lo, hi) = spec.search_range(cap);
    let grid = clustered_grid(lo, hi, 96);
    let f = |p: f64| match spec.ratio_weight(p) {
        Ok(w) => delta.powf(1.0 / p) * w,
        Err(_) => f64::NEG_INFINITY,
    };
    let (_, value, _) = crate::solve::grid_then_golden(&f, &grid, 1e-11)?;
    if !(value > 0.0) {
        return Err(Error::NormFailure {
            space: "grand".into(),
            reason: format!("fundamental sup vanished at delta = {delta}"),
        });
    }
    Ok(value)
}

/// Small-`delta` asymptote of the grand fundamental function for the zeta
/// family: `(beta b^2/e)^beta delta^{1/b} |log delta|^{-beta}` for finite
/// `b`, and `|b2|^{|b2|} |log delta|^{-|b2|}` with `b2` the stored negative
/// exponent otherwise. Only the rate is meaningful; prefactors are retained
/// so ratio plots are dimensionless.
pub fn fundamental_asymptotic_g(a: f64, b: f64, alpha: f64, beta: f64, delta: f64) -> Result<f64> {
    GrandSpec::zeta(a, b, alpha, beta)?;
    if !(delta > 0.0 && delta < 0.1) {
        return Err(Error::OutOfRange(format!(
            "asymptotic regime needs delta in (0, 0.1), got {delta}"
        )));
    }
    let logd = (1.0 / delta).ln();
    if b.is_finite() {
        let pre = if beta == 0.0 {
            1.0
        } else {
            (beta * b * b / std::f64::consts::E).powf(beta)
        };
        Ok(pre * delta.powf(1.0 / b) * logd.powf(-beta))
    } else {
        let b2 = -beta;
        Ok(b2.powf(b2) * logd.powf(-b2))
    }
}
