//! Fejer-type witness kernels.
//!
//! All witnesses here are band-limited: the continuous families have Fourier
//! transform supported in `[-n, n]`, the discrete family is a trigonometric
//! polynomial of degree `n - 1`. `class_degree` reports the band edge used by
//! the two-space functional to normalise fundamental-function arguments.

use crate::error::{Error, Result};
use crate::oscillatory::sinc;
use crate::quad::integrate;

/// Squared half-angle sinc profile `sin^2(y/2) / y^2`, the shape shared by the
/// continuous Fejer family: the kernel of degree `n` is this profile at `n x`.
pub fn sinc_sq_profile(y: f64) -> f64 {
    let s = sinc(0.5 * y);
    0.25 * s * s
}

/// Continuous Fejer kernel `sin^2(nx/2) / (n^2 x^2)`, peak `1/4` at `x = 0`.
pub fn eval_fejer_continuous(n: u32, x: f64) -> f64 {
    sinc_sq_profile(n as f64 * x)
}

/// Discrete (periodic) Fejer kernel `sin^2(nx/2) / (n^2 sin^2(x/2))`,
/// peak `1` at `x = 0`. Evaluated through the sinc quotient, which removes
/// the 0/0 at multiples of `2 pi`.
pub fn eval_fejer_discrete(n: u32, x: f64) -> f64 {
    let nf = n as f64;
    let num = sinc(0.5 * nf * x);
    let den = sinc(0.5 * x);
    let q = num / den;
    q * q
}

/// Pointwise power `[D_n(x)]^m` of the continuous kernel.
pub fn eval_power(n: u32, m: u32, x: f64) -> f64 {
    eval_fejer_continuous(n, x).powi(m as i32)
}

/// Envelope `min(1/4, 1/(n^2 x^2))` dominating the continuous kernel.
pub fn envelope_bound(n: u32, x: f64) -> f64 {
    let nx = n as f64 * x;
    if nx == 0.0 {
        0.25
    } else {
        (0.25f64).min(1.0 / (nx * nx))
    }
}

/// Generalized kernel `2 int_0^n cos(tx) (1 - (t/n)^alpha)^beta dt`.
///
/// Quadrature panels are split at the zeros of `cos(tx)` so each piece is at
/// most half an oscillation; the weight's endpoint behaviour at `t = n`
/// (singular derivative for `beta < 1`) is left to adaptive refinement.
pub fn eval_generalized(n: u32, alpha: f64, beta: f64, x: f64, tol: f64) -> Result<f64> {
    validate_generalized(alpha, beta)?;
    let nf = n as f64;
    let w = |t: f64| {
        let base = 1.0 - (t / nf).powf(alpha);
        if base <= 0.0 {
            0.0
        } else {
            base.powf(beta)
        }
    };
    let ax = x.abs();
    if ax == 0.0 {
        return Ok(2.0 * integrate(&|t| w(t), 0.0, nf, tol, 0.0, 4, 4000)?.value);
    }
    let f = |t: f64| (t * ax).cos() * w(t);
    let half_period = std::f64::consts::PI / ax;
    let segments = (nf / half_period).ceil() as usize;
    if segments > 20_000 {
        return Err(Error::QuadratureFailure {
            context: format!("generalized kernel at x = {x:e}: {segments} oscillation segments"),
            estimate: f64::INFINITY,
            tolerance: tol,
        });
    }
    // Segment ends at the zeros (j + 1/2) pi / x of the cosine factor.
    let mut total = 0.0;
    let mut prev = 0.0;
    let mut j = 0usize;
    while prev < nf {
        let z = (j as f64 + 0.5) * half_period;
        let end = z.min(nf);
        if end > prev {
            total += integrate(&f, prev, end, 1e-12, tol / (segments as f64 + 1.0), 1, 600)?.value;
        }
        prev = end;
        j += 1;
    }
    Ok(2.0 * total)
}

fn validate_generalized(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite() && beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "generalized kernel needs alpha, beta > 0, got ({alpha}, {beta})"
        )));
    }
    Ok(())
}

/// A witness kernel family member.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum KernelSpec {
    /// `sin^2(nx/2) / (n^2 x^2)` on the real line.
    FejerContinuous { n: u32 },
    /// `sin^2(nx/2) / (n^2 sin^2(x/2))` on the circle.
    FejerDiscrete { n: u32 },
    /// `2 int_0^n cos(tx) (1-(t/n)^alpha)^beta dt` on the real line.
    Generalized { n: u32, alpha: f64, beta: f64 },
    /// Pointwise power `[D_n]^m` of the continuous kernel.
    Power { n: u32, m: u32 },
}

impl KernelSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::FejerContinuous { n } | KernelSpec::FejerDiscrete { n } => {
                if n == 0 {
                    return Err(Error::InvalidParameter("kernel degree n must be >= 1".into()));
                }
            }
            KernelSpec::Generalized { n, alpha, beta } => {
                if n == 0 {
                    return Err(Error::InvalidParameter("kernel degree n must be >= 1".into()));
                }
                validate_generalized(alpha, beta)?;
            }
            KernelSpec::Power { n, m } => {
                if n == 0 || m == 0 {
                    return Err(Error::InvalidParameter(
                        "power kernel needs n >= 1 and m >= 1".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Band edge of the witness: `[D_n]^m` has transform supported in
    /// `[-mn, mn]`, the others in `[-n, n]`.
    pub fn class_degree(&self) -> u32 {
        match *self {
            KernelSpec::FejerContinuous { n }
            | KernelSpec::FejerDiscrete { n }
            | KernelSpec::Generalized { n, .. } => n,
            KernelSpec::Power { n, m } => n * m,
        }
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self, KernelSpec::FejerDiscrete { .. })
    }
}

/// A function fed to the norm machinery: a scaled combination of kernels, or
/// an abstract indicator known only through its level and support measure.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum Witness {
    /// `sum_i c_i K_i(x)`; a single kernel is a one-term sum.
    Sum(Vec<(f64, KernelSpec)>),
    /// `height * 1_A` with `measure(A) = measure`; the set itself is
    /// irrelevant for rearrangement-invariant norms.
    Indicator { measure: f64, height: f64 },
}

impl Witness {
    pub fn kernel(spec: KernelSpec) -> Self {
        Witness::Sum(vec![(1.0, spec)])
    }

    pub fn scaled(c: f64, spec: KernelSpec) -> Self {
        Witness::Sum(vec![(c, spec)])
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Witness::Sum(terms) => {
                if terms.is_empty() {
                    return Err(Error::InvalidParameter("empty witness sum".into()));
                }
                for (c, k) in terms {
                    if !c.is_finite() {
                        return Err(Error::InvalidParameter("non-finite witness coefficient".into()));
                    }
                    k.validate()?;
                }
                Ok(())
            }
            Witness::Indicator { measure, height } => {
                if !(*measure > 0.0 && measure.is_finite() && height.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "indicator needs finite measure > 0, got measure {measure}, height {height}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Largest band edge among the components.
    pub fn class_degree(&self) -> Result<u32> {
        match self {
            Witness::Sum(terms) => Ok(terms.iter().map(|(_, k)| k.class_degree()).max().unwrap_or(0)),
            Witness::Indicator { .. } => Err(Error::Unsupported(
                "indicator witnesses are not band-limited".into(),
            )),
        }
    }
}
