//! Tagged space descriptions, norm dispatch, fundamental functions, and the
//! family-string grammar used by configuration files.

use crate::error::{Error, Result};
use crate::grand::{fundamental_asymptotic_g, grand_fundamental, grand_norm_of_witness, GrandSpec};
use crate::kernels::Witness;
use crate::lorentz::{lorentz_fundamental, lorentz_norm, LorentzPhi};
use crate::moments::{lp_norm, Domain};
use crate::orlicz::{orlicz_fundamental, orlicz_luxemburg_norm, zygmund_norm, OrliczPhi};
use std::fmt;

/// One rearrangement-invariant space. The Zygmund kind carries `(p, r)` and
/// resolves its Orlicz function on demand; `Orlicz` holds an explicit Young
/// function.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum SpaceSpec {
    Lp { p: f64 },
    Grand(GrandSpec),
    Orlicz(OrliczPhi),
    Zygmund { p: f64, r: f64 },
    Lorentz(LorentzPhi),
}

impl SpaceSpec {
    pub fn lp(p: f64) -> Result<Self> {
        let space = SpaceSpec::Lp { p };
        space.validate()?;
        Ok(space)
    }

    pub fn zygmund(p: f64, r: f64) -> Result<Self> {
        let space = SpaceSpec::Zygmund { p, r };
        space.validate()?;
        Ok(space)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SpaceSpec::Lp { p } => {
                if !(p.is_finite() && *p >= 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "Lp exponent {p} must be finite and >= 1"
                    )));
                }
                Ok(())
            }
            SpaceSpec::Grand(spec) => spec.validate(),
            SpaceSpec::Orlicz(phi) => phi.validate(),
            SpaceSpec::Zygmund { p, r } => OrliczPhi::zygmund(*p, *r).map(|_| ()),
            SpaceSpec::Lorentz(phi) => phi.validate(),
        }
    }

    /// Moment support `(a, b)` when the space carries one.
    pub fn support(&self) -> Option<(f64, f64)> {
        match self {
            SpaceSpec::Grand(spec) => Some((spec.a, spec.b)),
            _ => None,
        }
    }

    /// The Young function of Orlicz-type kinds.
    pub fn young_function(&self) -> Result<Option<OrliczPhi>> {
        match self {
            SpaceSpec::Orlicz(phi) => Ok(Some(phi.clone())),
            SpaceSpec::Zygmund { p, r } => Ok(Some(OrliczPhi::zygmund(*p, *r)?)),
            _ => Ok(None),
        }
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceSpec::Lp { p } => write!(f, "lp({p})"),
            SpaceSpec::Grand(spec) => match &spec.psi_mode {
                crate::grand::PsiMode::ZetaWeight => {
                    if spec.b.is_infinite() {
                        write!(f, "grand({},inf,{},{})", spec.a, spec.alpha, spec.beta)
                    } else {
                        write!(f, "grand({},{},{},{})", spec.a, spec.b, spec.alpha, spec.beta)
                    }
                }
                crate::grand::PsiMode::UserTable(t) => {
                    write!(f, "grand-table({},{};{} nodes)", spec.a, spec.b, t.len())
                }
            },
            SpaceSpec::Orlicz(OrliczPhi::Power { p }) => write!(f, "orlicz-power({p})"),
            SpaceSpec::Orlicz(OrliczPhi::Zygmund { p, r, .. }) => {
                write!(f, "orlicz-zygmund({p},{r})")
            }
            SpaceSpec::Orlicz(OrliczPhi::ExpM1) => write!(f, "orlicz-expm1"),
            SpaceSpec::Zygmund { p, r } => write!(f, "orlicz-zygmund({p},{r})"),
            SpaceSpec::Lorentz(phi) => {
                if phi.s == 0.0 {
                    write!(f, "lorentz-pow({})", phi.q)
                } else {
                    write!(f, "lorentz-powlog({},{})", phi.q, phi.s)
                }
            }
        }
    }
}

/// Norm of a witness in the given space. Grand norms use the true per-p
/// evaluator; Orlicz-type norms are Luxemburg.
pub fn space_norm(space: &SpaceSpec, witness: &Witness, domain: Domain, tol: f64) -> Result<f64> {
    match space {
        SpaceSpec::Lp { p } => lp_norm(witness, *p, domain, tol),
        SpaceSpec::Grand(spec) => grand_norm_of_witness(witness, spec, domain, tol).map(|g| g.value),
        SpaceSpec::Orlicz(phi) => orlicz_luxemburg_norm(witness, phi, domain, tol),
        SpaceSpec::Zygmund { p, r } => zygmund_norm(witness, *p, *r, domain, tol),
        SpaceSpec::Lorentz(phi) => lorentz_norm(witness, phi, domain, None, tol),
    }
}

/// `sup {norm of an indicator of measure <= delta}`, attained at measure
/// `delta` on atomless domains.
pub fn fundamental_function(space: &SpaceSpec, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::OutOfRange(format!("indicator measure {delta} outside (0, 1]")));
    }
    match space {
        SpaceSpec::Lp { p } => {
            space.validate()?;
            Ok(delta.powf(1.0 / p))
        }
        SpaceSpec::Grand(spec) => grand_fundamental(spec, delta),
        SpaceSpec::Orlicz(phi) => orlicz_fundamental(phi, delta),
        SpaceSpec::Zygmund { p, r } => orlicz_fundamental(&OrliczPhi::zygmund(*p, *r)?, delta),
        SpaceSpec::Lorentz(phi) => lorentz_fundamental(phi, delta),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum CurveMode {
    Exact,
    Asymptotic,
}

/// Fundamental function sampled on a decreasing `delta` grid.
#[derive(Debug, Clone, serde::Serialize)]
pub struct FundamentalCurve {
    pub delta_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub mode: CurveMode,
}

fn check_delta_grid(delta_grid: &[f64]) -> Result<()> {
    if delta_grid.is_empty() {
        return Err(Error::EmptyGrid("delta grid is empty".into()));
    }
    for pair in delta_grid.windows(2) {
        if !(pair[1] < pair[0]) {
            return Err(Error::InvalidParameter(format!(
                "delta grid must decrease strictly: {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    if !(delta_grid[0] <= 1.0 && *delta_grid.last().unwrap() > 0.0) {
        return Err(Error::OutOfRange("delta grid leaves (0, 1]".into()));
    }
    Ok(())
}

/// Exact fundamental curve of a space. Values must come out nonincreasing
/// along the (decreasing) grid; a violation beyond refinement jitter means a
/// broken space spec and is reported as a norm failure.
pub fn fundamental_curve(space: &SpaceSpec, delta_grid: &[f64]) -> Result<FundamentalCurve> {
    check_delta_grid(delta_grid)?;
    let values = delta_grid
        .iter()
        .map(|&d| fundamental_function(space, d))
        .collect::<Result<Vec<_>>>()?;
    for (pair_d, pair_v) in delta_grid.windows(2).zip(values.windows(2)) {
        if pair_v[1] > pair_v[0] * (1.0 + 1e-9) {
            return Err(Error::NormFailure {
                space: space.to_string(),
                reason: format!(
                    "fundamental function increased from {} at delta {} to {} at delta {}",
                    pair_v[0], pair_d[0], pair_v[1], pair_d[1]
                ),
            });
        }
    }
    Ok(FundamentalCurve { delta_grid: delta_grid.to_vec(), values, mode: CurveMode::Exact })
}

/// Asymptotic curve for the zeta-weight grand family; rate checks only.
pub fn asymptotic_curve(spec: &GrandSpec, delta_grid: &[f64]) -> Result<FundamentalCurve> {
    check_delta_grid(delta_grid)?;
    let values = delta_grid
        .iter()
        .map(|&d| fundamental_asymptotic_g(spec.a, spec.b, spec.alpha, spec.beta, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(FundamentalCurve { delta_grid: delta_grid.to_vec(), values, mode: CurveMode::Asymptotic })
}

pub const FAMILY_NAMES: [&str; 7] = [
    "lp",
    "grand",
    "orlicz-zygmund",
    "orlicz-power",
    "orlicz-expm1",
    "lorentz-pow",
    "lorentz-powlog",
];

fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.iter().enumerate() {
        let mut prev = row[0];
        row[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let cost = if ca == cb { prev } else { prev + 1 };
            prev = row[j + 1];
            row[j + 1] = cost.min(prev + 1).min(row[j] + 1);
        }
    }
    row[b.len()]
}

fn nearest_family(name: &str) -> Option<&'static str> {
    FAMILY_NAMES
        .iter()
        .map(|&known| (levenshtein(name, known), known))
        .min()
        .filter(|&(d, _)| d <= 3)
        .map(|(_, known)| known)
}

fn parse_scalar(token: &str, allow_inf: bool) -> Result<f64> {
    let t = token.trim();
    if allow_inf && (t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity")) {
        return Ok(f64::INFINITY);
    }
    t.parse::<f64>()
        .map_err(|_| Error::InvalidParameter(format!("bad numeric argument \"{t}\"")))
}

/// Parse a family string like `lp(2)`, `grand(1,2,1,1)`, `grand(2,inf,1,-1)`,
/// `orlicz-zygmund(2,1)`, `lorentz-pow(2)`, `lorentz-powlog(2,-1)`.
pub fn parse_family(text: &str) -> Result<SpaceSpec> {
    let text = text.trim();
    let (name, args): (&str, Vec<&str>) = match text.find('(') {
        Some(open) => {
            let inner = text[open..]
                .strip_prefix('(')
                .and_then(|rest| rest.strip_suffix(')'))
                .ok_or_else(|| {
                    Error::InvalidParameter(format!("unbalanced parentheses in \"{text}\""))
                })?;
            (text[..open].trim(), inner.split(',').collect())
        }
        None => (text, Vec::new()),
    };
    let expect = |n: usize| -> Result<()> {
        if args.len() != n {
            return Err(Error::InvalidParameter(format!(
                "family \"{name}\" takes {n} argument(s), got {}",
                args.len()
            )));
        }
        Ok(())
    };
    let space = match name {
        "lp" => {
            expect(1)?;
            SpaceSpec::lp(parse_scalar(args[0], false)?)?
        }
        "grand" => {
            expect(4)?;
            SpaceSpec::Grand(GrandSpec::zeta(
                parse_scalar(args[0], false)?,
                parse_scalar(args[1], true)?,
                parse_scalar(args[2], false)?,
                parse_scalar(args[3], false)?,
            )?)
        }
        "orlicz-zygmund" => {
            expect(2)?;
            SpaceSpec::zygmund(parse_scalar(args[0], false)?, parse_scalar(args[1], false)?)?
        }
        "orlicz-power" => {
            expect(1)?;
            SpaceSpec::Orlicz(OrliczPhi::power(parse_scalar(args[0], false)?)?)
        }
        "orlicz-expm1" => {
            expect(0)?;
            SpaceSpec::Orlicz(OrliczPhi::ExpM1)
        }
        "lorentz-pow" => {
            expect(1)?;
            SpaceSpec::Lorentz(LorentzPhi::pow(parse_scalar(args[0], false)?)?)
        }
        "lorentz-powlog" => {
            expect(2)?;
            SpaceSpec::Lorentz(LorentzPhi::pow_log(
                parse_scalar(args[0], false)?,
                parse_scalar(args[1], false)?,
            )?)
        }
        other => {
            let mut message = format!("unknown space family \"{other}\"");
            if let Some(suggest) = nearest_family(other) {
                message.push_str(&format!("; did you mean \"{suggest}\"?"));
            }
            return Err(Error::InvalidParameter(message));
        }
    };
    Ok(space)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::KernelSpec;

    fn fejer(n: u32) -> Witness {
        Witness::kernel(KernelSpec::FejerContinuous { n })
    }

    #[test]
    fn family_strings_round_trip() {
        for text in [
            "lp(2)",
            "grand(1,2,1,1)",
            "grand(2,inf,1,-1)",
            "orlicz-zygmund(2,1)",
            "orlicz-power(3)",
            "orlicz-expm1",
            "lorentz-pow(2)",
            "lorentz-powlog(2,-0.25)",
        ] {
            let space = parse_family(text).unwrap();
            assert_eq!(space.to_string(), text, "display of {space:?}");
            assert_eq!(parse_family(&space.to_string()).unwrap(), space);
        }
    }

    #[test]
    fn parse_rejects_with_diagnostics() {
        let err = parse_family("lorenz-pow(2)").unwrap_err().to_string();
        assert!(err.contains("lorentz-pow"), "suggestion missing: {err}");
        assert!(parse_family("lp(2").is_err());
        assert!(parse_family("lp(2,3)").is_err());
        assert!(parse_family("grand(1,two,1,1)").is_err());
        assert!(parse_family("lp(0.5)").is_err());
        // b = inf only makes sense for grand.
        assert!(parse_family("lp(inf)").is_err());
    }

    #[test]
    fn dispatch_matches_direct_evaluators() {
        let w = fejer(10);
        let tol = 1e-9;
        let lp = lp_norm(&w, 2.0, Domain::RealLine, tol).unwrap();
        let via = space_norm(&SpaceSpec::lp(2.0).unwrap(), &w, Domain::RealLine, tol).unwrap();
        assert_eq!(via, lp);

        let z0 = space_norm(&SpaceSpec::zygmund(2.0, 0.0).unwrap(), &w, Domain::RealLine, tol)
            .unwrap();
        assert_eq!(z0, lp);

        let g = GrandSpec::zeta(1.0, 2.0, 1.0, 1.0).unwrap();
        let direct = grand_norm_of_witness(&w, &g, Domain::RealLine, tol).unwrap().value;
        let via = space_norm(&SpaceSpec::Grand(g), &w, Domain::RealLine, tol).unwrap();
        assert_eq!(via, direct);

        let l1 = lp_norm(&w, 1.0, Domain::RealLine, 1e-10).unwrap();
        let lam = space_norm(
            &SpaceSpec::Lorentz(LorentzPhi::pow(1.0).unwrap()),
            &w,
            Domain::RealLine,
            1e-7,
        )
        .unwrap();
        assert!((lam / l1 - 1.0).abs() < 1e-4, "Lorentz(id) {lam} vs L1 {l1}");
    }

    #[test]
    fn fundamental_examples() {
        let lp2 = SpaceSpec::lp(2.0).unwrap();
        assert!((fundamental_function(&lp2, 0.04).unwrap() - 0.2).abs() < 1e-12);
        let orlicz2 = SpaceSpec::Orlicz(OrliczPhi::power(2.0).unwrap());
        assert!((fundamental_function(&orlicz2, 0.04).unwrap() - 0.2).abs() < 1e-12);
        let phi = LorentzPhi::pow_log(2.0, 0.25).unwrap();
        let lor = SpaceSpec::Lorentz(phi.clone());
        assert_eq!(fundamental_function(&lor, 1e-3).unwrap(), phi.value(1e-3));
        assert!(fundamental_function(&lp2, 0.0).is_err());
        assert!(fundamental_function(&lp2, 1.5).is_err());
    }

    #[test]
    fn indicator_norm_reproduces_fundamental_function() {
        let spaces = [
            SpaceSpec::lp(2.5).unwrap(),
            SpaceSpec::Grand(GrandSpec::zeta(1.0, 2.0, 1.0, 1.0).unwrap()),
            SpaceSpec::Orlicz(OrliczPhi::ExpM1),
            SpaceSpec::zygmund(2.0, 1.0).unwrap(),
            SpaceSpec::Lorentz(LorentzPhi::pow_log(2.0, -0.25).unwrap()),
        ];
        for space in &spaces {
            for &delta in &[1e-1, 1e-3, 1e-6] {
                let ind = Witness::Indicator { measure: delta, height: 1.0 };
                let norm = space_norm(space, &ind, Domain::RealLine, 1e-9).unwrap();
                let fun = fundamental_function(space, delta).unwrap();
                assert!(
                    (norm / fun - 1.0).abs() < 1e-6,
                    "{space}: indicator norm {norm} vs fundamental {fun} at {delta}"
                );
            }
        }
    }

    #[test]
    fn pointwise_domination_orders_norms() {
        // S(nx)^2 <= (1/4) S(nx), so every r.i. norm must agree.
        let small = Witness::kernel(KernelSpec::Power { n: 10, m: 2 });
        let big = Witness::scaled(0.25, KernelSpec::FejerContinuous { n: 10 });
        let spaces = [
            SpaceSpec::lp(2.0).unwrap(),
            SpaceSpec::Grand(GrandSpec::zeta(1.0, 2.0, 1.0, 1.0).unwrap()),
            SpaceSpec::Orlicz(OrliczPhi::ExpM1),
            SpaceSpec::zygmund(2.0, 1.0).unwrap(),
            SpaceSpec::Lorentz(LorentzPhi::pow(2.0).unwrap()),
        ];
        for space in &spaces {
            let lo = space_norm(space, &small, Domain::RealLine, 1e-7).unwrap();
            let hi = space_norm(space, &big, Domain::RealLine, 1e-7).unwrap();
            assert!(lo <= hi * (1.0 + 1e-6), "{space}: {lo} > {hi}");
        }
    }

    #[test]
    fn fundamental_curve_monotone_and_validated() {
        let space = SpaceSpec::Grand(GrandSpec::zeta(1.0, 2.0, 1.0, 1.0).unwrap());
        let grid: Vec<f64> = (0..12).map(|k| 10f64.powf(-(k as f64) / 2.0)).collect();
        let curve = fundamental_curve(&space, &grid).unwrap();
        assert_eq!(curve.mode, CurveMode::Exact);
        assert!(curve.values.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9)));
        assert!(fundamental_curve(&space, &[0.5, 0.5]).is_err());
        assert!(fundamental_curve(&space, &[]).is_err());

        let g = GrandSpec::zeta(1.0, 2.0, 1.0, 1.0).unwrap();
        let asym_grid: Vec<f64> = (3..9).map(|k| 10f64.powi(-k)).collect();
        let asym = asymptotic_curve(&g, &asym_grid).unwrap();
        assert_eq!(asym.mode, CurveMode::Asymptotic);
        assert!(asym.values.iter().all(|v| v.is_finite() && *v > 0.0));
    }
}
