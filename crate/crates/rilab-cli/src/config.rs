//! Experiment configuration: a single JSON document shared by every command.
//!
//! Spaces are named in the family-string grammar (`lp(2)`, `grand(3,5,1,1)`,
//! `orlicz-expm1`, `lorentz-powlog(2,0.25)`), kernels in their serialized
//! spec form. Fields a command does not use are simply ignored by it, but
//! still validated structurally.

use rilab_core::kernels::KernelSpec;
use rilab_core::nikolskii::{OptBounds, OptBudget, SigmaRule};
use rilab_core::spaces::{parse_family, SpaceSpec};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZygmundParams {
    pub p: f64,
    pub q: f64,
    pub gamma: f64,
    pub beta: f64,
    /// Normalization argument for the closed-form bracket; defaults to the
    /// sigma of the largest grid degree.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtrapolationParams {
    pub q: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    /// Optional echo of the command; rejected when it contradicts the CLI.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space_x: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space_y: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<KernelSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub n_grid: Vec<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub p_grid: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub delta_grid: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub eps_grid: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub v_grid: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub r_grid: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub s_grid: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub c_grid: Vec<f64>,
    /// Quadrature and solver tolerance, required inside (0, 1e-2].
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_k")]
    pub k1: f64,
    #[serde(default = "default_k")]
    pub k2: f64,
    #[serde(default)]
    pub sigma_rule: SigmaRule,
    /// Degree for single-degree commands (optimize).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    /// Kernel power for the decay-condition command.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zygmund: Option<ZygmundParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extrapolation: Option<ExtrapolationParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<OptBounds>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<OptBudget>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_json: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn default_tol() -> f64 {
    1e-8
}

fn default_k() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Error,
    Warning,
}

#[derive(Debug, Clone, Serialize)]
pub struct Diagnostic {
    pub level: Level,
    pub field: String,
    pub message: String,
}

impl Diagnostic {
    fn error(field: &str, message: String) -> Self {
        Diagnostic { level: Level::Error, field: field.into(), message }
    }

    fn warning(field: &str, message: String) -> Self {
        Diagnostic { level: Level::Warning, field: field.into(), message }
    }
}

/// Which inputs a command consumes; drives requiredness checks.
#[derive(Debug, Clone, Copy)]
pub struct Needs {
    pub space_x: bool,
    pub space_y: bool,
    pub kernel: bool,
    pub n_grid: bool,
    pub p_grid: bool,
    pub delta_grid: bool,
    pub r_s_grids: bool,
    pub single_n: bool,
    pub power_m: bool,
    pub zygmund: bool,
    pub extrapolation: bool,
}

impl Needs {
    pub fn none() -> Self {
        Needs {
            space_x: false,
            space_y: false,
            kernel: false,
            n_grid: false,
            p_grid: false,
            delta_grid: false,
            r_s_grids: false,
            single_n: false,
            power_m: false,
            zygmund: false,
            extrapolation: false,
        }
    }
}

pub fn needs_for(command: &str) -> Needs {
    let mut n = Needs::none();
    match command {
        "moments" => {
            n.kernel = true;
            n.p_grid = true;
        }
        "norms" => {
            n.space_x = true;
            n.kernel = true;
        }
        "fundamental" => {
            n.space_x = true;
            n.delta_grid = true;
        }
        "nf" | "lorentz-nf" | "g-rates" => {
            n.space_x = true;
            n.space_y = true;
            n.n_grid = true;
        }
        "optimize" => {
            n.space_x = true;
            n.space_y = true;
            n.single_n = true;
        }
        "zygmund" => {
            n.zygmund = true;
            n.n_grid = true;
        }
        "extrapolation" => {
            n.kernel = true;
            n.extrapolation = true;
            n.r_s_grids = true;
        }
        "lorentz-q" => {
            n.space_x = true;
        }
        "orlicz-cond11" => {
            n.space_x = true;
            n.power_m = true;
        }
        "regular" => {
            n.space_x = true;
            n.n_grid = true;
        }
        _ => {}
    }
    n
}

/// Dry-run resolution of every field the command consumes. Grids and family
/// strings are parsed for real; nothing is priced.
pub fn validate(config: &ExperimentConfig, command: &str) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if config.schema_version != SCHEMA_VERSION {
        out.push(Diagnostic::error(
            "schema_version",
            format!("expected {SCHEMA_VERSION}, got {}", config.schema_version),
        ));
    }
    if let Some(named) = &config.command {
        if named != command {
            out.push(Diagnostic::error(
                "command",
                format!("config names command \"{named}\" but the CLI asked for \"{command}\""),
            ));
        }
    }
    if !(config.tol > 0.0 && config.tol <= 1e-2) {
        out.push(Diagnostic::error("tol", format!("tolerance {} outside (0, 1e-2]", config.tol)));
    }
    if !(config.k1 > 0.0 && config.k1.is_finite() && config.k2 > 0.0 && config.k2.is_finite()) {
        out.push(Diagnostic::error(
            "k1",
            format!("constants K1 = {}, K2 = {} must be positive and finite", config.k1, config.k2),
        ));
    }
    let needs = needs_for(command);
    let mut check_space = |field: &str, text: &Option<String>, required: bool| {
        match text {
            Some(text) => match parse_family(text) {
                Ok(space) => {
                    if let Err(e) = space.validate() {
                        out.push(Diagnostic::error(field, e.to_string()));
                    }
                }
                Err(e) => out.push(Diagnostic::error(field, e.to_string())),
            },
            None if required => {
                out.push(Diagnostic::error(field, format!("command {command} needs {field}")))
            }
            None => {}
        }
    };
    check_space("space_x", &config.space_x, needs.space_x);
    check_space("space_y", &config.space_y, needs.space_y);
    match &config.kernel {
        Some(kernel) => {
            if let Err(e) = kernel.validate() {
                out.push(Diagnostic::error("kernel", e.to_string()));
            }
        }
        None if needs.kernel => {
            out.push(Diagnostic::error("kernel", format!("command {command} needs a kernel spec")))
        }
        None => {}
    }
    if needs.n_grid {
        if config.n_grid.is_empty() {
            out.push(Diagnostic::error("n_grid", "degree grid is empty".into()));
        } else if config.n_grid.windows(2).any(|w| w[1] <= w[0]) {
            out.push(Diagnostic::error("n_grid", "degree grid must increase strictly".into()));
        }
    }
    if needs.p_grid && config.p_grid.is_empty() {
        out.push(Diagnostic::error("p_grid", "exponent grid is empty".into()));
    }
    if let Some(&bad) = config.p_grid.iter().find(|&&p| !(p >= 1.0 && p.is_finite())) {
        out.push(Diagnostic::error("p_grid", format!("exponent {bad} outside [1, inf)")));
    }
    if needs.delta_grid && config.delta_grid.is_empty() {
        out.push(Diagnostic::error("delta_grid", "measure grid is empty".into()));
    }
    if let Some(&bad) = config.delta_grid.iter().find(|&&d| !(d > 0.0 && d <= 1.0)) {
        out.push(Diagnostic::error("delta_grid", format!("measure {bad} outside (0, 1]")));
    }
    if needs.r_s_grids && (config.r_grid.is_empty() || config.s_grid.is_empty()) {
        out.push(Diagnostic::error("r_grid", "extrapolation needs both r_grid and s_grid".into()));
    }
    if needs.single_n && config.n.is_none() {
        out.push(Diagnostic::error("n", format!("command {command} needs a degree n")));
    }
    if needs.power_m && config.m.is_none() {
        out.push(Diagnostic::error("m", format!("command {command} needs a kernel power m")));
    }
    if needs.zygmund {
        match &config.zygmund {
            Some(z) => {
                if !(1.0 < z.p && z.p < z.q && z.q.is_finite()) {
                    out.push(Diagnostic::error(
                        "zygmund",
                        format!("need 1 < p < q, got ({}, {})", z.p, z.q),
                    ));
                }
                if !(z.gamma >= 0.0 && z.beta >= 0.0) {
                    out.push(Diagnostic::error(
                        "zygmund",
                        format!("log weights ({}, {}) must be nonnegative", z.gamma, z.beta),
                    ));
                }
            }
            None => out.push(Diagnostic::error("zygmund", "command zygmund needs its parameter block".into())),
        }
    }
    if needs.extrapolation && config.extrapolation.is_none() {
        out.push(Diagnostic::error(
            "extrapolation",
            "command extrapolation needs its parameter block".into(),
        ));
    }
    if let Err(e) = config.sigma_rule.validate() {
        out.push(Diagnostic::error("sigma_rule", e.to_string()));
    }
    if let Some(bounds) = &config.bounds {
        if let Err(e) = bounds.validate() {
            out.push(Diagnostic::error("bounds", e.to_string()));
        }
    }
    let n_max = config.n_grid.iter().copied().max().unwrap_or(0).max(config.n.unwrap_or(0));
    if n_max > 10_000 && config.tol < 1e-10 {
        out.push(Diagnostic::warning(
            "n_grid",
            format!(
                "degree {n_max} with tolerance {:e} will be slow; consider loosening one",
                config.tol
            ),
        ));
    }
    out
}

/// Space lookup after validation; failures here are config errors.
pub fn space(config: &ExperimentConfig, field: &str) -> Result<SpaceSpec, String> {
    let text = match field {
        "space_x" => &config.space_x,
        _ => &config.space_y,
    };
    let text = text.as_ref().ok_or_else(|| format!("missing {field}"))?;
    parse_family(text).map_err(|e| format!("{field}: {e}"))
}
