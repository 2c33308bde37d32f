//! Run configuration: flat `key = value` files merged with command-line flags.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use bkm_core::cases::{builtin, CaseName};
use bkm_core::kernels::ParticularPair;
use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RbfChoice {
    Mq,
    Tps,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Table,
    Csv,
    Json,
}

/// Every setting a run accepts, each optional until merged with the case defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    pub case: Option<String>,
    pub boundary_knots: Option<usize>,
    pub interior_knots: Option<usize>,
    pub rbf: Option<RbfChoice>,
    pub shape: Option<f64>,
    pub output: Option<OutputFormat>,
    pub eval_points: Option<PathBuf>,
    pub knots: Option<PathBuf>,
    pub knots_out: Option<PathBuf>,
}

impl RawConfig {
    /// Fills every unset field of `self` from `base`.
    pub fn or(self, base: RawConfig) -> RawConfig {
        RawConfig {
            case: self.case.or(base.case),
            boundary_knots: self.boundary_knots.or(base.boundary_knots),
            interior_knots: self.interior_knots.or(base.interior_knots),
            rbf: self.rbf.or(base.rbf),
            shape: self.shape.or(base.shape),
            output: self.output.or(base.output),
            eval_points: self.eval_points.or(base.eval_points),
            knots: self.knots.or(base.knots),
            knots_out: self.knots_out.or(base.knots_out),
        }
    }
}

/// A validated run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub case: CaseName,
    pub boundary_n: usize,
    pub interior_l: usize,
    pub pair: ParticularPair<f64>,
    pub output: OutputFormat,
    pub eval_points: Option<PathBuf>,
    pub knots: Option<PathBuf>,
    pub knots_out: Option<PathBuf>,
}

const KEYS: [&str; 9] = [
    "case",
    "boundary_knots",
    "interior_knots",
    "rbf",
    "shape",
    "output",
    "eval_points",
    "knots",
    "knots_out",
];

fn parse_value<T: FromStr>(key: &str, value: &str, line: usize, issues: &mut Vec<String>) -> Option<T> {
    match value.parse() {
        Ok(v) => Some(v),
        Err(_) => {
            issues.push(format!("line {line}: `{value}` is not a valid value for {key}"));
            None
        }
    }
}

fn parse_enum<T: ValueEnum>(key: &str, value: &str, line: usize, issues: &mut Vec<String>) -> Option<T> {
    match T::from_str(value, true) {
        Ok(v) => Some(v),
        Err(_) => {
            let names: Vec<String> = T::value_variants()
                .iter()
                .filter_map(|v| v.to_possible_value().map(|p| p.get_name().to_string()))
                .collect();
            issues.push(format!("line {line}: {key} must be one of {}, got `{value}`", names.join(", ")));
            None
        }
    }
}

/// Parses a config file body. Keys may use `-` or `_`; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<RawConfig, Vec<String>> {
    let mut cfg = RawConfig::default();
    let mut issues = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some((key, value)) = body.split_once('=') else {
            issues.push(format!("line {line}: expected `key = value`, got `{body}`"));
            continue;
        };
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        match key.as_str() {
            "case" => cfg.case = Some(value.to_string()),
            "boundary_knots" => cfg.boundary_knots = parse_value(&key, value, line, &mut issues),
            "interior_knots" => cfg.interior_knots = parse_value(&key, value, line, &mut issues),
            "rbf" => cfg.rbf = parse_enum(&key, value, line, &mut issues),
            "shape" => cfg.shape = parse_value(&key, value, line, &mut issues),
            "output" => cfg.output = parse_enum(&key, value, line, &mut issues),
            "eval_points" => cfg.eval_points = Some(PathBuf::from(value)),
            "knots" => cfg.knots = Some(PathBuf::from(value)),
            "knots_out" => cfg.knots_out = Some(PathBuf::from(value)),
            other => issues.push(format!("line {line}: unknown key `{other}` (known keys: {})", KEYS.join(", "))),
        }
    }
    if issues.is_empty() {
        Ok(cfg)
    } else {
        Err(issues)
    }
}

pub fn read_config(path: &Path) -> Result<RawConfig, Vec<String>> {
    let text = fs::read_to_string(path).map_err(|e| vec![format!("cannot read config {}: {e}", path.display())])?;
    parse_config(&text).map_err(|issues| {
        issues
            .into_iter()
            .map(|m| format!("{}: {m}", path.display()))
            .collect()
    })
}

/// Resolves defaults and checks every combination, reporting all violations together.
pub fn validate(raw: RawConfig) -> Result<RunConfig, Vec<String>> {
    let mut issues = Vec::new();
    let case = match raw.case.as_deref() {
        None => {
            issues.push("no case given (pass it as an argument or set `case` in the config file)".to_string());
            None
        }
        Some(name) => match name.parse::<CaseName>() {
            Ok(c) => Some(c),
            Err(e) => {
                issues.push(e.to_string());
                None
            }
        },
    };
    if raw.boundary_knots == Some(0) {
        issues.push("--boundary-knots must be at least 1".to_string());
    }
    if raw.knots.is_some() && (raw.boundary_knots.is_some() || raw.interior_knots.is_some()) {
        issues.push("--knots replaces the generated layout; drop --boundary-knots and --interior-knots".to_string());
    }
    if let Some(c) = case {
        if c.is_nonlinear() && raw.interior_knots.is_some_and(|l| l > 0) {
            issues.push(format!(
                "{c} is a nonlinear case and is solved with boundary knots only; --interior-knots must be 0"
            ));
        }
    }
    let rbf = raw.rbf.unwrap_or(RbfChoice::Mq);
    match raw.shape {
        Some(s) if !(s.is_finite() && s > 0.0) => issues.push(format!("--shape must be a positive number, got {s}")),
        Some(_) if rbf != RbfChoice::Mq => issues.push("--shape only applies to --rbf mq".to_string()),
        _ => {}
    }
    let Some(case) = case.filter(|_| issues.is_empty()) else {
        return Err(issues);
    };

    let defaults = builtin::<f64>(case);
    let pair = match rbf {
        RbfChoice::Mq => match raw.shape {
            Some(shape) => ParticularPair::Multiquadric { shape },
            None => defaults.problem.rbf_pair,
        },
        RbfChoice::Tps => ParticularPair::ThinPlate,
        RbfChoice::Linear => ParticularPair::Linear,
    };
    Ok(RunConfig {
        case,
        boundary_n: raw.boundary_knots.unwrap_or(defaults.default_boundary),
        interior_l: raw.interior_knots.unwrap_or(defaults.default_interior),
        pair,
        output: raw.output.unwrap_or_default(),
        eval_points: raw.eval_points,
        knots: raw.knots,
        knots_out: raw.knots_out,
    })
}
