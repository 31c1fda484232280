//! Flat `key = value` configuration files.
//!
//! Keys mirror the fields of [`ScatterConfig`]; `#` starts a comment. The
//! run manifest uses the same format, so its bookkeeping keys are accepted
//! and ignored here.

use cavscat::{MMax, ModeFunction, ModeShape, ScatterConfig};

use crate::error::{CliError, CliResult};

/// Keys written by the manifest that carry no configuration.
pub const META_KEYS: [&str; 4] = ["command", "timestamp", "code_version", "outputs"];

pub const KEYS: [&str; 9] = [
    "mode",
    "size",
    "n",
    "k_over_kappa_n",
    "m_max",
    "theta_points",
    "series_tail",
    "ode_step",
    "root_tol",
];

/// Configuration used when neither a file nor flags say otherwise: the
/// cold-regime constant mode of unit interaction length.
pub fn default_config() -> ScatterConfig {
    ScatterConfig::constant(1.0, 0, 0.1)
}

fn bad(line: usize, key: &str, value: &str, what: &str) -> CliError {
    CliError::Config(format!("line {line}: field `{key}`: cannot parse `{value}` as {what}"))
}

pub fn parse_m_max(s: &str) -> Option<MMax> {
    if s == "auto" {
        Some(MMax::Auto)
    } else {
        s.parse().ok().map(MMax::Fixed)
    }
}

/// Sets one field from its textual value; `line` is only used in messages.
pub fn set_field(cfg: &mut ScatterConfig, key: &str, value: &str, line: usize) -> CliResult<()> {
    let float = |what: &str| value.parse::<f64>().map_err(|_| bad(line, key, value, what));
    match key {
        "mode" => {
            let shape = ModeShape::parse(value).ok_or_else(|| bad(line, key, value, "`constant` or `gaussian`"))?;
            cfg.mode = match shape {
                ModeShape::Constant => ModeFunction::constant(cfg.mode.size),
                ModeShape::Gaussian => ModeFunction::gaussian(cfg.mode.size),
            };
        }
        "size" => cfg.mode.size = float("a number")?,
        "n" => cfg.n = value.parse().map_err(|_| bad(line, key, value, "a non-negative integer"))?,
        "k_over_kappa_n" => cfg.k_over_kappa_n = float("a number")?,
        "m_max" => cfg.m_max = parse_m_max(value).ok_or_else(|| bad(line, key, value, "an integer or `auto`"))?,
        "theta_points" => cfg.theta_points = value.parse().map_err(|_| bad(line, key, value, "a positive integer"))?,
        "series_tail" => cfg.tolerances.series_tail = float("a number")?,
        "ode_step" => cfg.tolerances.ode_step = float("a number")?,
        "root_tol" => cfg.tolerances.root_tol = float("a number")?,
        _ => return Err(CliError::Config(format!("line {line}: unknown key `{key}`"))),
    }
    Ok(())
}

/// Applies every assignment of `text` on top of `base`.
pub fn parse_onto(base: ScatterConfig, text: &str) -> CliResult<ScatterConfig> {
    let mut cfg = base;
    let mut seen: Vec<&str> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {line}: expected `key = value`, got `{body}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if META_KEYS.contains(&key) {
            continue;
        }
        if seen.contains(&key) {
            return Err(CliError::Config(format!("line {line}: duplicate key `{key}`")));
        }
        seen.push(key);
        set_field(&mut cfg, key, value, line)?;
    }
    Ok(cfg)
}

pub fn parse(text: &str) -> CliResult<ScatterConfig> {
    parse_onto(default_config(), text)
}

/// Serializes every field in a form [`parse`] reads back exactly.
pub fn echo(cfg: &ScatterConfig) -> String {
    let m_max = match cfg.m_max {
        MMax::Auto => "auto".to_string(),
        MMax::Fixed(m) => m.to_string(),
    };
    let t = &cfg.tolerances;
    let values = [
        cfg.mode.shape.name().to_string(),
        cfg.mode.size.to_string(),
        cfg.n.to_string(),
        cfg.k_over_kappa_n.to_string(),
        m_max,
        cfg.theta_points.to_string(),
        t.series_tail.to_string(),
        t.ode_step.to_string(),
        t.root_tol.to_string(),
    ];
    KEYS.iter().zip(values).map(|(k, v)| format!("{k} = {v}\n")).collect()
}
