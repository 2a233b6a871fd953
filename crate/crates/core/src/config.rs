//! Run configuration: `key=value` text plus overrides, validated.
//!
//! The defaults reproduce the low Mach benchmark: `eps = 0.1`, `alpha = 0`,
//! 50x50 cells on the unit square, CFL 0.45, final time 1.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Result, SolverError};
use crate::grid::{GridSpec, MIN_CELLS};
use crate::model::{RegimeParams, DEFAULT_GAMMA};
use crate::stepper::StepConfig;

/// Environment variable consulted when no `output_dir` is configured.
pub const OUTPUT_DIR_ENV: &str = "APFLOW_OUTPUT_DIR";
pub const DEFAULT_OUTPUT_DIR: &str = "apflow-output";

pub const KEYS: &[&str] = &[
    "preset",
    "eps",
    "alpha",
    "gamma",
    "gravity",
    "nx",
    "ny",
    "cfl",
    "dt_max",
    "t_final",
    "newton_tol",
    "newton_max",
    "output_dir",
    "output_every",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub eps: f64,
    pub alpha: u8,
    pub gamma_eos: f64,
    pub gravity_on: bool,
    pub nx: usize,
    pub ny: usize,
    pub cfl: f64,
    pub dt_max: f64,
    pub t_final: f64,
    pub newton_tol: f64,
    pub newton_max: usize,
    pub output_dir: PathBuf,
    /// Time-series sampling interval in steps.
    pub output_every: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self::low_mach()
    }
}

impl RunConfig {
    pub fn low_mach() -> Self {
        let step = StepConfig::default();
        Self {
            eps: 0.1,
            alpha: 0,
            gamma_eos: DEFAULT_GAMMA,
            gravity_on: true,
            nx: 50,
            ny: 50,
            cfl: step.cfl,
            dt_max: step.dt_max,
            t_final: 1.0,
            newton_tol: step.newton_tol,
            newton_max: step.max_newton,
            output_dir: std::env::var_os(OUTPUT_DIR_ENV)
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR)),
            output_every: 10,
        }
    }

    pub fn boussinesq() -> Self {
        Self {
            alpha: 1,
            ..Self::low_mach()
        }
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "low-mach" | "low_mach" | "lowmach" => Ok(Self::low_mach()),
            "boussinesq" => Ok(Self::boussinesq()),
            other => Err(SolverError::config(
                "preset",
                format!("unknown preset `{other}` (expected low-mach or boussinesq)"),
            )),
        }
    }

    pub fn preset_name(&self) -> &'static str {
        if self.alpha == 1 {
            "boussinesq"
        } else {
            "low-mach"
        }
    }

    /// Sets one key from its textual value. `preset` resets every field.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "preset" => *self = Self::preset(value)?,
            "eps" => self.eps = parse_num(key, value)?,
            "alpha" => self.alpha = parse_num(key, value)?,
            "gamma" => self.gamma_eos = parse_num(key, value)?,
            "gravity" => self.gravity_on = parse_bool(key, value)?,
            "nx" => self.nx = parse_num(key, value)?,
            "ny" => self.ny = parse_num(key, value)?,
            "cfl" => self.cfl = parse_num(key, value)?,
            "dt_max" => self.dt_max = parse_num(key, value)?,
            "t_final" => self.t_final = parse_num(key, value)?,
            "newton_tol" => self.newton_tol = parse_num(key, value)?,
            "newton_max" => self.newton_max = parse_num(key, value)?,
            "output_dir" => {
                if value.is_empty() {
                    return Err(SolverError::config(key, "must not be empty"));
                }
                self.output_dir = PathBuf::from(value)
            }
            "output_every" => self.output_every = parse_num(key, value)?,
            other => {
                return Err(SolverError::config(
                    other,
                    format!("unknown key (expected one of {})", KEYS.join(", ")),
                ))
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |key: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(SolverError::config(key, format!("must be positive, got {v}")))
            }
        };
        positive("eps", self.eps)?;
        if self.alpha > 1 {
            return Err(SolverError::config(
                "alpha",
                format!("must be 0 or 1, got {}", self.alpha),
            ));
        }
        if !(self.gamma_eos.is_finite() && self.gamma_eos > 1.0) {
            return Err(SolverError::config(
                "gamma",
                format!("must exceed 1, got {}", self.gamma_eos),
            ));
        }
        for (key, n) in [("nx", self.nx), ("ny", self.ny)] {
            if n < MIN_CELLS {
                return Err(SolverError::config(
                    key,
                    format!("must be at least {MIN_CELLS}, got {n}"),
                ));
            }
        }
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(SolverError::config(
                "cfl",
                format!("must lie in (0, 1), got {}", self.cfl),
            ));
        }
        positive("dt_max", self.dt_max)?;
        positive("t_final", self.t_final)?;
        positive("newton_tol", self.newton_tol)?;
        if self.newton_max == 0 {
            return Err(SolverError::config("newton_max", "must be at least 1"));
        }
        if self.output_every == 0 {
            return Err(SolverError::config("output_every", "must be at least 1"));
        }
        Ok(())
    }

    /// Builds a configuration from `key=value` text, then applies `overrides`
    /// (command-line flags) on top. A `preset` key is applied before any other
    /// key from the same or a weaker source.
    pub fn from_sources(text: &str, overrides: &[(String, String)]) -> Result<Self> {
        let from_text = parse_pairs(text)?;
        let preset = overrides
            .iter()
            .chain(&from_text)
            .find(|(k, _)| k == "preset")
            .map(|(_, v)| v.as_str());
        let mut cfg = match preset {
            Some(p) => Self::preset(p.trim())?,
            None => Self::default(),
        };
        for (k, v) in from_text.iter().chain(overrides) {
            if k != "preset" {
                cfg.set(k, v)?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Serialises to `key=value` lines accepted by [`parse_config`].
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "preset={}", self.preset_name());
        let _ = writeln!(s, "eps={}", self.eps);
        let _ = writeln!(s, "alpha={}", self.alpha);
        let _ = writeln!(s, "gamma={}", self.gamma_eos);
        let _ = writeln!(s, "gravity={}", self.gravity_on);
        let _ = writeln!(s, "nx={}", self.nx);
        let _ = writeln!(s, "ny={}", self.ny);
        let _ = writeln!(s, "cfl={}", self.cfl);
        let _ = writeln!(s, "dt_max={}", self.dt_max);
        let _ = writeln!(s, "t_final={}", self.t_final);
        let _ = writeln!(s, "newton_tol={}", self.newton_tol);
        let _ = writeln!(s, "newton_max={}", self.newton_max);
        let _ = writeln!(s, "output_dir={}", self.output_dir.display());
        let _ = writeln!(s, "output_every={}", self.output_every);
        s
    }

    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::unit_square(self.nx, self.ny)
    }

    pub fn regime(&self) -> Result<RegimeParams> {
        RegimeParams::new(self.eps, self.alpha, self.gamma_eos, self.gravity_on)
    }

    pub fn step_config(&self) -> StepConfig {
        StepConfig {
            cfl: self.cfl,
            dt_max: self.dt_max,
            newton_tol: self.newton_tol,
            max_newton: self.newton_max,
        }
    }
}

/// Parses `key=value` lines; blank lines and `#` comments are ignored.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    RunConfig::from_sources(text, &[])
}

fn parse_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| SolverError::config(line, "expected key=value"))?;
        let key = k.trim();
        if !KEYS.contains(&key) {
            return Err(SolverError::config(
                key,
                format!("unknown key (expected one of {})", KEYS.join(", ")),
            ));
        }
        pairs.push((key.to_string(), v.trim().to_string()));
    }
    Ok(pairs)
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| SolverError::config(key, format!("malformed value `{value}`: {e}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "on" | "1" | "yes" => Ok(true),
        "false" | "off" | "0" | "no" => Ok(false),
        _ => Err(SolverError::config(
            key,
            format!("malformed value `{value}`: expected true or false"),
        )),
    }
}
