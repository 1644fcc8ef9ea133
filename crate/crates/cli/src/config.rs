//! Experiment configuration.
//!
//! Flat TOML key-value file. Top-level side keys apply to both sides and
//! `A.<key>` / `B.<key>` override one side:
//!
//! ```toml
//! N = 50
//! J = 1.0
//! h = 0.0
//! J0 = 1.0
//! h0 = 0.0
//! A.h = 2.0
//! initial_state = "phi+"
//! mode = "finite"
//! time.max = 45.0
//! time.step = 0.01
//! window = [10.0, 45.0]
//! output = "results"
//! ```
//!
//! `J0y` defaults to `J0` (isotropic qubit coupling); `J0y = 0` gives the
//! anisotropic case.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use spinenv::{BellKind, SubsystemSpec};

use crate::error::CliError;

pub const DEFAULT_N: usize = 50;
pub const DEFAULT_T_MAX: f64 = 45.0;
pub const DEFAULT_STEP: f64 = 0.01;
pub const DEFAULT_WINDOW: [f64; 2] = [10.0, 45.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Finite,
    Thermodynamic,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Finite => "finite",
            Mode::Thermodynamic => "thermodynamic",
        })
    }
}

/// One side's parameters; every field optional so the same type serves as
/// shared defaults and as per-side overrides.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SideKeys {
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(rename = "J", skip_serializing_if = "Option::is_none")]
    pub j: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(rename = "J0", skip_serializing_if = "Option::is_none")]
    pub j0: Option<f64>,
    #[serde(rename = "J0y", skip_serializing_if = "Option::is_none")]
    pub j0y: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h0: Option<f64>,
}

impl SideKeys {
    fn over(&self, base: &SideKeys) -> SideKeys {
        SideKeys {
            n: self.n.or(base.n),
            j: self.j.or(base.j),
            h: self.h.or(base.h),
            j0: self.j0.or(base.j0),
            j0y: self.j0y.or(base.j0y),
            h0: self.h0.or(base.h0),
        }
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let num = || value.parse::<f64>().map_err(|_| CliError::Config(format!("{key}: '{value}' is not a number")));
        match key {
            "N" | "n" => {
                self.n = Some(value.parse().map_err(|_| CliError::Config(format!("N: '{value}' is not a count")))?)
            }
            "J" => self.j = Some(num()?),
            "h" => self.h = Some(num()?),
            "J0" => self.j0 = Some(num()?),
            "J0y" => self.j0y = Some(num()?),
            "h0" => self.h0 = Some(num()?),
            _ => return Err(CliError::Config(format!("unknown side key '{key}'"))),
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeKeys {
    #[serde(default = "default_t_max")]
    pub max: f64,
    #[serde(default = "default_step")]
    pub step: f64,
}

fn default_t_max() -> f64 {
    DEFAULT_T_MAX
}

fn default_step() -> f64 {
    DEFAULT_STEP
}

impl Default for TimeKeys {
    fn default() -> Self {
        Self { max: DEFAULT_T_MAX, step: DEFAULT_STEP }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub shared: SideKeys,
    #[serde(rename = "A", default, skip_serializing_if = "is_empty_side")]
    pub side_a: SideKeys,
    #[serde(rename = "B", default, skip_serializing_if = "is_empty_side")]
    pub side_b: SideKeys,
    #[serde(default = "default_state")]
    pub initial_state: String,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub time: TimeKeys,
    #[serde(default = "default_window")]
    pub window: [f64; 2],
    #[serde(default = "default_output")]
    pub output: PathBuf,
}

fn is_empty_side(s: &SideKeys) -> bool {
    *s == SideKeys::default()
}

fn default_state() -> String {
    "phi+".into()
}

fn default_window() -> [f64; 2] {
    DEFAULT_WINDOW
}

fn default_output() -> PathBuf {
    PathBuf::from("results")
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        toml::from_str("").expect("empty config parses")
    }
}

/// Fully resolved parameters of one side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Side {
    pub n: usize,
    pub j: f64,
    pub h: f64,
    pub j0: f64,
    pub j0y: f64,
    pub h0: f64,
}

impl Side {
    pub fn spec(&self) -> Result<SubsystemSpec<f64>, CliError> {
        Ok(SubsystemSpec::homogeneous(self.n, self.j, self.h, self.j0, self.h0)?.with_qubit_coupling(self.j0, self.j0y)?)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.j0 == self.j && self.j0y == self.j && self.h0 == self.h
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={} J={} h={} J0={} J0y={} h0={}", self.n, self.j, self.h, self.j0, self.j0y, self.h0)
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: Self = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.time.step > 0.0) || !self.time.step.is_finite() {
            return Err(CliError::Config(format!("time.step must be positive, got {}", self.time.step)));
        }
        if !(self.time.max >= 0.0) || !self.time.max.is_finite() {
            return Err(CliError::Config(format!("time.max must be non-negative, got {}", self.time.max)));
        }
        if !(self.window[0] < self.window[1]) {
            return Err(CliError::Config(format!("window [{}, {}] is empty", self.window[0], self.window[1])));
        }
        self.bell()?;
        let (a, b) = (self.side('A'), self.side('B'));
        for s in [a, b] {
            if s.n == 0 {
                return Err(CliError::Config("N must be at least 1".into()));
            }
            if self.mode == Mode::Thermodynamic && !s.is_homogeneous() {
                return Err(CliError::Config(
                    "mode = thermodynamic requires homogeneous sides (J0 = J0y = J, h0 = h)".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn bell(&self) -> Result<BellKind, CliError> {
        BellKind::from_str(&self.initial_state).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Resolved side `'A'` or `'B'`.
    pub fn side(&self, which: char) -> Side {
        let over = if which == 'A' { &self.side_a } else { &self.side_b };
        let k = over.over(&self.shared);
        let j = k.j.unwrap_or(1.0);
        let j0 = k.j0.unwrap_or(j);
        Side {
            n: k.n.unwrap_or(DEFAULT_N),
            j,
            h: k.h.unwrap_or(0.0),
            j0,
            j0y: k.j0y.unwrap_or(j0),
            h0: k.h0.unwrap_or(0.0),
        }
    }

    /// Applies `key=value`; side keys may be prefixed with `A.` or `B.`.
    /// Call [`validate`](Self::validate) once all keys are set.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "initial_state" => self.initial_state = value.to_string(),
            "mode" => {
                self.mode = match value {
                    "finite" => Mode::Finite,
                    "thermodynamic" => Mode::Thermodynamic,
                    _ => return Err(CliError::Config(format!("unknown mode '{value}'"))),
                }
            }
            "time.max" | "t_max" => {
                self.time.max = value.parse().map_err(|_| CliError::Config(format!("time.max: '{value}'")))?
            }
            "time.step" | "step" => {
                self.time.step = value.parse().map_err(|_| CliError::Config(format!("time.step: '{value}'")))?
            }
            "output" => self.output = PathBuf::from(value),
            "window" => {
                let bad = || CliError::Config(format!("window: '{value}' is not 't1,t2'"));
                let (a, b) = value.trim_matches(|c| c == '[' || c == ']').split_once(',').ok_or_else(bad)?;
                self.window = [a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?];
            }
            _ => match key.split_once('.') {
                Some(("A", k)) => self.side_a.set(k, value)?,
                Some(("B", k)) => self.side_b.set(k, value)?,
                _ => {
                    // a shared key also clears per-side overrides of it
                    self.shared.set(key, value)?;
                    let mut cleared = [self.side_a.clone(), self.side_b.clone()];
                    for side in &mut cleared {
                        match key {
                            "N" | "n" => side.n = None,
                            "J" => side.j = None,
                            "h" => side.h = None,
                            "J0" => side.j0 = None,
                            "J0y" => side.j0y = None,
                            "h0" => side.h0 = None,
                            _ => {}
                        }
                    }
                    [self.side_a, self.side_b] = cleared;
                }
            },
        }
        Ok(())
    }

    /// One-line echo of the resolved configuration for CSV headers.
    pub fn echo(&self) -> String {
        format!(
            "A: {} | B: {} | initial_state={} mode={} t_max={} step={} window=[{}, {}]",
            self.side('A'),
            self.side('B'),
            self.initial_state,
            self.mode,
            self.time.max,
            self.time.step,
            self.window[0],
            self.window[1]
        )
    }
}
