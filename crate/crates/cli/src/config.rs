//! Scenario files.
//!
//! A scenario is one JSON document; every key is optional:
//!
//! ```json
//! {
//!   "params": { "a": 1.0, "b": 0.5, "c": 0.5, "m": 3.69, "nu": 0.05, "gamma": 0.02,
//!               "r": 0.3, "delta": 0.05, "lambda_h": 0.01, "lambda_v": 1.0 },
//!   "alphas": [1.0, 0.99, 0.95, 0.9],
//!   "initial_state": { "s_h": 0.8, "i_h": 0.1, "r_h": 0.1, "s_v": 0.9, "i_v": 0.1 },
//!   "h": 0.01,
//!   "horizon": 200.0,
//!   "stride": 1,
//!   "outputs": { "trajectory": true, "phase": [["s_h", "i_v"]], "report": false }
//! }
//! ```

use std::fs;
use std::path::Path;

use fracmal::fracsolver::{FractionalOrder, TimeGrid};
use fracmal::model::{simplex_defect, Compartment, EpiState, ModelParams};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const DEFAULT_ALPHAS: [f64; 4] = [1.0, 0.99, 0.95, 0.90];
pub const DEFAULT_STEP: f64 = 0.01;
pub const DEFAULT_HORIZON: f64 = 200.0;
/// Largest accepted `horizon / h`. The solve is quadratic in this.
pub const MAX_STEPS: usize = 10_000_000;
pub const SIMPLEX_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub params: ModelParams,
    #[serde(default = "default_alphas")]
    pub alphas: Vec<f64>,
    #[serde(default = "default_initial")]
    pub initial_state: EpiState,
    #[serde(default = "default_step")]
    pub h: f64,
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    /// Keep every `stride`-th row in CSV output.
    #[serde(default = "default_stride")]
    pub stride: usize,
    #[serde(default)]
    pub outputs: Outputs,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default = "yes")]
    pub trajectory: bool,
    #[serde(default)]
    pub phase: Vec<[Compartment; 2]>,
    #[serde(default)]
    pub report: bool,
}

impl Default for Outputs {
    fn default() -> Self {
        Outputs {
            trajectory: true,
            phase: Vec::new(),
            report: false,
        }
    }
}

fn default_alphas() -> Vec<f64> {
    DEFAULT_ALPHAS.to_vec()
}
fn default_initial() -> EpiState {
    EpiState::REFERENCE_INITIAL
}
fn default_step() -> f64 {
    DEFAULT_STEP
}
fn default_horizon() -> f64 {
    DEFAULT_HORIZON
}
fn default_stride() -> usize {
    1
}
fn yes() -> bool {
    true
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            params: ModelParams::REFERENCE,
            alphas: default_alphas(),
            initial_state: default_initial(),
            h: DEFAULT_STEP,
            horizon: DEFAULT_HORIZON,
            stride: 1,
            outputs: Outputs::default(),
        }
    }
}

/// A config that passed validation, with its derived solver inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub orders: Vec<FractionalOrder>,
    pub grid: TimeGrid,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let inner = e.inner();
            CliError::Parse {
                file: None,
                path: e.path().to_string(),
                line: inner.line(),
                column: inner.column(),
                message: inner.to_string(),
            }
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(self) -> Result<Scenario, CliError> {
        let invalid = |msg: String| Err(CliError::Invalid(msg));
        self.params
            .validate()
            .map_err(|e| CliError::Invalid(format!("params: {e}")))?;

        if self.alphas.is_empty() {
            return invalid("alphas: list is empty".into());
        }
        let mut orders = Vec::with_capacity(self.alphas.len());
        for (i, &a) in self.alphas.iter().enumerate() {
            let o = FractionalOrder::new(a)
                .map_err(|_| CliError::Invalid(format!("alphas[{i}]: {a} is outside (0, 1]")))?;
            if self.alphas[..i].contains(&a) {
                return invalid(format!("alphas[{i}]: {a} is listed twice"));
            }
            orders.push(o);
        }

        let y = self.initial_state.to_array();
        if y.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return invalid("initial_state: components must be finite and non-negative".into());
        }
        let (dh, dv) = simplex_defect(&self.initial_state);
        if dh.abs() > SIMPLEX_TOLERANCE {
            return invalid(format!(
                "initial_state: s_h + i_h + r_h must equal 1 (human simplex defect {dh:.3e})"
            ));
        }
        if dv.abs() > SIMPLEX_TOLERANCE {
            return invalid(format!(
                "initial_state: s_v + i_v must equal 1 (vector simplex defect {dv:.3e})"
            ));
        }

        if !(self.h.is_finite() && self.h > 0.0) {
            return invalid(format!("h: step must be positive, got {}", self.h));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return invalid(format!("horizon: must be positive, got {}", self.horizon));
        }
        let ratio = self.horizon / self.h;
        if ratio > MAX_STEPS as f64 + 0.5 {
            return invalid(format!(
                "horizon / h = {ratio:.0} exceeds the limit of {MAX_STEPS} steps"
            ));
        }
        let n_steps = ratio.round();
        if n_steps < 1.0 || (ratio - n_steps).abs() > 1e-9 * ratio.max(1.0) {
            return invalid(format!(
                "horizon / h must be a positive whole number of steps, got {ratio}"
            ));
        }
        if self.stride == 0 {
            return invalid("stride: must be at least 1".into());
        }
        for (i, [x, y]) in self.outputs.phase.iter().enumerate() {
            if x == y {
                return invalid(format!("outputs.phase[{i}]: both axes are {x}"));
            }
        }

        let grid = TimeGrid::new(self.h, n_steps as usize)
            .map_err(|e| CliError::Invalid(format!("h: {e}")))?;
        Ok(Scenario {
            config: self,
            orders,
            grid,
        })
    }
}

/// Reads, parses and validates a scenario file.
pub fn load_config(path: &Path) -> Result<Scenario, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    ScenarioConfig::from_json(&text)
        .map_err(|e| e.in_file(path))?
        .validate()
}
