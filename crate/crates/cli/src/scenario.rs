//! Scenario configuration: a UTF-8 JSON document selecting a mode, the game
//! parameters, the arrival density, and solver/output settings.

use serde::Deserialize;

use intercept_core::{Density, GameParams, VehiclePos};

/// Schema-level failure; the message names the offending field.
#[derive(Debug)]
pub struct SchemaError(pub String);

impl std::fmt::Display for SchemaError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "schema error: {}", self.0)
    }
}

impl std::error::Error for SchemaError {}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub width: f64,
    pub target_speed: f64,
    pub density: DensitySpec,
    pub mode: Mode,
    #[serde(default)]
    pub positions: Vec<[f64; 2]>,
    /// Evader start abscissa (simulate-pursuit only).
    pub target_start: Option<f64>,
    /// Evader objective (simulate-pursuit only).
    pub strategy: Option<Strategy>,
    #[serde(default)]
    pub solver: SolverParams,
    pub seed: Option<u64>,
    #[serde(default)]
    pub outputs: Outputs,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum DensitySpec {
    Uniform,
    PiecewiseLinear { points: Vec<[f64; 2]> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum Mode {
    #[serde(rename = "single-time")]
    SingleTime,
    #[serde(rename = "single-height")]
    SingleHeight,
    #[serde(rename = "single-intercept-time")]
    SingleInterceptTime,
    #[serde(rename = "multi-lloyd")]
    MultiLloyd,
    #[serde(rename = "simulate-pursuit")]
    SimulatePursuit,
    #[serde(rename = "partition-only")]
    PartitionOnly,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::SingleTime => "single-time",
            Mode::SingleHeight => "single-height",
            Mode::SingleInterceptTime => "single-intercept-time",
            Mode::MultiLloyd => "multi-lloyd",
            Mode::SimulatePursuit => "simulate-pursuit",
            Mode::PartitionOnly => "partition-only",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Height,
    Wall,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverParams {
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    #[serde(default = "default_max_rounds")]
    pub max_rounds: usize,
    #[serde(default = "default_substeps")]
    pub substeps: usize,
    #[serde(default = "default_dt")]
    pub dt: f64,
    pub capture_radius: Option<f64>,
}

fn default_tol() -> f64 {
    1e-8
}
fn default_max_iters() -> usize {
    10_000
}
fn default_max_rounds() -> usize {
    500
}
fn default_substeps() -> usize {
    intercept_core::DEFAULT_SUBSTEPS
}
fn default_dt() -> f64 {
    1e-4
}

impl Default for SolverParams {
    fn default() -> Self {
        Self {
            tol: default_tol(),
            max_iters: default_max_iters(),
            max_rounds: default_max_rounds(),
            substeps: default_substeps(),
            dt: default_dt(),
            capture_radius: None,
        }
    }
}

impl SolverParams {
    pub fn capture_radius(&self) -> f64 {
        self.capture_radius.unwrap_or(2.0 * self.dt)
    }
}

/// Artifact file names, relative to the output directory.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    pub trace_csv: Option<String>,
    pub partition_json: Option<String>,
    pub pursuit_csv: Option<String>,
    pub svg: Option<String>,
    pub summary_json: Option<String>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, SchemaError> {
        let scenario: Scenario =
            serde_json::from_str(text).map_err(|e| SchemaError(e.to_string()))?;
        scenario.validate()?;
        Ok(scenario)
    }

    fn validate(&self) -> Result<(), SchemaError> {
        if !(self.width.is_finite() && self.width > 0.0) {
            return Err(SchemaError(format!(
                "field `width` must be positive, got {}",
                self.width
            )));
        }
        let v = self.target_speed;
        if !(v.is_finite() && v > 0.0 && v < 1.0) {
            return Err(SchemaError(format!(
                "field `target_speed` must lie strictly in (0, 1), got {v}"
            )));
        }
        if self.mode == Mode::SingleInterceptTime && v < 1e-9 {
            return Err(SchemaError(
                "field `target_speed` must be at least 1e-9 for intercept-time modes".into(),
            ));
        }
        match self.mode {
            Mode::SingleTime | Mode::SingleHeight => {
                if self.positions.len() != 1 {
                    return Err(SchemaError(format!(
                        "field `positions` must hold exactly one [x, y] start for mode {}, got {}",
                        self.mode.name(),
                        self.positions.len()
                    )));
                }
                if self.positions[0][1] <= 0.0 {
                    return Err(SchemaError(
                        "field `positions`: descent start must have y > 0".into(),
                    ));
                }
            }
            Mode::SingleInterceptTime => {}
            Mode::MultiLloyd | Mode::PartitionOnly => {
                if self.positions.is_empty() {
                    return Err(SchemaError(format!(
                        "field `positions` is required for mode {}",
                        self.mode.name()
                    )));
                }
                for (i, p) in self.positions.iter().enumerate() {
                    if !(0.0..=self.width).contains(&p[0]) {
                        return Err(SchemaError(format!(
                            "field `positions[{i}]`: x must lie in [0, {}] for mode {}, got {}",
                            self.width,
                            self.mode.name(),
                            p[0]
                        )));
                    }
                }
            }
            Mode::SimulatePursuit => {
                if self.positions.len() != 1 {
                    return Err(SchemaError(
                        "field `positions` must hold exactly one pursuer start for mode simulate-pursuit"
                            .into(),
                    ));
                }
                if self.target_start.is_none() {
                    return Err(SchemaError(
                        "field `target_start` is required for mode simulate-pursuit".into(),
                    ));
                }
                if self.strategy.is_none() {
                    return Err(SchemaError(
                        "field `strategy` is required for mode simulate-pursuit".into(),
                    ));
                }
            }
        }
        for (i, p) in self.positions.iter().enumerate() {
            if !(p[0].is_finite() && p[1].is_finite()) || p[1] < 0.0 {
                return Err(SchemaError(format!(
                    "field `positions[{i}]` must be finite with y >= 0, got [{}, {}]",
                    p[0], p[1]
                )));
            }
        }
        if let Some(x0) = self.target_start {
            if !(0.0..=self.width).contains(&x0) {
                return Err(SchemaError(format!(
                    "field `target_start` must lie in [0, {}], got {x0}",
                    self.width
                )));
            }
        }
        let s = &self.solver;
        if !(s.tol.is_finite() && s.tol > 0.0) {
            return Err(SchemaError(format!(
                "field `solver.tol` must be positive, got {}",
                s.tol
            )));
        }
        if s.substeps == 0 {
            return Err(SchemaError(
                "field `solver.substeps` must be at least 1".into(),
            ));
        }
        if !(s.dt.is_finite() && s.dt > 0.0) {
            return Err(SchemaError(format!(
                "field `solver.dt` must be positive, got {}",
                s.dt
            )));
        }
        if s.capture_radius() < s.dt {
            return Err(SchemaError(
                "field `solver.capture_radius` must be at least solver.dt".into(),
            ));
        }
        Ok(())
    }

    pub fn game_params(&self) -> Result<GameParams, SchemaError> {
        GameParams::new(self.width, self.target_speed)
            .map_err(|e| SchemaError(format!("game parameters: {e}")))
    }

    pub fn build_density(&self) -> Result<Density, SchemaError> {
        match &self.density {
            DensitySpec::Uniform => Density::uniform(self.width)
                .map_err(|e| SchemaError(format!("field `density`: {e}"))),
            DensitySpec::PiecewiseLinear { points } => {
                let pts: Vec<(f64, f64)> = points.iter().map(|p| (p[0], p[1])).collect();
                Density::piecewise_linear(self.width, &pts)
                    .map_err(|e| SchemaError(format!("field `density.points`: {e}")))
            }
        }
    }

    pub fn vehicle_positions(&self) -> Vec<VehiclePos> {
        self.positions
            .iter()
            .map(|p| VehiclePos::new(p[0], p[1]))
            .collect()
    }
}
