//! Scenario execution: dispatch one mode, write the declared artifacts, and
//! produce the one-line summary.

use std::path::{Path, PathBuf};

use intercept_core as core;
use intercept_core::{
    dominance_partition, instability_check, is_critical, lloyd_descend_with, optimize_single,
    simulate_pursuit, Configuration, CostCoeffs, Density, Interval, PursuitStrategy, VehiclePos,
};
use serde::Serialize;

use crate::artifacts;
use crate::scenario::{Mode, Scenario, SchemaError, Strategy};

/// Failures of a scenario run, ordered by exit code.
#[derive(Debug)]
pub enum RunError {
    /// Exit 2: the scenario file is malformed or inconsistent.
    Schema(String),
    /// Exit 3: a numerical invariant was violated while running.
    Numerical(String),
    /// Exit 4: the solver exhausted its budget without converging.
    NonConvergence(String),
    /// Exit 1: filesystem trouble.
    Io(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Io(_) => 1,
            RunError::Schema(_) => 2,
            RunError::Numerical(_) => 3,
            RunError::NonConvergence(_) => 4,
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Schema(m) => write!(f, "schema error: {m}"),
            RunError::Numerical(m) => write!(f, "numerical invariant violation: {m}"),
            RunError::NonConvergence(m) => write!(f, "non-convergence: {m}"),
            RunError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl From<SchemaError> for RunError {
    fn from(e: SchemaError) -> Self {
        RunError::Schema(e.0)
    }
}

impl From<core::Error> for RunError {
    fn from(e: core::Error) -> Self {
        match e {
            core::Error::Domain(_) | core::Error::Precondition(_) => {
                RunError::Schema(e.to_string())
            }
            _ => RunError::Numerical(e.to_string()),
        }
    }
}

/// One-line run summary; also serialized to `summary_json` when requested.
#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub mode: &'static str,
    pub cost: f64,
    pub iterations: usize,
    /// Criticality (multi-lloyd) or convergence (single modes) flag; absent
    /// for modes without a notion of convergence.
    pub critical: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimum: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grad_norm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub median: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub captured: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unstable_vehicles: Option<Vec<usize>>,
    pub seed: Option<u64>,
}

impl Summary {
    fn new(mode: &'static str) -> Self {
        Self {
            mode,
            cost: f64::NAN,
            iterations: 0,
            critical: None,
            optimum: None,
            grad_norm: None,
            median: None,
            captured: None,
            unstable_vehicles: None,
            seed: None,
        }
    }

    /// The line printed on stdout at the end of a run.
    pub fn render(&self) -> String {
        let critical = match self.critical {
            Some(true) => "true",
            Some(false) => "false",
            None => "n/a",
        };
        let mut line = format!(
            "mode={} cost={:.9} iterations={} critical={critical}",
            self.mode, self.cost, self.iterations
        );
        if let Some([x, y]) = self.optimum {
            line.push_str(&format!(" optimum=({x:.6}, {y:.6})"));
        }
        if let Some(m) = self.median {
            line.push_str(&format!(" median={m:.6}"));
        }
        if let Some(c) = self.captured {
            line.push_str(&format!(" captured={c}"));
        }
        line
    }
}

pub struct RunOutcome {
    pub summary: Summary,
    /// False when the solver budget ran out (exit 4).
    pub converged: bool,
}

fn write_artifact(out_dir: &Path, name: &str, contents: &str) -> Result<(), RunError> {
    let path = out_dir.join(name);
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| RunError::Io(e.to_string()))?;
    }
    std::fs::write(&path, contents).map_err(|e| RunError::Io(format!("{}: {e}", path.display())))
}

/// Snapshot filename `stem_round0123.svg` next to the declared svg path.
fn round_svg_name(base: &str, round: usize) -> String {
    let p = PathBuf::from(base);
    let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or("snapshot");
    let dir = p.parent().filter(|d| !d.as_os_str().is_empty());
    let name = format!("{stem}_round{round:04}.svg");
    match dir {
        Some(d) => d.join(name).to_string_lossy().into_owned(),
        None => name,
    }
}

/// Execute a parsed scenario, writing artifacts under `out_dir`.
pub fn execute(
    scenario: &Scenario,
    out_dir: &Path,
    svg_every: usize,
    seed_override: Option<u64>,
) -> Result<RunOutcome, RunError> {
    std::fs::create_dir_all(out_dir).map_err(|e| RunError::Io(e.to_string()))?;
    let density = scenario.build_density()?;
    let params = scenario.game_params()?;
    let seed = seed_override.or(scenario.seed);

    let mut outcome = match scenario.mode {
        Mode::SingleTime => run_single(
            scenario,
            &density,
            params.time_coeffs(),
            "single-time",
            out_dir,
        )?,
        Mode::SingleHeight => {
            let coeffs = CostCoeffs::vertical_height(scenario.target_speed)
                .map_err(|e| RunError::Schema(e.to_string()))?;
            run_single(scenario, &density, coeffs, "single-height", out_dir)?
        }
        Mode::SingleInterceptTime => run_intercept_time(scenario, &density, out_dir)?,
        Mode::MultiLloyd => run_lloyd(scenario, &density, params, out_dir, svg_every)?,
        Mode::SimulatePursuit => run_pursuit(scenario, out_dir)?,
        Mode::PartitionOnly => run_partition(scenario, &density, params, out_dir)?,
    };
    outcome.summary.seed = seed;

    if let Some(name) = &scenario.outputs.summary_json {
        let body = serde_json::to_string_pretty(&outcome.summary)
            .map_err(|e| RunError::Io(e.to_string()))?
            + "\n";
        write_artifact(out_dir, name, &body)?;
    }
    Ok(outcome)
}

fn run_single(
    scenario: &Scenario,
    density: &Density,
    coeffs: CostCoeffs,
    mode: &'static str,
    out_dir: &Path,
) -> Result<RunOutcome, RunError> {
    let start = scenario.vehicle_positions()[0];
    let result = optimize_single(
        start,
        &coeffs,
        density,
        scenario.solver.tol,
        scenario.solver.max_iters,
    )?;

    if let Some(name) = &scenario.outputs.trace_csv {
        write_artifact(out_dir, name, &artifacts::descent_trace_csv(&result))?;
    }
    if let Some(name) = &scenario.outputs.svg {
        let part = dominance_partition(&[result.optimum], &scenario.game_params()?)?;
        let svg = artifacts::svg_snapshot(
            scenario.width,
            density,
            &[result.optimum],
            &part,
            &format!("{mode}: optimum placement"),
        );
        write_artifact(out_dir, name, &svg)?;
    }

    let mut summary = Summary::new(mode);
    summary.cost = result.cost;
    summary.iterations = result.iterations;
    summary.critical = Some(result.converged);
    summary.optimum = Some([result.optimum.x, result.optimum.y]);
    summary.grad_norm = Some(result.grad_norm);
    let converged = result.converged;
    Ok(RunOutcome { summary, converged })
}

fn run_intercept_time(
    scenario: &Scenario,
    density: &Density,
    out_dir: &Path,
) -> Result<RunOutcome, RunError> {
    let median = density.median();
    let placement = VehiclePos::new(median, 0.0);
    let v = scenario.target_speed;
    let cost = density.integrate_with_breaks(
        &[Interval {
            lo: 0.0,
            hi: scenario.width,
        }],
        &[median],
        |x| core::intercept_time(placement, x, v).expect("on-axis intercept time is total"),
    );

    if let Some(name) = &scenario.outputs.svg {
        let part = dominance_partition(&[placement], &scenario.game_params()?)?;
        let svg = artifacts::svg_snapshot(
            scenario.width,
            density,
            &[placement],
            &part,
            "single-intercept-time: median placement",
        );
        write_artifact(out_dir, name, &svg)?;
    }

    let mut summary = Summary::new("single-intercept-time");
    summary.cost = cost;
    summary.critical = Some(true);
    summary.optimum = Some([median, 0.0]);
    summary.median = Some(median);
    Ok(RunOutcome {
        summary,
        converged: true,
    })
}

fn run_lloyd(
    scenario: &Scenario,
    density: &Density,
    params: core::GameParams,
    out_dir: &Path,
    svg_every: usize,
) -> Result<RunOutcome, RunError> {
    let c0 = Configuration::new(scenario.vehicle_positions(), params)?;
    let trace = lloyd_descend_with(
        &c0,
        density,
        scenario.solver.max_rounds,
        scenario.solver.tol,
        scenario.solver.substeps,
    )?;

    if let Some(name) = &scenario.outputs.trace_csv {
        write_artifact(out_dir, name, &artifacts::lloyd_trace_csv(&trace))?;
    }
    if let Some(name) = &scenario.outputs.partition_json {
        write_artifact(out_dir, name, &artifacts::lloyd_partitions_json(&trace))?;
    }
    if let Some(name) = &scenario.outputs.svg {
        let k = svg_every.max(1);
        for rec in &trace.rounds {
            let last = rec.round == trace.rounds.len() - 1;
            if rec.round % k == 0 || last {
                let svg = artifacts::svg_snapshot(
                    scenario.width,
                    density,
                    &rec.positions,
                    &rec.partition,
                    &format!("multi-lloyd: round {}", rec.round),
                );
                write_artifact(out_dir, &round_svg_name(name, rec.round), &svg)?;
            }
        }
    }

    let final_cfg = trace.final_configuration();
    let critical = if trace.converged {
        let report = is_critical(&final_cfg, density, scenario.solver.tol.max(1e-6))?;
        report.critical
    } else {
        false
    };
    let unstable = if critical {
        let verdicts = instability_check(&final_cfg, density)?;
        Some(
            verdicts
                .iter()
                .enumerate()
                .filter_map(|(i, v)| {
                    matches!(v, core::StabilityVerdict::Unstable { .. }).then_some(i + 1)
                })
                .collect::<Vec<_>>(),
        )
    } else {
        None
    };

    let mut summary = Summary::new("multi-lloyd");
    summary.cost = trace.final_expected_time();
    summary.iterations = trace.rounds.len() - 1;
    summary.critical = Some(critical);
    summary.unstable_vehicles = unstable;
    let converged = trace.converged;
    Ok(RunOutcome { summary, converged })
}

fn run_pursuit(scenario: &Scenario, out_dir: &Path) -> Result<RunOutcome, RunError> {
    let p0 = scenario.vehicle_positions()[0];
    let x0 = scenario.target_start.expect("validated");
    let strategy = match scenario.strategy.expect("validated") {
        Strategy::Height => PursuitStrategy::Height,
        Strategy::Wall => PursuitStrategy::Wall,
    };
    let trace = simulate_pursuit(
        p0,
        x0,
        scenario.target_speed,
        strategy,
        scenario.solver.dt,
        scenario.solver.capture_radius(),
    )?;
    if !trace.captured {
        return Err(RunError::Numerical(format!(
            "pursuit from ({}, {}) of target at {x0} did not capture within the time cap",
            p0.x, p0.y
        )));
    }

    if let Some(name) = &scenario.outputs.pursuit_csv {
        write_artifact(out_dir, name, &artifacts::pursuit_csv(&trace))?;
    }

    let mut summary = Summary::new("simulate-pursuit");
    summary.cost = trace.capture_time();
    summary.iterations = trace.pursuer.len() - 1;
    summary.captured = Some(trace.captured);
    Ok(RunOutcome {
        summary,
        converged: true,
    })
}

fn run_partition(
    scenario: &Scenario,
    density: &Density,
    params: core::GameParams,
    out_dir: &Path,
) -> Result<RunOutcome, RunError> {
    let positions = scenario.vehicle_positions();
    let part = dominance_partition(&positions, &params)?;
    let cfg = Configuration::new(positions.clone(), params)?;
    let cost = core::expected_time_multi(&cfg, density)?;

    if let Some(name) = &scenario.outputs.partition_json {
        write_artifact(out_dir, name, &artifacts::partition_json(&part))?;
    }
    if let Some(name) = &scenario.outputs.svg {
        let svg =
            artifacts::svg_snapshot(scenario.width, density, &positions, &part, "partition-only");
        write_artifact(out_dir, name, &svg)?;
    }

    let mut summary = Summary::new("partition-only");
    summary.cost = cost;
    Ok(RunOutcome {
        summary,
        converged: true,
    })
}
