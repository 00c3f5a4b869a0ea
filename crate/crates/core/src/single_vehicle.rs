//! Single-vehicle expected cost, analytic gradients, and gradient descent.
//!
//! The whole cost family has the form `a*sqrt(b(X-x)² + Y²) - cY` with
//! `a > c`, which covers both the constrained travel time and the vertical
//! capture height. Expected cost over the arrival density is strictly convex
//! with a unique interior minimizer, so plain gradient descent with an
//! Armijo backtracking line search converges from any start with Y > 0.

use crate::density::{Density, Interval};
use crate::error::{Error, Result};

/// Armijo sufficient-decrease constant.
const ARMIJO_C1: f64 = 1e-4;
/// Line-search shrink factor.
const ARMIJO_SHRINK: f64 = 0.5;
/// Initial trial step.
const INITIAL_STEP: f64 = 1.0;
/// Steps smaller than this abort the line search.
const MIN_STEP: f64 = 1e-18;

/// Planar vehicle position; the decision variable everywhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VehiclePos {
    pub x: f64,
    pub y: f64,
}

impl VehiclePos {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &VehiclePos) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }
}

/// Generator width and normalized target speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameParams {
    width: f64,
    target_speed: f64,
}

impl GameParams {
    pub fn new(width: f64, target_speed: f64) -> Result<Self> {
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::Domain(format!(
                "width must be positive, got {width}"
            )));
        }
        if !(target_speed.is_finite() && target_speed > 0.0 && target_speed < 1.0) {
            return Err(Error::Domain(format!(
                "target_speed must lie strictly in (0, 1), got {target_speed}"
            )));
        }
        Ok(Self {
            width,
            target_speed,
        })
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn target_speed(&self) -> f64 {
        self.target_speed
    }

    /// Coefficients of the constrained travel time.
    pub fn time_coeffs(&self) -> CostCoeffs {
        CostCoeffs::constrained_time(self.target_speed).expect("0 < v < 1 validated")
    }
}

/// Coefficients `(a, b, c)` of the generic cost `a*sqrt(b(X-x)² + Y²) - cY`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl CostCoeffs {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::Domain("cost coefficients must be finite".into()));
        }
        if a <= 0.0 || b <= 0.0 || c < 0.0 || a <= c {
            return Err(Error::Domain(format!(
                "cost coefficients require a > 0, b > 0, c >= 0, a > c; got a={a}, b={b}, c={c}"
            )));
        }
        Ok(Self { a, b, c })
    }

    /// Travel time against a target climbing at speed `v`:
    /// a = 1/(1-v²), b = 1-v², c = v/(1-v²). Valid for v in [0, 1);
    /// v = 0 reduces to Euclidean distance.
    pub fn constrained_time(v: f64) -> Result<Self> {
        if !(v.is_finite() && (0.0..1.0).contains(&v)) {
            return Err(Error::Domain(format!(
                "constrained-time coefficients need v in [0, 1), got {v}"
            )));
        }
        let s = 1.0 - v * v;
        Self::new(1.0 / s, s, v / s)
    }

    /// Capture height against an evading target of speed `v`:
    /// a = v/(1-v²), b = 1, c = v²/(1-v²). Requires v in (0, 1).
    pub fn vertical_height(v: f64) -> Result<Self> {
        if !(v.is_finite() && v > 0.0 && v < 1.0) {
            return Err(Error::Domain(format!(
                "vertical-height coefficients need v in (0, 1), got {v}"
            )));
        }
        let s = 1.0 - v * v;
        Self::new(v / s, 1.0, v * v / s)
    }
}

/// Result of a gradient-descent run.
#[derive(Debug, Clone)]
pub struct DescentResult {
    pub optimum: VehiclePos,
    pub cost: f64,
    pub grad_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Per-iteration (position, cost), including the start.
    pub trace: Vec<(VehiclePos, f64)>,
}

/// Time for a unit-speed vehicle at `p` to intercept a target from `(x, 0)`
/// climbing at the game's target speed.
pub fn constrained_time(p: VehiclePos, x: f64, g: &GameParams) -> f64 {
    generic_cost(p, x, &g.time_coeffs())
}

/// The generic cost `a*sqrt(b(X-x)² + Y²) - cY`.
pub fn generic_cost(p: VehiclePos, x: f64, k: &CostCoeffs) -> f64 {
    k.a * (k.b * (p.x - x) * (p.x - x) + p.y * p.y).sqrt() - k.c * p.y
}

/// Expected cost of placement `p` over the arrival density.
pub fn expected_cost(p: VehiclePos, k: &CostCoeffs, d: &Density) -> f64 {
    expected_cost_over(
        p,
        k,
        d,
        &[Interval {
            lo: 0.0,
            hi: d.width(),
        }],
    )
}

/// Expected cost restricted to a union of subintervals of the generator.
pub(crate) fn expected_cost_over(
    p: VehiclePos,
    k: &CostCoeffs,
    d: &Density,
    ivs: &[Interval],
) -> f64 {
    // At Y = 0 the integrand has a kink at x = X; split the panel there.
    let breaks: &[f64] = &[p.x];
    if p.y == 0.0 {
        d.integrate_with_breaks(ivs, breaks, |x| generic_cost(p, x, k))
    } else {
        d.integrate_intervals(ivs, |x| generic_cost(p, x, k))
    }
}

/// Analytic gradient of the expected cost, valid for Y > 0.
pub fn expected_cost_gradient(p: VehiclePos, k: &CostCoeffs, d: &Density) -> Result<(f64, f64)> {
    if p.y <= 0.0 {
        return Err(Error::GradientSingularity { x: p.x });
    }
    Ok(cost_gradient_over(
        p,
        k,
        d,
        &[Interval {
            lo: 0.0,
            hi: d.width(),
        }],
    ))
}

/// Gradient of the expected cost restricted to `ivs`.
///
/// Total for Y >= 0: at Y = 0 the `aY∫φ/sqrt` term is taken at its limit 0,
/// and the X-integrand (a jump at x = X) gets an explicit panel break.
pub(crate) fn cost_gradient_over(
    p: VehiclePos,
    k: &CostCoeffs,
    d: &Density,
    ivs: &[Interval],
) -> (f64, f64) {
    let mass = d.integrate_intervals(ivs, |_| 1.0);
    cost_gradient_over_with_mass(p, k, d, ivs, mass)
}

/// [`cost_gradient_over`] with the region's probability mass precomputed;
/// the mass is constant while a region stays frozen.
pub(crate) fn cost_gradient_over_with_mass(
    p: VehiclePos,
    k: &CostCoeffs,
    d: &Density,
    ivs: &[Interval],
    mass: f64,
) -> (f64, f64) {
    let (a, b, c) = (k.a, k.b, k.c);
    let breaks: &[f64] = &[p.x];
    let dx = if p.y == 0.0 {
        d.integrate_with_breaks(ivs, breaks, |x| {
            let dxx = p.x - x;
            if dxx == 0.0 {
                0.0
            } else {
                a * b * dxx / (b * dxx * dxx).sqrt()
            }
        })
    } else {
        d.integrate_intervals(ivs, |x| {
            let dxx = p.x - x;
            a * b * dxx / (b * dxx * dxx + p.y * p.y).sqrt()
        })
    };
    let dy = if p.y == 0.0 {
        -c * mass
    } else {
        a * p.y
            * d.integrate_intervals(ivs, |x| {
                let dxx = p.x - x;
                1.0 / (b * dxx * dxx + p.y * p.y).sqrt()
            })
            - c * mass
    };
    (dx, dy)
}

/// Gradient descent on the expected cost from `start`, stopping when the
/// gradient 2-norm drops below `tol` or after `max_iter` iterations.
pub fn optimize_single(
    start: VehiclePos,
    k: &CostCoeffs,
    d: &Density,
    tol: f64,
    max_iter: usize,
) -> Result<DescentResult> {
    if !(start.x.is_finite() && start.y.is_finite() && start.y > 0.0) {
        return Err(Error::Domain(format!(
            "descent start must have Y > 0, got ({}, {})",
            start.x, start.y
        )));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::Domain(format!("tol must be positive, got {tol}")));
    }
    Ok(descend_over(
        start,
        k,
        d,
        &[Interval {
            lo: 0.0,
            hi: d.width(),
        }],
        tol,
        max_iter,
    ))
}

/// Armijo backtracking descent of the expected cost restricted to `ivs`.
///
/// Candidates with Y <= 0, or whose X leaves the interval hull of the
/// current X and [0, W], are rejected so iterates honor the confinement
/// the continuous flow enjoys.
pub(crate) fn descend_over(
    start: VehiclePos,
    k: &CostCoeffs,
    d: &Density,
    ivs: &[Interval],
    tol: f64,
    max_iter: usize,
) -> DescentResult {
    let w = d.width();
    let mut p = start;
    let mut cost = expected_cost_over(p, k, d, ivs);
    let mut trace = vec![(p, cost)];
    let mut grad_norm = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;

    while iterations < max_iter {
        let (gx, gy) = cost_gradient_over(p, k, d, ivs);
        grad_norm = (gx * gx + gy * gy).sqrt();
        if grad_norm < tol {
            converged = true;
            break;
        }
        let (x_lo, x_hi) = (p.x.min(0.0), p.x.max(w));
        let mut step = INITIAL_STEP;
        let mut accepted = false;
        while step >= MIN_STEP {
            let cand = VehiclePos::new(p.x - step * gx, p.y - step * gy);
            if cand.y > 0.0 && cand.x >= x_lo && cand.x <= x_hi {
                let cand_cost = expected_cost_over(cand, k, d, ivs);
                if cand_cost <= cost - ARMIJO_C1 * step * grad_norm * grad_norm {
                    p = cand;
                    cost = cand_cost;
                    accepted = true;
                    break;
                }
            }
            step *= ARMIJO_SHRINK;
        }
        iterations += 1;
        if !accepted {
            // No admissible decrease at the smallest step: numerically stationary.
            break;
        }
        trace.push((p, cost));
    }
    if !converged {
        // Report the gradient at the returned iterate, not the last tested one.
        let (gx, gy) = cost_gradient_over(p, k, d, ivs);
        grad_norm = (gx * gx + gy * gy).sqrt();
        converged = grad_norm < tol;
    }

    DescentResult {
        optimum: p,
        cost,
        grad_norm,
        iterations,
        converged,
        trace,
    }
}

/// Placement minimizing expected time in the equal-speed limit: the centroid
/// of the arrival density paired with its spread.
pub fn equal_speed_optimum(d: &Density) -> VehiclePos {
    let (cx, sy) = d.centroid_and_spread();
    VehiclePos::new(cx, sy)
}
