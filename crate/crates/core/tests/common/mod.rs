//! Shared oracle helpers for the integration tests: closed forms, Riemann
//! sums, grid searches, and dense scans, all independent of the quadrature
//! and solver code paths they check.

#![allow(dead_code)]

use intercept_core::{CostCoeffs, Density, VehiclePos};

/// Midpoint Riemann sum of `f(x) * phi(x)` over `[0, W]` with `n` cells.
pub fn riemann(d: &Density, n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let w = d.width();
    let h = w / n as f64;
    (0..n)
        .map(|k| {
            let x = (k as f64 + 0.5) * h;
            f(x) * d.evaluate(x).unwrap()
        })
        .sum::<f64>()
        * h
}

/// Antiderivative of sqrt(u² + y²).
fn sqrt_quad_primitive(u: f64, y: f64) -> f64 {
    if y == 0.0 {
        return 0.5 * u * u.abs();
    }
    0.5 * (u * (u * u + y * y).sqrt() + y * y * (u / y.abs()).asinh())
}

/// Closed-form expected generic cost for the uniform density on [0, 1]:
/// (a/sqrt(b)) ∫ sqrt(u² + Y²) du - cY with u = sqrt(b)(x - X).
pub fn uniform_expected_cost_closed_form(p: VehiclePos, k: &CostCoeffs) -> f64 {
    let sb = k.b.sqrt();
    let u0 = sb * (0.0 - p.x);
    let u1 = sb * (1.0 - p.x);
    k.a / sb * (sqrt_quad_primitive(u1, p.y) - sqrt_quad_primitive(u0, p.y)) - k.c * p.y
}

/// Argmin of `f` over a regular grid.
pub fn grid_argmin_1d(lo: f64, hi: f64, step: f64, f: impl Fn(f64) -> f64) -> f64 {
    let n = ((hi - lo) / step).round() as usize;
    let mut best = (f(lo), lo);
    for k in 1..=n {
        let x = lo + k as f64 * step;
        let v = f(x);
        if v < best.0 {
            best = (v, x);
        }
    }
    best.1
}

/// Two-stage brute-force 2-D minimizer: a full pass at `coarse` resolution,
/// then a `fine` pass on the surrounding window. Exact to `fine` for convex
/// objectives.
pub fn grid_argmin_2d(
    x_range: (f64, f64),
    y_range: (f64, f64),
    coarse: f64,
    fine: f64,
    f: impl Fn(f64, f64) -> f64,
) -> (f64, f64) {
    let scan = |x_lo: f64, x_hi: f64, y_lo: f64, y_hi: f64, step: f64| -> (f64, f64) {
        let nx = ((x_hi - x_lo) / step).round() as usize;
        let ny = ((y_hi - y_lo) / step).round() as usize;
        let mut best = (f64::INFINITY, x_lo, y_lo);
        for i in 0..=nx {
            let x = x_lo + i as f64 * step;
            for j in 0..=ny {
                let y = y_lo + j as f64 * step;
                let v = f(x, y);
                if v < best.0 {
                    best = (v, x, y);
                }
            }
        }
        (best.1, best.2)
    };
    let (cx, cy) = scan(x_range.0, x_range.1, y_range.0, y_range.1, coarse);
    let window = 2.0 * coarse;
    scan(
        (cx - window).max(x_range.0),
        (cx + window).min(x_range.1),
        (cy - window).max(y_range.0),
        (cy + window).min(y_range.1),
        fine,
    )
}

/// The non-uniform arrival density of the reference scenarios: linear rise
/// to 2/W at W/4, linear fall to 0 at W.
pub fn ramp_density(width: f64) -> Density {
    Density::piecewise_linear(
        width,
        &[(0.0, 0.0), (width / 4.0, 2.0 / width), (width, 0.0)],
    )
    .unwrap()
}
