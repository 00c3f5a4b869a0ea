//! Seeded property suites covering each module's invariants.
//!
//! Each check runs a fixed number of randomized cases from a deterministic
//! seed and reports the worst measured deviation against its tolerance. The
//! CLI `verify` subcommand serializes these reports; the test suites assert
//! on the same code paths.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::density::{Density, Interval};
use crate::error::{Error, Result};
use crate::lloyd::{
    expected_time_multi, expected_time_multi_direct, is_critical, lloyd_descend_with, lloyd_round,
    region_gradient, Configuration,
};
use crate::partition::{dominance_partition, pairwise_dominance, region_hausdorff};
use crate::pursuit::{
    apollonius, evader_target_height, intercept_time, simulate_pursuit, vertical_height,
    PursuitStrategy,
};
use crate::single_vehicle::{
    constrained_time, expected_cost, expected_cost_gradient, generic_cost, optimize_single,
    CostCoeffs, GameParams, VehiclePos,
};

/// Outcome of one named invariant check.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    /// Worst deviation observed across the check's cases.
    pub measured: f64,
    /// Bound the deviation is held to.
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn measured(name: &'static str, measured: f64, tolerance: f64) -> Self {
        Self {
            name,
            measured,
            tolerance,
            pass: measured.is_finite() && measured <= tolerance,
        }
    }

    fn boolean(name: &'static str, pass: bool) -> Self {
        Self {
            name,
            measured: if pass { 0.0 } else { 1.0 },
            tolerance: 0.0,
            pass,
        }
    }
}

/// All checks for one module.
#[derive(Debug, Clone)]
pub struct ModuleReport {
    pub module: &'static str,
    pub checks: Vec<Check>,
}

impl ModuleReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

pub const MODULES: [&str; 5] = [
    "density",
    "single_vehicle",
    "pursuit_games",
    "partition",
    "lloyd_solver",
];

/// Run the named module's suite (or every suite for "all").
pub fn run(selector: &str, seed: u64) -> Result<Vec<ModuleReport>> {
    match selector {
        "all" => Ok(vec![
            density_checks(seed),
            single_vehicle_checks(seed),
            pursuit_checks(seed),
            partition_checks(seed),
            lloyd_checks(seed),
        ]),
        "density" => Ok(vec![density_checks(seed)]),
        "single_vehicle" => Ok(vec![single_vehicle_checks(seed)]),
        "pursuit_games" => Ok(vec![pursuit_checks(seed)]),
        "partition" => Ok(vec![partition_checks(seed)]),
        "lloyd_solver" => Ok(vec![lloyd_checks(seed)]),
        other => Err(Error::Domain(format!(
            "unknown verify selector '{other}' (expected one of {MODULES:?} or 'all')"
        ))),
    }
}

fn rng_for(seed: u64, salt: u64) -> StdRng {
    StdRng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// A random normalized piecewise-linear density on [0, 1].
fn random_density(rng: &mut StdRng) -> Density {
    let n = rng.gen_range(2..6);
    let mut xs: Vec<f64> = (1..n).map(|_| rng.gen_range(0.05..0.95)).collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup_by(|a, b| (*a - *b).abs() < 0.02);
    let mut points = vec![(0.0, rng.gen_range(0.0..2.0))];
    for x in xs {
        points.push((x, rng.gen_range(0.0..2.0)));
    }
    points.push((1.0, rng.gen_range(0.0..2.0)));
    if points.iter().map(|p| p.1).sum::<f64>() < 0.2 {
        points[0].1 = 1.0;
    }
    Density::piecewise_linear(1.0, &points).expect("random density is valid")
}

fn ramp_density() -> Density {
    Density::piecewise_linear(1.0, &[(0.0, 0.0), (0.25, 2.0), (1.0, 0.0)]).unwrap()
}

/// Distinct positions over the generator with a minimum separation.
fn random_config(rng: &mut StdRng, m: usize, g: &GameParams) -> Vec<VehiclePos> {
    let w = g.width();
    'outer: loop {
        let mut ps = Vec::with_capacity(m);
        for _ in 0..m {
            ps.push(VehiclePos::new(
                rng.gen_range(0.05 * w..0.95 * w),
                rng.gen_range(0.05..0.8),
            ));
        }
        for i in 0..m {
            for j in (i + 1)..m {
                if ps[i].distance(&ps[j]) < 0.05 {
                    continue 'outer;
                }
            }
        }
        return ps;
    }
}

fn random_nonempty_config(rng: &mut StdRng, m: usize, g: &GameParams) -> Vec<VehiclePos> {
    loop {
        let ps = random_config(rng, m, g);
        let part = dominance_partition(&ps, g).expect("distinct by construction");
        if part.regions().iter().all(|r| r.total_length() > 0.03) {
            return ps;
        }
    }
}

// ---------------------------------------------------------------- density

pub fn density_checks(seed: u64) -> ModuleReport {
    let mut rng = rng_for(seed, 1);
    let mut checks = Vec::new();

    // Unit mass for random densities.
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let d = random_density(&mut rng);
        worst = worst.max((d.integrate(|_| 1.0) - 1.0).abs());
    }
    checks.push(Check::measured("normalization", worst, 1e-9));

    // Lipschitz continuity of evaluate.
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let d = random_density(&mut rng);
        let mut lipschitz = 0.0f64;
        let bps: Vec<(f64, f64)> = d.breakpoints().collect();
        for w in bps.windows(2) {
            lipschitz = lipschitz.max(((w[1].1 - w[0].1) / (w[1].0 - w[0].0)).abs());
        }
        for _ in 0..200 {
            let x = rng.gen_range(0.0..0.999);
            let h = rng.gen_range(1e-6..1e-3f64).min(1.0 - x);
            let diff = (d.evaluate(x + h).unwrap() - d.evaluate(x).unwrap()).abs();
            worst = worst.max(diff - lipschitz * h - 1e-12);
        }
    }
    checks.push(Check::measured("evaluate-lipschitz", worst.max(0.0), 0.0));

    // The median minimizes expected absolute distance (1e-4 grid oracle).
    let mut worst = 0.0f64;
    for d in [
        Density::uniform(1.0).unwrap(),
        ramp_density(),
        random_density(&mut rng),
    ] {
        let grid_min = grid_argmin(0.0, 1.0, 1e-4, |x| {
            d.integrate_with_breaks(&[Interval { lo: 0.0, hi: 1.0 }], &[x], |t| (x - t).abs())
        });
        worst = worst.max((grid_min - d.median()).abs());
    }
    checks.push(Check::measured(
        "median-minimizes-abs-distance",
        worst,
        2e-4,
    ));

    // The centroid minimizes expected squared distance (1e-4 grid oracle).
    let mut worst = 0.0f64;
    for d in [Density::uniform(1.0).unwrap(), ramp_density()] {
        let grid_min = grid_argmin(0.0, 1.0, 1e-4, |x| d.integrate(|t| (x - t) * (x - t)));
        worst = worst.max((grid_min - d.centroid_and_spread().0).abs());
    }
    checks.push(Check::measured(
        "centroid-minimizes-square-distance",
        worst,
        2e-4,
    ));

    ModuleReport {
        module: "density",
        checks,
    }
}

fn grid_argmin(lo: f64, hi: f64, step: f64, f: impl Fn(f64) -> f64) -> f64 {
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

// --------------------------------------------------------- single_vehicle

pub fn single_vehicle_checks(seed: u64) -> ModuleReport {
    let mut rng = rng_for(seed, 2);
    let mut checks = Vec::new();
    let d = Density::uniform(1.0).unwrap();
    let nd = ramp_density();

    // Midpoint convexity over 200 random pairs.
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..200 {
        let k = CostCoeffs::constrained_time(rng.gen_range(0.1..0.9)).unwrap();
        let dd = if rng.gen_bool(0.5) { &d } else { &nd };
        let p1 = VehiclePos::new(rng.gen_range(0.001..0.999), rng.gen_range(0.01..2.0));
        let p2 = VehiclePos::new(rng.gen_range(0.001..0.999), rng.gen_range(0.01..2.0));
        let mid = VehiclePos::new(0.5 * (p1.x + p2.x), 0.5 * (p1.y + p2.y));
        let gap = expected_cost(mid, &k, dd)
            - 0.5 * (expected_cost(p1, &k, dd) + expected_cost(p2, &k, dd));
        worst = worst.max(gap);
    }
    checks.push(Check::measured("midpoint-convexity", worst.max(0.0), 1e-9));

    // Analytic gradient vs central finite differences at 100 interior points.
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let k = CostCoeffs::constrained_time(rng.gen_range(0.1..0.9)).unwrap();
        let dd = if rng.gen_bool(0.5) { &d } else { &nd };
        let p = VehiclePos::new(rng.gen_range(0.05..0.95), rng.gen_range(0.05..1.5));
        worst = worst.max(gradient_fd_relative_error(p, &k, dd));
    }
    checks.push(Check::measured("gradient-finite-difference", worst, 1e-6));

    // Monotone trace and confinement of descent iterates.
    let mut monotone_worst = f64::NEG_INFINITY;
    let mut confined = true;
    for _ in 0..3 {
        let k = CostCoeffs::constrained_time(rng.gen_range(0.2..0.8)).unwrap();
        let start = VehiclePos::new(rng.gen_range(0.0..1.0), rng.gen_range(0.1..1.5));
        let r = optimize_single(start, &k, &d, 1e-8, 10_000).expect("valid start");
        for w in r.trace.windows(2) {
            monotone_worst = monotone_worst.max(w[1].1 - w[0].1);
        }
        for (p, _) in &r.trace {
            confined &= p.x >= 0.0 && p.x <= 1.0 + 1e-9 && p.y > 0.0;
        }
    }
    checks.push(Check::measured(
        "descent-monotonicity",
        monotone_worst.max(0.0),
        1e-12,
    ));
    checks.push(Check::boolean("descent-confinement", confined));

    // Two starts agree on the optimum.
    let k = CostCoeffs::constrained_time(0.5).unwrap();
    let a = optimize_single(VehiclePos::new(0.1, 0.8), &k, &d, 1e-9, 20_000).unwrap();
    let b = optimize_single(VehiclePos::new(0.9, 0.2), &k, &d, 1e-9, 20_000).unwrap();
    checks.push(Check::measured(
        "two-start-agreement",
        a.optimum.distance(&b.optimum),
        1e-4,
    ));

    // Travel time is the generic cost under the coefficient map, exactly.
    let g = GameParams::new(1.0, 0.37).unwrap();
    let k = g.time_coeffs();
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let p = VehiclePos::new(rng.gen_range(-0.5..1.5), rng.gen_range(0.0..2.0));
        let x = rng.gen_range(0.0..1.0);
        worst = worst.max((constrained_time(p, x, &g) - generic_cost(p, x, &k)).abs());
    }
    checks.push(Check::measured("instance-consistency", worst, 0.0));

    ModuleReport {
        module: "single_vehicle",
        checks,
    }
}

/// Relative error of the analytic gradient against central differences.
fn gradient_fd_relative_error(p: VehiclePos, k: &CostCoeffs, d: &Density) -> f64 {
    let h = 1e-6;
    let (gx, gy) = expected_cost_gradient(p, k, d).expect("Y > 0");
    let fdx = (expected_cost(VehiclePos::new(p.x + h, p.y), k, d)
        - expected_cost(VehiclePos::new(p.x - h, p.y), k, d))
        / (2.0 * h);
    let fdy = (expected_cost(VehiclePos::new(p.x, p.y + h), k, d)
        - expected_cost(VehiclePos::new(p.x, p.y - h), k, d))
        / (2.0 * h);
    let scale = (gx * gx + gy * gy).sqrt().max(1e-12);
    ((gx - fdx).powi(2) + (gy - fdy).powi(2)).sqrt() / scale
}

// ----------------------------------------------------------- pursuit_games

pub fn pursuit_checks(seed: u64) -> ModuleReport {
    let mut rng = rng_for(seed, 3);
    let mut checks = Vec::new();

    // Defining identity at 64 sampled circle points.
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let p = VehiclePos::new(rng.gen_range(-0.5..1.5), rng.gen_range(0.0..2.0));
        let x = rng.gen_range(0.0..1.0);
        let v = rng.gen_range(0.1..0.9);
        if ((p.x - x).powi(2) + p.y * p.y).sqrt() < 1e-3 {
            continue;
        }
        let c = apollonius(p, x, v).unwrap();
        for kk in 0..64 {
            let ang = 2.0 * std::f64::consts::PI * kk as f64 / 64.0;
            let (wx, wy) = (
                c.center.x + c.radius * ang.cos(),
                c.center.y + c.radius * ang.sin(),
            );
            let de = ((wx - x).powi(2) + wy * wy).sqrt();
            let dp = ((wx - p.x).powi(2) + (wy - p.y).powi(2)).sqrt();
            worst = worst.max((de - v * dp).abs());
        }
    }
    checks.push(Check::measured("apollonius-identity", worst, 1e-9));

    // Height formula equals the top of the circle.
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let p = VehiclePos::new(rng.gen_range(-0.5..1.5), rng.gen_range(0.001..2.0));
        let x = rng.gen_range(0.0..1.0);
        let v = rng.gen_range(0.1..0.9);
        let h = vertical_height(p, x, v).unwrap();
        let t = evader_target_height(p, x, v).unwrap();
        worst = worst.max((h - t.y).abs());
    }
    checks.push(Check::measured("height-consistency", worst, 1e-12));

    // The height payoff is exactly the generic cost under its coefficients.
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let p = VehiclePos::new(rng.gen_range(-0.5..1.5), rng.gen_range(0.0..2.0));
        let x = rng.gen_range(0.0..1.0);
        let v = rng.gen_range(0.1..0.9);
        let k = CostCoeffs::vertical_height(v).unwrap();
        worst = worst.max((vertical_height(p, x, v).unwrap() - generic_cost(p, x, &k)).abs());
    }
    checks.push(Check::measured("height-eq3-form", worst, 0.0));

    // Intermediate circles stay inside the initial one during pursuit.
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..5 {
        let p = VehiclePos::new(rng.gen_range(0.0..1.0), rng.gen_range(0.3..1.5));
        let x = rng.gen_range(0.0..1.0);
        let v = rng.gen_range(0.2..0.8);
        if ((p.x - x).powi(2) + p.y * p.y).sqrt() < 0.1 {
            continue;
        }
        let c0 = apollonius(p, x, v).unwrap();
        let dt = 1e-3;
        let tr = simulate_pursuit(p, x, v, PursuitStrategy::Height, dt, 2.0 * dt).unwrap();
        let steps = tr.pursuer.len();
        for s in 1..=10 {
            let idx = (s * (steps - 1)) / 11;
            let (pp, ee) = (tr.pursuer[idx], tr.evader[idx]);
            let sep = pp.distance(&ee);
            if sep < 10.0 * dt {
                break;
            }
            let s_fac = 1.0 - v * v;
            let center_x = (ee.x - v * v * pp.x) / s_fac;
            let center_y = (ee.y - v * v * pp.y) / s_fac;
            let radius = v * sep / s_fac;
            let center_dist =
                ((center_x - c0.center.x).powi(2) + (center_y - c0.center.y).powi(2)).sqrt();
            worst = worst.max(center_dist - (c0.radius - radius));
        }
    }
    checks.push(Check::measured("shrinking-circle", worst.max(0.0), 1e-6));

    // Discrete pursuit reproduces the closed-form height and time payoffs.
    let dt = 1e-3;
    let mut worst_h = 0.0f64;
    let mut worst_t = 0.0f64;
    for _ in 0..5 {
        let p = VehiclePos::new(rng.gen_range(0.0..1.0), rng.gen_range(0.2..1.2));
        let x = rng.gen_range(0.0..1.0);
        let v = rng.gen_range(0.2..0.8);
        if ((p.x - x).powi(2) + p.y * p.y).sqrt() < 0.1 {
            continue;
        }
        let tr = simulate_pursuit(p, x, v, PursuitStrategy::Height, dt, 2.0 * dt).unwrap();
        let cap = tr.capture_point.expect("must capture");
        worst_h = worst_h.max((cap.y - vertical_height(p, x, v).unwrap()).abs());
        let tr = simulate_pursuit(p, x, v, PursuitStrategy::Wall, dt, 2.0 * dt).unwrap();
        worst_t = worst_t.max((tr.capture_time() - intercept_time(p, x, v).unwrap()).abs());
    }
    checks.push(Check::measured("sim-vs-height", worst_h, 5.0 * dt));
    checks.push(Check::measured("sim-vs-intercept-time", worst_t, 5.0 * dt));

    // Expected height has a unique optimum: two starts agree.
    let d = Density::uniform(1.0).unwrap();
    let k = CostCoeffs::vertical_height(0.5).unwrap();
    let a = optimize_single(VehiclePos::new(0.15, 0.9), &k, &d, 1e-9, 20_000).unwrap();
    let b = optimize_single(VehiclePos::new(0.85, 0.15), &k, &d, 1e-9, 20_000).unwrap();
    checks.push(Check::measured(
        "expected-height-two-start",
        a.optimum.distance(&b.optimum),
        1e-4,
    ));

    // On-axis expected intercept time is minimized at the median.
    let mut worst = 0.0f64;
    for d in [Density::uniform(1.0).unwrap(), ramp_density()] {
        let v = 0.5;
        let grid_min = grid_argmin(0.0, 1.0, 1e-3, |x0| {
            d.integrate_with_breaks(&[Interval { lo: 0.0, hi: 1.0 }], &[x0], |t| {
                intercept_time(VehiclePos::new(x0, 0.0), t, v).unwrap()
            })
        });
        worst = worst.max((grid_min - d.median()).abs());
    }
    checks.push(Check::measured("median-optimality", worst, 2e-3));

    ModuleReport {
        module: "pursuit_games",
        checks,
    }
}

// -------------------------------------------------------------- partition

pub fn partition_checks(seed: u64) -> ModuleReport {
    let mut rng = rng_for(seed, 4);
    let mut checks = Vec::new();

    // Coverage and overlap over 100 seeded configurations.
    let mut worst_cover = 0.0f64;
    let mut worst_overlap = 0.0f64;
    let mut worst_opt = f64::NEG_INFINITY;
    for _ in 0..100 {
        let m = rng.gen_range(2..=5);
        let g = GameParams::new(1.0, rng.gen_range(0.15..0.85)).unwrap();
        let ps = random_config(&mut rng, m, &g);
        let part = dominance_partition(&ps, &g).unwrap();
        let total: f64 = part.regions().iter().map(|r| r.total_length()).sum();
        worst_cover = worst_cover.max((total - 1.0).abs());
        for i in 0..m {
            for j in (i + 1)..m {
                let inter = part.region(i).intersect(part.region(j), 1.0);
                worst_overlap = worst_overlap.max(inter.total_length());
            }
        }
        // Pointwise optimality at 100 sampled abscissae per configuration.
        for _ in 0..100 {
            let x = rng.gen_range(0.0..1.0);
            let min_t = ps
                .iter()
                .map(|p| constrained_time(*p, x, &g))
                .fold(f64::INFINITY, f64::min);
            for (i, r) in part.regions().iter().enumerate() {
                if r.contains(x) {
                    worst_opt = worst_opt.max(constrained_time(ps[i], x, &g) - min_t);
                }
            }
        }
    }
    checks.push(Check::measured("coverage", worst_cover, 1e-9));
    checks.push(Check::measured("overlap", worst_overlap, 1e-9));
    checks.push(Check::measured(
        "pointwise-optimality",
        worst_opt.max(0.0),
        1e-9,
    ));

    // Pairwise soundness: the defining inequality holds on the region.
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..20 {
        let g = GameParams::new(1.0, rng.gen_range(0.15..0.85)).unwrap();
        let ps = random_config(&mut rng, 2, &g);
        let u = pairwise_dominance(ps[0], ps[1], &g).unwrap();
        for _ in 0..50 {
            let x = rng.gen_range(0.0..1.0);
            if u.contains(x) {
                worst = worst.max(constrained_time(ps[0], x, &g) - constrained_time(ps[1], x, &g));
            }
        }
    }
    checks.push(Check::measured("pairwise-soundness", worst.max(0.0), 1e-9));

    // Hausdorff distance decreases as the perturbation shrinks.
    let g = GameParams::new(1.0, 0.5).unwrap();
    let ps = vec![
        VehiclePos::new(0.25, 0.3),
        VehiclePos::new(0.6, 0.4),
        VehiclePos::new(0.85, 0.25),
    ];
    let base = dominance_partition(&ps, &g).unwrap();
    let mut dists = Vec::new();
    for delta in [1e-2, 1e-3, 1e-4] {
        let mut moved = ps.clone();
        moved[1] = VehiclePos::new(moved[1].x + delta, moved[1].y - delta);
        let part = dominance_partition(&moved, &g).unwrap();
        let worst: f64 = (0..3)
            .map(|i| region_hausdorff(base.region(i), part.region(i)))
            .fold(0.0, f64::max);
        dists.push(worst);
    }
    let monotone = dists[0] >= dists[1] && dists[1] >= dists[2] && dists[2] < 1e-2;
    checks.push(Check::boolean("continuity-monotone", monotone));

    // A vehicle far above the rest gets an empty region.
    let ps = vec![
        VehiclePos::new(0.3, 0.2),
        VehiclePos::new(0.7, 0.25),
        VehiclePos::new(0.5, 8.0),
    ];
    let part = dominance_partition(&ps, &g).unwrap();
    checks.push(Check::boolean(
        "far-vehicle-empty-region",
        part.region(2).is_empty(),
    ));

    ModuleReport {
        module: "partition",
        checks,
    }
}

// ------------------------------------------------------------ lloyd_solver

pub fn lloyd_checks(seed: u64) -> ModuleReport {
    let mut rng = rng_for(seed, 5);
    let mut checks = Vec::new();
    let uniform = Density::uniform(1.0).unwrap();

    // Partition route equals direct min-quadrature on 50 configurations.
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let m = rng.gen_range(2..=4);
        let g = GameParams::new(1.0, rng.gen_range(0.2..0.8)).unwrap();
        let ps = random_config(&mut rng, m, &g);
        let d = if rng.gen_bool(0.5) {
            uniform.clone()
        } else {
            ramp_density()
        };
        let c = Configuration::new(ps, g).unwrap();
        let a = expected_time_multi(&c, &d).unwrap();
        let b = expected_time_multi_direct(&c, &d).unwrap();
        worst = worst.max((a - b).abs());
    }
    checks.push(Check::measured("partition-vs-direct", worst, 1e-8));

    // Region gradient vs central differences of the total expected time.
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let m = rng.gen_range(2..=3);
        let g = GameParams::new(1.0, rng.gen_range(0.25..0.75)).unwrap();
        let ps = random_nonempty_config(&mut rng, m, &g);
        let d = if rng.gen_bool(0.5) {
            uniform.clone()
        } else {
            ramp_density()
        };
        let c = Configuration::new(ps, g).unwrap();
        let i = rng.gen_range(0..m);
        worst = worst.max(region_gradient_fd_relative_error(&c, i, &d));
    }
    checks.push(Check::measured(
        "region-gradient-finite-difference",
        worst,
        1e-5,
    ));

    // Descent scenarios: monotone expected time, confinement, saturation,
    // criticality at convergence.
    let mut worst_mono = f64::NEG_INFINITY;
    let mut confined = true;
    let mut saturation_ok = true;
    let mut critical_ok = true;
    for s in 0..3 {
        let g = GameParams::new(1.0, [0.3, 0.5, 0.7][s]).unwrap();
        let ps = random_nonempty_config(&mut rng, 2 + s % 2, &g);
        let d = if s == 1 {
            ramp_density()
        } else {
            uniform.clone()
        };
        let c = Configuration::new(ps, g).unwrap();
        let trace = lloyd_descend_with(&c, &d, 300, 1e-5, 32).unwrap();
        for w in trace.rounds.windows(2) {
            worst_mono = worst_mono.max(w[1].expected_time - w[0].expected_time);
            for (a, b) in w[0].positions.iter().zip(&w[1].positions) {
                saturation_ok &= a.distance(b) <= 1.0 + 1e-9;
            }
        }
        for rec in &trace.rounds {
            for p in &rec.positions {
                confined &= (0.0..=1.0).contains(&p.x) && p.y >= 0.0;
            }
        }
        if trace.converged {
            critical_ok &= is_critical(&trace.final_configuration(), &d, 1e-5)
                .unwrap()
                .critical;
        }
    }
    checks.push(Check::measured(
        "descent-monotonicity",
        worst_mono.max(0.0),
        1e-10,
    ));
    checks.push(Check::boolean("descent-confinement", confined));
    checks.push(Check::boolean("saturation-bound", saturation_ok));
    checks.push(Check::boolean("criticality-at-convergence", critical_ok));

    // Empty regions recover within ceil(Y) rounds.
    let g = GameParams::new(1.0, 0.5).unwrap();
    let c = Configuration::new(
        vec![
            VehiclePos::new(0.35, 0.2),
            VehiclePos::new(0.65, 0.25),
            VehiclePos::new(0.5, 2.7),
        ],
        g,
    )
    .unwrap();
    let mut cc = c;
    let mut recovered_in = None;
    for round in 1..=4usize {
        cc = lloyd_round(&cc, &uniform, 16).unwrap();
        let part = dominance_partition(cc.positions(), cc.params()).unwrap();
        if !part.region(2).is_empty() {
            recovered_in = Some(round);
            break;
        }
    }
    checks.push(Check::boolean(
        "empty-region-recovery",
        recovered_in.map(|r| r <= 3).unwrap_or(false),
    ));

    ModuleReport {
        module: "lloyd_solver",
        checks,
    }
}

/// Relative error of the region gradient against central differences of the
/// full expected time (repartitioned at the perturbed positions).
fn region_gradient_fd_relative_error(c: &Configuration, i: usize, d: &Density) -> f64 {
    let h = 1e-6;
    let (gx, gy) = region_gradient(c, i, d).expect("non-empty by construction");
    let eval = |dx: f64, dy: f64| -> f64 {
        let mut ps = c.positions().to_vec();
        ps[i] = VehiclePos::new(ps[i].x + dx, ps[i].y + dy);
        let cc = Configuration::new(ps, *c.params()).expect("still distinct");
        expected_time_multi(&cc, d).expect("valid")
    };
    let fdx = (eval(h, 0.0) - eval(-h, 0.0)) / (2.0 * h);
    let fdy = (eval(0.0, h) - eval(0.0, -h)) / (2.0 * h);
    let scale = (gx * gx + gy * gy).sqrt().max(1e-9);
    ((gx - fdx).powi(2) + (gy - fdy).powi(2)).sqrt() / scale
}
