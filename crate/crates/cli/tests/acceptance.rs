//! Acceptance suite: every release gate runs here, one test per criterion,
//! each printing a `criterion N (...): PASS` line (visible with
//! `cargo test -p intercept-cli --test acceptance -- --nocapture`).

use std::time::Instant;

use intercept_core::{
    apollonius, constrained_time, dominance_partition, expected_cost, expected_cost_gradient,
    expected_time_multi, instability_check, intercept_time, is_critical, lloyd_descend,
    optimize_single, region_gradient, simulate_pursuit, vertical_height, Configuration, CostCoeffs,
    Density, GameParams, Interval, PursuitStrategy, StabilityVerdict, VehiclePos,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn uniform() -> Density {
    Density::uniform(1.0).unwrap()
}

fn ramp() -> Density {
    Density::piecewise_linear(1.0, &[(0.0, 0.0), (0.25, 2.0), (1.0, 0.0)]).unwrap()
}

fn pass(n: usize, name: &str) {
    println!("criterion {n} ({name}): PASS");
}

/// Criterion 1: analytic gradients (single-vehicle and per-region) match
/// central finite differences at 100 seeded interior configurations each,
/// to 1e-5 relative, in under 10 seconds.
#[test]
fn criterion_1_gradient_fidelity() {
    let start = Instant::now();
    let h = 1e-6;
    let densities = [uniform(), ramp()];
    let mut rng = ChaCha8Rng::seed_from_u64(101);

    for trial in 0..100 {
        let d = &densities[trial % 2];
        let k = CostCoeffs::constrained_time(rng.gen_range(0.1..0.9)).unwrap();
        let p = VehiclePos::new(rng.gen_range(0.05..0.95), rng.gen_range(0.05..1.5));
        let (gx, gy) = expected_cost_gradient(p, &k, d).unwrap();
        let fdx = (expected_cost(VehiclePos::new(p.x + h, p.y), &k, d)
            - expected_cost(VehiclePos::new(p.x - h, p.y), &k, d))
            / (2.0 * h);
        let fdy = (expected_cost(VehiclePos::new(p.x, p.y + h), &k, d)
            - expected_cost(VehiclePos::new(p.x, p.y - h), &k, d))
            / (2.0 * h);
        let scale = (gx * gx + gy * gy).sqrt().max(1e-12);
        let err = ((gx - fdx).powi(2) + (gy - fdy).powi(2)).sqrt() / scale;
        assert!(
            err <= 1e-5,
            "single-vehicle gradient error {err} at trial {trial}"
        );
    }

    let mut checked = 0;
    while checked < 100 {
        let m = rng.gen_range(2..=3usize);
        let g = GameParams::new(1.0, rng.gen_range(0.25..0.75)).unwrap();
        let mut ps: Vec<VehiclePos> = Vec::new();
        while ps.len() < m {
            let cand = VehiclePos::new(rng.gen_range(0.1..0.9), rng.gen_range(0.08..0.6));
            if ps.iter().all(|p| p.distance(&cand) > 0.08) {
                ps.push(cand);
            }
        }
        let part = dominance_partition(&ps, &g).unwrap();
        if part.regions().iter().any(|r| r.total_length() < 0.05) {
            continue;
        }
        let d = &densities[checked % 2];
        let c = Configuration::new(ps.clone(), g).unwrap();
        let i = rng.gen_range(0..m);
        let (gx, gy) = region_gradient(&c, i, d).unwrap();
        let eval = |dx: f64, dy: f64| {
            let mut moved = ps.clone();
            moved[i] = VehiclePos::new(moved[i].x + dx, moved[i].y + dy);
            expected_time_multi(&Configuration::new(moved, g).unwrap(), d).unwrap()
        };
        let fdx = (eval(h, 0.0) - eval(-h, 0.0)) / (2.0 * h);
        let fdy = (eval(0.0, h) - eval(0.0, -h)) / (2.0 * h);
        let scale = (gx * gx + gy * gy).sqrt().max(1e-9);
        let err = ((gx - fdx).powi(2) + (gy - fdy).powi(2)).sqrt() / scale;
        assert!(
            err <= 1e-5,
            "region gradient error {err} at config {checked}"
        );
        checked += 1;
    }

    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "took {elapsed:?}, budget 10 s"
    );
    pass(1, "gradient fidelity");
}

/// Criterion 2: uniform density, v = 0.5: optimizer X = 0.5 +- 1e-4, Y
/// within 2e-4 of a 1e-4 grid-search brute force on the closed-form cost,
/// two starts within 1e-4, under 30 seconds.
#[test]
fn criterion_2_single_vehicle_optimum() {
    let start = Instant::now();
    let d = uniform();
    let k = CostCoeffs::constrained_time(0.5).unwrap();

    let a = optimize_single(VehiclePos::new(0.1, 0.8), &k, &d, 1e-9, 20_000).unwrap();
    let b = optimize_single(VehiclePos::new(0.9, 0.2), &k, &d, 1e-9, 20_000).unwrap();
    assert!(a.converged && b.converged);
    assert!((a.optimum.x - 0.5).abs() <= 1e-4, "X = {}", a.optimum.x);
    assert!(a.optimum.distance(&b.optimum) <= 1e-4);

    // Independent closed-form cost for the uniform density.
    let closed = |x: f64, y: f64| -> f64 {
        let sb = k.b.sqrt();
        let prim = |u: f64| {
            if y == 0.0 {
                0.5 * u * u.abs()
            } else {
                0.5 * (u * (u * u + y * y).sqrt() + y * y * (u / y).asinh())
            }
        };
        k.a / sb * (prim(sb * (1.0 - x)) - prim(sb * (0.0 - x))) - k.c * y
    };
    // Full coarse pass at 1e-3, then a 1e-4 pass around the coarse argmin;
    // exact at 1e-4 resolution because the cost is strictly convex.
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..=1000 {
        for j in 1..=2000 {
            let (x, y) = (i as f64 * 1e-3, j as f64 * 1e-3);
            let v = closed(x, y);
            if v < best.0 {
                best = (v, x, y);
            }
        }
    }
    let (cx, cy) = (best.1, best.2);
    let mut fine = (f64::INFINITY, 0.0, 0.0);
    for i in -30..=30 {
        for j in -30..=30 {
            let (x, y) = (cx + i as f64 * 1e-4, cy + j as f64 * 1e-4);
            if !(0.0..=1.0).contains(&x) || y <= 0.0 {
                continue;
            }
            let v = closed(x, y);
            if v < fine.0 {
                fine = (v, x, y);
            }
        }
    }
    assert!(
        (a.optimum.x - fine.1).abs() <= 2e-4,
        "X {} vs grid {}",
        a.optimum.x,
        fine.1
    );
    assert!(
        (a.optimum.y - fine.2).abs() <= 2e-4,
        "Y {} vs grid {}",
        a.optimum.y,
        fine.2
    );

    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 30.0,
        "took {elapsed:?}, budget 30 s"
    );
    pass(2, "single-vehicle optimum vs brute force");
}

/// Criterion 3: the dt = 1e-4 simulation reproduces the closed-form height
/// and intercept time within 5 dt on 25 seeded geometries, and sampled
/// Apollonius points satisfy the defining identity to 1e-9.
#[test]
fn criterion_3_game_formula_oracles() {
    let dt = 1e-4;
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut done = 0;
    while done < 25 {
        let p = VehiclePos::new(rng.gen_range(0.0..1.0), rng.gen_range(0.05..1.2));
        let x = rng.gen_range(0.0..1.0);
        let v = rng.gen_range(0.15..0.8);
        if ((p.x - x).powi(2) + p.y * p.y).sqrt() < 0.05 {
            continue;
        }

        let tr = simulate_pursuit(p, x, v, PursuitStrategy::Height, dt, 2.0 * dt).unwrap();
        assert!(tr.captured);
        let cap = tr.capture_point.unwrap();
        let h = vertical_height(p, x, v).unwrap();
        assert!((cap.y - h).abs() <= 5.0 * dt, "height {} vs {h}", cap.y);

        let tr = simulate_pursuit(p, x, v, PursuitStrategy::Wall, dt, 2.0 * dt).unwrap();
        assert!(tr.captured);
        let ti = intercept_time(p, x, v).unwrap();
        assert!(
            (tr.capture_time() - ti).abs() <= 5.0 * dt,
            "time {} vs {ti}",
            tr.capture_time()
        );

        let c = apollonius(p, x, v).unwrap();
        for k in 0..64 {
            let ang = 2.0 * std::f64::consts::PI * k as f64 / 64.0;
            let (wx, wy) = (
                c.center.x + c.radius * ang.cos(),
                c.center.y + c.radius * ang.sin(),
            );
            let de = ((wx - x).powi(2) + wy * wy).sqrt();
            let dp = ((wx - p.x).powi(2) + (wy - p.y).powi(2)).sqrt();
            assert!((de - v * dp).abs() <= 1e-9);
        }
        done += 1;
    }
    pass(3, "simulation oracles for game formulas");
}

/// Criterion 4: the brute-force minimizer of the on-axis expected intercept
/// time over a 1e-3 grid lies within 2e-3 of the density median.
#[test]
fn criterion_4_median_optimality() {
    for d in [uniform(), ramp()] {
        let v = 0.5;
        let objective = |x0: f64| {
            d.integrate_with_breaks(&[Interval { lo: 0.0, hi: 1.0 }], &[x0], |t| {
                intercept_time(VehiclePos::new(x0, 0.0), t, v).unwrap()
            })
        };
        let mut best = (f64::INFINITY, 0.0);
        for i in 0..=1000 {
            let x = i as f64 * 1e-3;
            let val = objective(x);
            if val < best.0 {
                best = (val, x);
            }
        }
        assert!(
            (best.1 - d.median()).abs() <= 2e-3,
            "grid minimizer {} vs median {}",
            best.1,
            d.median()
        );
    }
    pass(4, "median minimizes expected intercept time");
}

/// Criterion 5: on 100 seeded configurations (m in 2..=5): regions tile the
/// generator to 1e-9, overlaps at most 1e-9, and 10^4 sampled points per
/// configuration are owned by a pointwise-optimal vehicle, in under 60 s.
#[test]
fn criterion_5_partition_soundness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    for cfg in 0..100 {
        let m = rng.gen_range(2..=5usize);
        let g = GameParams::new(1.0, rng.gen_range(0.15..0.85)).unwrap();
        let mut ps: Vec<VehiclePos> = Vec::new();
        while ps.len() < m {
            let cand = VehiclePos::new(rng.gen_range(0.02..0.98), rng.gen_range(0.02..0.9));
            if ps.iter().all(|p| p.distance(&cand) > 0.02) {
                ps.push(cand);
            }
        }
        let part = dominance_partition(&ps, &g).unwrap();
        let total: f64 = part.regions().iter().map(|r| r.total_length()).sum();
        assert!(
            (total - 1.0).abs() <= 1e-9,
            "coverage {total} at config {cfg}"
        );
        for i in 0..m {
            for j in (i + 1)..m {
                let overlap = part.region(i).intersect(part.region(j), 1.0).total_length();
                assert!(overlap <= 1e-9, "overlap {overlap} at config {cfg}");
            }
        }
        for _ in 0..10_000 {
            let x = rng.gen_range(0.0..1.0);
            let min_t = ps
                .iter()
                .map(|p| constrained_time(*p, x, &g))
                .fold(f64::INFINITY, f64::min);
            for (i, r) in part.regions().iter().enumerate() {
                if r.contains(x) {
                    assert!(
                        constrained_time(ps[i], x, &g) - min_t >= -1e-9
                            && constrained_time(ps[i], x, &g) <= min_t + 1e-9,
                        "owner {i} not optimal at x = {x} (config {cfg})"
                    );
                }
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() < 60.0,
        "took {elapsed:?}, budget 60 s"
    );
    pass(5, "partition soundness");
}

/// Criterion 6: 20 seeded descents have a non-increasing expected time
/// (1e-10 slack) and reach a critical configuration (tol 1e-5) within 500
/// rounds.
#[test]
fn criterion_6_lloyd_monotone_convergence() {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    for scenario in 0..20 {
        let m = 2 + scenario % 2;
        let v = [0.3, 0.5, 0.7][scenario % 3];
        let g = GameParams::new(1.0, v).unwrap();
        let d = if scenario % 2 == 0 { uniform() } else { ramp() };
        let mut ps: Vec<VehiclePos> = Vec::new();
        while ps.len() < m {
            let cand = VehiclePos::new(rng.gen_range(0.05..0.95), rng.gen_range(0.05..0.7));
            if ps.iter().all(|p| p.distance(&cand) > 0.05) {
                ps.push(cand);
            }
        }
        let c0 = Configuration::new(ps, g).unwrap();
        let trace = lloyd_descend(&c0, &d, 500, 1e-5).unwrap();
        for w in trace.rounds.windows(2) {
            assert!(
                w[1].expected_time <= w[0].expected_time + 1e-10,
                "scenario {scenario}: round {} increased expected time",
                w[1].round
            );
        }
        assert!(
            trace.converged,
            "scenario {scenario} did not converge in 500 rounds"
        );
        assert!(
            is_critical(&trace.final_configuration(), &d, 1e-5)
                .unwrap()
                .critical,
            "scenario {scenario}: terminal configuration is not critical"
        );
    }
    pass(6, "lloyd descent monotonicity and convergence");
}

/// Criterion 7: the stacked symmetric two-vehicle start converges to a
/// critical configuration whose upper vehicle has a disconnected region and
/// is flagged unstable; a 1e-3 perturbation descends to a connected-region
/// critical configuration with strictly lower expected time.
#[test]
fn criterion_7_stacked_pair_instability() {
    let d = uniform();
    let g = GameParams::new(1.0, 0.5).unwrap();
    let c0 = Configuration::new(
        vec![VehiclePos::new(0.5, 0.3), VehiclePos::new(0.5, 0.7)],
        g,
    )
    .unwrap();
    let trace = lloyd_descend(&c0, &d, 500, 1e-6).unwrap();
    assert!(trace.converged);
    let cfg = trace.final_configuration();
    assert!(is_critical(&cfg, &d, 1e-5).unwrap().critical);

    let part = dominance_partition(cfg.positions(), cfg.params()).unwrap();
    let (upper, lower) = if cfg.positions()[0].y > cfg.positions()[1].y {
        (0, 1)
    } else {
        (1, 0)
    };
    assert!(
        part.region(upper).num_components() >= 2,
        "upper vehicle's region must be disconnected"
    );
    let verdicts = instability_check(&cfg, &d).unwrap();
    assert!(matches!(verdicts[upper], StabilityVerdict::Unstable { .. }));
    assert!(matches!(verdicts[lower], StabilityVerdict::StableCandidate));

    let mut ps = cfg.positions().to_vec();
    ps[upper] = VehiclePos::new(ps[upper].x + 1e-3, ps[upper].y);
    let trace2 = lloyd_descend(&Configuration::new(ps, g).unwrap(), &d, 500, 1e-6).unwrap();
    assert!(trace2.converged);
    let cfg2 = trace2.final_configuration();
    let part2 = dominance_partition(cfg2.positions(), cfg2.params()).unwrap();
    assert!(
        part2.regions().iter().all(|r| r.num_components() == 1),
        "perturbed descent must reach connected regions"
    );
    assert!(is_critical(&cfg2, &d, 1e-5).unwrap().critical);
    assert!(
        trace2.final_expected_time() < trace.final_expected_time(),
        "perturbed equilibrium must be strictly better: {} vs {}",
        trace2.final_expected_time(),
        trace.final_expected_time()
    );
    pass(
        7,
        "stacked configuration is unstable, perturbation improves",
    );
}

/// Criterion 8: in the three-vehicle non-uniform scenario the initially
/// empty region becomes non-empty after finitely many rounds and the
/// descent then converges to a critical configuration.
#[test]
fn criterion_8_empty_region_recovery() {
    let d = ramp();
    let g = GameParams::new(1.0, 0.5).unwrap();
    let c0 = Configuration::new(
        vec![
            VehiclePos::new(0.3, 0.2),
            VehiclePos::new(0.7, 0.25),
            VehiclePos::new(0.5, 2.5),
        ],
        g,
    )
    .unwrap();
    let part0 = dominance_partition(c0.positions(), c0.params()).unwrap();
    assert!(
        part0.region(2).is_empty(),
        "vehicle 3 must start with an empty region"
    );

    let trace = lloyd_descend(&c0, &d, 500, 1e-6).unwrap();
    assert!(trace.converged);
    let recoveries = trace.recovery_rounds();
    assert!(
        !recoveries[2].is_empty(),
        "no empty -> non-empty transition recorded"
    );
    let last_recovery = *recoveries[2].last().unwrap();
    for rec in trace.rounds.iter().filter(|r| r.round >= last_recovery) {
        assert!(!rec.empty[2], "region went empty again after recovery");
    }
    assert!(
        is_critical(&trace.final_configuration(), &d, 1e-5)
            .unwrap()
            .critical
    );
    pass(8, "empty region recovers, then descent converges");
}

/// Criterion 9: the v = 0.99 single-vehicle optimum for the uniform density
/// lies within 0.02 of (0.5, sqrt(1/12)).
#[test]
fn criterion_9_equal_speed_limit() {
    let d = uniform();
    let k = CostCoeffs::constrained_time(0.99).unwrap();
    let r = optimize_single(VehiclePos::new(0.3, 0.5), &k, &d, 1e-6, 50_000).unwrap();
    assert!(r.converged);
    let limit = VehiclePos::new(0.5, (1.0f64 / 12.0).sqrt());
    let dist = r.optimum.distance(&limit);
    assert!(
        dist <= 0.02,
        "optimum ({}, {}) is {dist} from the equal-speed limit",
        r.optimum.x,
        r.optimum.y
    );
    pass(9, "equal-speed limiting placement");
}

/// Criterion 10: re-running a seeded scenario through the CLI binary yields
/// byte-identical artifacts.
#[test]
fn criterion_10_deterministic_artifacts() {
    let dir = std::env::temp_dir().join(format!("intercept-acceptance-{}", std::process::id()));
    let scenario_path = dir.join("scenario.json");
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(
        &scenario_path,
        r#"{
            "width": 1.0,
            "target_speed": 0.5,
            "density": {"type": "piecewise_linear", "points": [[0.0, 0.0], [0.25, 2.0], [1.0, 0.0]]},
            "mode": "multi-lloyd",
            "positions": [[0.3, 0.2], [0.7, 0.25], [0.5, 2.5]],
            "solver": {"tol": 1e-6, "max_rounds": 200, "substeps": 32},
            "seed": 42,
            "outputs": {
                "trace_csv": "trace.csv",
                "partition_json": "partitions.json",
                "svg": "snap.svg",
                "summary_json": "summary.json"
            }
        }"#,
    )
    .unwrap();

    let run = |out: &std::path::Path| {
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_intercept"))
            .arg("run")
            .arg(&scenario_path)
            .arg("--out")
            .arg(out)
            .arg("--svg-every")
            .arg("25")
            .output()
            .expect("binary runs");
        assert!(
            status.status.success(),
            "run failed: {}",
            String::from_utf8_lossy(&status.stderr)
        );
    };
    let (out_a, out_b) = (dir.join("a"), dir.join("b"));
    run(&out_a);
    run(&out_b);

    let mut names: Vec<String> = std::fs::read_dir(&out_a)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert!(names.len() >= 4, "expected artifacts, found {names:?}");
    for name in &names {
        let a = std::fs::read(out_a.join(name)).unwrap();
        let b = std::fs::read(out_b.join(name)).unwrap();
        assert_eq!(a, b, "artifact {name} differs between runs");
    }
    std::fs::remove_dir_all(&dir).ok();
    pass(10, "byte-identical artifacts across reruns");
}
