//! Every module's seeded invariant suite must pass end to end.

use intercept_core::verify;

fn assert_suite(module: &str) {
    let reports = verify::run(module, 20260809).unwrap();
    for report in reports {
        for check in &report.checks {
            assert!(
                check.pass,
                "{}::{} failed: measured {:e} > tolerance {:e}",
                report.module, check.name, check.measured, check.tolerance
            );
        }
    }
}

#[test]
fn density_suite() {
    assert_suite("density");
}

#[test]
fn single_vehicle_suite() {
    assert_suite("single_vehicle");
}

#[test]
fn pursuit_games_suite() {
    assert_suite("pursuit_games");
}

#[test]
fn partition_suite() {
    assert_suite("partition");
}

#[test]
fn lloyd_solver_suite() {
    assert_suite("lloyd_solver");
}
