//! Partition-and-descend placement for multiple vehicles.
//!
//! Each synchronous unit-time round freezes the dominance partition computed
//! from a common position snapshot. A vehicle with an empty region drops
//! toward the generator by `min{1, Y}`; every other vehicle integrates the
//! unit-saturated negative gradient of its expected time over its frozen
//! region. The expected time is non-increasing round over round, and the
//! rounds drive the configuration to the set of critical configurations
//! (every vehicle at the unique minimizer over its own frozen region).
//!
//! Per-vehicle updates within a round depend only on the shared snapshot and
//! commit together at the round barrier; they are computed sequentially, so
//! results do not depend on any evaluation order.

use crate::density::Density;
use crate::error::{Error, Result};
use crate::partition::{dominance_partition, Partition};
use crate::single_vehicle::{
    cost_gradient_over, descend_over, expected_cost_over, GameParams, VehiclePos,
};

/// Substeps of the fixed-step 4th-order integrator per unit round.
pub const DEFAULT_SUBSTEPS: usize = 64;

/// Minimum pairwise distance, as a fraction of W, below which a round aborts.
const COINCIDENCE_GUARD: f64 = 1e-9;

/// Criticality tolerance used for the instability-check precondition.
const CRITICALITY_TOL: f64 = 1e-5;

/// X-displacement applied when verifying an instability by perturbation.
const PERTURB_DX: f64 = 1e-4;
/// Rounds allowed for a perturbation to escape.
const PERTURB_ROUNDS: usize = 100;
/// Escape threshold as a multiple of the perturbation size.
const ESCAPE_FACTOR: f64 = 10.0;

/// Positions of all vehicles plus the game parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    positions: Vec<VehiclePos>,
    params: GameParams,
}

impl Configuration {
    pub fn new(positions: Vec<VehiclePos>, params: GameParams) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::Domain("at least one vehicle required".into()));
        }
        for (idx, p) in positions.iter().enumerate() {
            if !(p.x.is_finite() && p.y.is_finite()) || p.y < 0.0 {
                return Err(Error::Domain(format!(
                    "vehicle {idx} must have finite coordinates with Y >= 0, got ({}, {})",
                    p.x, p.y
                )));
            }
        }
        check_separation(&positions, &params)?;
        Ok(Self { positions, params })
    }

    pub fn positions(&self) -> &[VehiclePos] {
        &self.positions
    }

    pub fn params(&self) -> &GameParams {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Root-sum-square distance between two position snapshots.
    pub fn distance(&self, other: &Configuration) -> f64 {
        self.positions
            .iter()
            .zip(other.positions.iter())
            .map(|(a, b)| (a.x - b.x).powi(2) + (a.y - b.y).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

fn check_separation(positions: &[VehiclePos], params: &GameParams) -> Result<()> {
    let guard = COINCIDENCE_GUARD * params.width();
    for i in 0..positions.len() {
        for j in (i + 1)..positions.len() {
            let dist = positions[i].distance(&positions[j]);
            if dist < guard {
                return Err(Error::CoincidentVehicles { i, j, dist });
            }
        }
    }
    Ok(())
}

/// Expected intercept time of the configuration: per-region integrals of the
/// owner's travel time over the dominance partition.
pub fn expected_time_multi(c: &Configuration, d: &Density) -> Result<f64> {
    let part = dominance_partition(&c.positions, &c.params)?;
    Ok(expected_time_from_partition(c, &part, d))
}

fn expected_time_from_partition(c: &Configuration, part: &Partition, d: &Density) -> f64 {
    let k = c.params.time_coeffs();
    c.positions
        .iter()
        .zip(part.regions())
        .map(|(p, region)| expected_cost_over(*p, &k, d, region.intervals()))
        .sum()
}

/// The same expected time by direct quadrature of the pointwise minimum,
/// with no partition involved: argmin switch points are located by scanning
/// and bisecting travel-time comparisons only, then each smooth stretch is
/// integrated exactly. Cross-check route for the partition path.
pub fn expected_time_multi_direct(c: &Configuration, d: &Density) -> Result<f64> {
    check_separation(&c.positions, &c.params)?;
    let k = c.params.time_coeffs();
    let w = c.params.width();
    let min_time = |x: f64| -> f64 {
        c.positions
            .iter()
            .map(|p| crate::single_vehicle::generic_cost(*p, x, &k))
            .fold(f64::INFINITY, f64::min)
    };
    let owner = |x: f64| -> usize {
        let mut best = (f64::INFINITY, 0usize);
        for (i, p) in c.positions.iter().enumerate() {
            let t = crate::single_vehicle::generic_cost(*p, x, &k);
            if t < best.0 {
                best = (t, i);
            }
        }
        best.1
    };
    // Locate owner switches on a fine grid, then bisect each bracket.
    let n = 100_000usize;
    let mut breaks = Vec::new();
    let mut prev = owner(0.0);
    for step in 1..=n {
        let x = w * step as f64 / n as f64;
        let cur = owner(x);
        if cur != prev {
            let (mut lo, mut hi) = (w * (step - 1) as f64 / n as f64, x);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if owner(mid) == prev {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            breaks.push(0.5 * (lo + hi));
            prev = cur;
        }
    }
    Ok(d.integrate_with_breaks(
        &[crate::density::Interval { lo: 0.0, hi: w }],
        &breaks,
        min_time,
    ))
}

/// Gradient of the expected time with respect to vehicle `i`: the travel-time
/// gradient integrated over that vehicle's dominance region only (the moving
/// boundary terms cancel by continuity of the time at region boundaries).
pub fn region_gradient(c: &Configuration, i: usize, d: &Density) -> Result<(f64, f64)> {
    if i >= c.len() {
        return Err(Error::Domain(format!(
            "vehicle index {i} out of range for {} vehicles",
            c.len()
        )));
    }
    let part = dominance_partition(&c.positions, &c.params)?;
    let region = part.region(i);
    if region.is_empty() {
        return Err(Error::EmptyRegion { vehicle: i });
    }
    let p = c.positions[i];
    if p.y == 0.0
        && region
            .intervals()
            .iter()
            .any(|iv| iv.lo < p.x && p.x < iv.hi)
    {
        return Err(Error::GradientSingularity { x: p.x });
    }
    Ok(cost_gradient_over(
        p,
        &c.params.time_coeffs(),
        d,
        region.intervals(),
    ))
}

/// One synchronous unit-time round with the partition frozen.
pub fn lloyd_round(c: &Configuration, d: &Density, substeps: usize) -> Result<Configuration> {
    let part = dominance_partition(&c.positions, &c.params)?;
    advance_round(c, &part, d, substeps)
}

fn advance_round(
    c: &Configuration,
    part: &Partition,
    d: &Density,
    substeps: usize,
) -> Result<Configuration> {
    if substeps == 0 {
        return Err(Error::Domain("substeps must be at least 1".into()));
    }
    let k = c.params.time_coeffs();
    let w = c.params.width();
    let next: Vec<VehiclePos> = c
        .positions
        .iter()
        .zip(part.regions())
        .map(|(p, region)| {
            if region.is_empty() {
                VehiclePos::new(p.x, p.y - p.y.min(1.0))
            } else {
                saturated_flow(*p, &k, d, region, w, substeps)
            }
        })
        .collect();
    check_separation(&next, &c.params)?;
    Ok(Configuration {
        positions: next,
        params: c.params,
    })
}

/// Integrate `ṗ = -sat(∇ cost over the frozen region)` over one unit of time
/// with classical RK4. The field points inward at the domain boundary; the
/// projection after each substep only absorbs integrator overshoot.
fn saturated_flow(
    start: VehiclePos,
    k: &crate::single_vehicle::CostCoeffs,
    d: &Density,
    region: &crate::partition::Region,
    width: f64,
    substeps: usize,
) -> VehiclePos {
    let ivs = region.intervals();
    let mass = d.integrate_intervals(ivs, |_| 1.0);
    let field = |p: VehiclePos| -> (f64, f64) {
        let (gx, gy) = crate::single_vehicle::cost_gradient_over_with_mass(p, k, d, ivs, mass);
        let norm = (gx * gx + gy * gy).sqrt();
        if norm > 1.0 {
            (-gx / norm, -gy / norm)
        } else {
            (-gx, -gy)
        }
    };
    let h = 1.0 / substeps as f64;
    let mut p = start;
    for _ in 0..substeps {
        let k1 = field(p);
        let k2 = field(VehiclePos::new(p.x + 0.5 * h * k1.0, p.y + 0.5 * h * k1.1));
        let k3 = field(VehiclePos::new(p.x + 0.5 * h * k2.0, p.y + 0.5 * h * k2.1));
        let k4 = field(VehiclePos::new(p.x + h * k3.0, p.y + h * k3.1));
        p = VehiclePos::new(
            (p.x + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0)).clamp(0.0, width),
            (p.y + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1)).max(0.0),
        );
    }
    p
}

/// State snapshot at the start of one round.
#[derive(Debug, Clone)]
pub struct RoundRecord {
    pub round: usize,
    pub positions: Vec<VehiclePos>,
    pub partition: Partition,
    pub expected_time: f64,
    /// Gradient norm over each vehicle's region; `None` when the region is empty.
    pub grad_norms: Vec<Option<f64>>,
    pub empty: Vec<bool>,
}

/// Per-round history of a descent run.
#[derive(Debug, Clone)]
pub struct LloydTrace {
    pub rounds: Vec<RoundRecord>,
    pub converged: bool,
    params: GameParams,
}

impl LloydTrace {
    pub fn final_positions(&self) -> &[VehiclePos] {
        &self.rounds.last().expect("trace never empty").positions
    }

    pub fn final_configuration(&self) -> Configuration {
        Configuration {
            positions: self.final_positions().to_vec(),
            params: self.params,
        }
    }

    pub fn final_expected_time(&self) -> f64 {
        self.rounds.last().expect("trace never empty").expected_time
    }

    /// Rounds at which each vehicle transitioned empty -> non-empty.
    pub fn recovery_rounds(&self) -> Vec<Vec<usize>> {
        let m = self.rounds[0].empty.len();
        let mut out = vec![Vec::new(); m];
        for w in self.rounds.windows(2) {
            for (i, slot) in out.iter_mut().enumerate() {
                if w[0].empty[i] && !w[1].empty[i] {
                    slot.push(w[1].round);
                }
            }
        }
        out
    }

    /// Number of empty <-> non-empty flips per vehicle.
    pub fn oscillation_counts(&self) -> Vec<usize> {
        let m = self.rounds[0].empty.len();
        let mut out = vec![0usize; m];
        for w in self.rounds.windows(2) {
            for (i, count) in out.iter_mut().enumerate() {
                if w[0].empty[i] != w[1].empty[i] {
                    *count += 1;
                }
            }
        }
        out
    }
}

fn make_record(round: usize, c: &Configuration, part: &Partition, d: &Density) -> RoundRecord {
    let k = c.params.time_coeffs();
    let mut grad_norms = Vec::with_capacity(c.len());
    let mut empty = Vec::with_capacity(c.len());
    for (p, region) in c.positions.iter().zip(part.regions()) {
        if region.is_empty() {
            grad_norms.push(None);
            empty.push(true);
        } else {
            let (gx, gy) = cost_gradient_over(*p, &k, d, region.intervals());
            grad_norms.push(Some((gx * gx + gy * gy).sqrt()));
            empty.push(false);
        }
    }
    RoundRecord {
        round,
        positions: c.positions.clone(),
        partition: part.clone(),
        expected_time: expected_time_from_partition(c, part, d),
        grad_norms,
        empty,
    }
}

/// Iterate rounds until every region is non-empty and all gradient norms
/// stay below `tol` for three consecutive rounds, or the round budget runs
/// out. The trace records the initial state as round 0.
pub fn lloyd_descend(
    c0: &Configuration,
    d: &Density,
    rounds: usize,
    tol: f64,
) -> Result<LloydTrace> {
    lloyd_descend_with(c0, d, rounds, tol, DEFAULT_SUBSTEPS)
}

pub fn lloyd_descend_with(
    c0: &Configuration,
    d: &Density,
    rounds: usize,
    tol: f64,
    substeps: usize,
) -> Result<LloydTrace> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::Domain(format!("tol must be positive, got {tol}")));
    }
    let mut c = c0.clone();
    let mut records = Vec::with_capacity(rounds.min(1024) + 1);
    let mut streak = 0usize;
    let mut converged = false;
    let mut round = 0usize;
    loop {
        let part = dominance_partition(&c.positions, &c.params)?;
        let rec = make_record(round, &c, &part, d);
        let settled = rec.empty.iter().all(|e| !e)
            && rec
                .grad_norms
                .iter()
                .all(|g| g.map(|n| n < tol).unwrap_or(false));
        records.push(rec);
        streak = if settled { streak + 1 } else { 0 };
        if streak >= 3 {
            converged = true;
            break;
        }
        if round >= rounds {
            break;
        }
        c = advance_round(&c, &part, d, substeps)?;
        round += 1;
    }
    Ok(LloydTrace {
        rounds: records,
        converged,
        params: c0.params,
    })
}

/// Per-vehicle criticality diagnostics.
#[derive(Debug, Clone)]
pub struct VehicleCriticality {
    pub empty: bool,
    /// Gradient norm over the vehicle's region (`None` when empty).
    pub grad_norm: Option<f64>,
    /// How far a restricted descent from the current position moves.
    pub displacement: Option<f64>,
    pub passes: bool,
}

#[derive(Debug, Clone)]
pub struct CriticalityReport {
    pub critical: bool,
    pub per_vehicle: Vec<VehicleCriticality>,
}

/// Whether every vehicle sits at the minimizer of its expected time over its
/// own frozen dominance region: gradient norm below `tol`, and a descent
/// restricted to the frozen region (run at the same `tol`) moves the vehicle
/// by at most `tol`.
pub fn is_critical(c: &Configuration, d: &Density, tol: f64) -> Result<CriticalityReport> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::Domain(format!("tol must be positive, got {tol}")));
    }
    let part = dominance_partition(&c.positions, &c.params)?;
    let k = c.params.time_coeffs();
    let mut per_vehicle = Vec::with_capacity(c.len());
    for (p, region) in c.positions.iter().zip(part.regions()) {
        if region.is_empty() {
            per_vehicle.push(VehicleCriticality {
                empty: true,
                grad_norm: None,
                displacement: None,
                passes: false,
            });
            continue;
        }
        let (gx, gy) = cost_gradient_over(*p, &k, d, region.intervals());
        let grad_norm = (gx * gx + gy * gy).sqrt();
        let res = descend_over(*p, &k, d, region.intervals(), tol, 500);
        let displacement = p.distance(&res.optimum);
        per_vehicle.push(VehicleCriticality {
            empty: false,
            grad_norm: Some(grad_norm),
            displacement: Some(displacement),
            passes: grad_norm < tol && displacement <= tol,
        });
    }
    Ok(CriticalityReport {
        critical: per_vehicle.iter().all(|v| v.passes),
        per_vehicle,
    })
}

/// Stability classification of a critical configuration's vehicles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityVerdict {
    /// Connected dominance region: no instability detected by this test.
    StableCandidate,
    /// Disconnected dominance region: an unstable equilibrium.
    Unstable {
        /// Whether an X-perturbation of the vehicle actually escaped the
        /// configuration within the verification budget.
        perturbation_escaped: bool,
    },
}

/// Flag vehicles whose dominance region is disconnected as unstable, and
/// verify each flag by perturbing that vehicle in X and watching the descent
/// leave the neighborhood. Requires `c` to be critical.
pub fn instability_check(c: &Configuration, d: &Density) -> Result<Vec<StabilityVerdict>> {
    let report = is_critical(c, d, CRITICALITY_TOL)?;
    if !report.critical {
        return Err(Error::Precondition(
            "instability check requires a critical configuration".into(),
        ));
    }
    let part = dominance_partition(&c.positions, &c.params)?;
    let mut verdicts = Vec::with_capacity(c.len());
    for i in 0..c.len() {
        if part.region(i).num_components() >= 2 {
            let escaped = perturbation_escapes(c, i, d)?;
            verdicts.push(StabilityVerdict::Unstable {
                perturbation_escaped: escaped,
            });
        } else {
            verdicts.push(StabilityVerdict::StableCandidate);
        }
    }
    Ok(verdicts)
}

fn perturbation_escapes(c: &Configuration, i: usize, d: &Density) -> Result<bool> {
    let mut positions = c.positions.clone();
    positions[i] = VehiclePos::new(positions[i].x + PERTURB_DX, positions[i].y);
    let mut cc = Configuration::new(positions, c.params)?;
    for _ in 0..PERTURB_ROUNDS {
        cc = lloyd_round(&cc, d, DEFAULT_SUBSTEPS)?;
        if cc.distance(c) > ESCAPE_FACTOR * PERTURB_DX {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{Density, Interval};
    use crate::single_vehicle::expected_cost_gradient;

    fn uniform() -> Density {
        Density::uniform(1.0).unwrap()
    }

    fn config(ps: &[(f64, f64)], v: f64) -> Configuration {
        Configuration::new(
            ps.iter().map(|&(x, y)| VehiclePos::new(x, y)).collect(),
            GameParams::new(1.0, v).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn configuration_rejects_coincident_and_invalid() {
        let g = GameParams::new(1.0, 0.5).unwrap();
        assert!(Configuration::new(vec![], g).is_err());
        assert!(Configuration::new(
            vec![VehiclePos::new(0.4, 0.2), VehiclePos::new(0.4, 0.2)],
            g
        )
        .is_err());
        assert!(Configuration::new(vec![VehiclePos::new(0.4, -0.1)], g).is_err());
    }

    #[test]
    fn mirror_symmetric_pair_doubles_one_side() {
        let d = uniform();
        let c = config(&[(0.3, 0.4), (0.7, 0.4)], 0.5);
        let total = expected_time_multi(&c, &d).unwrap();
        let k = c.params().time_coeffs();
        let one_side = expected_cost_over(
            VehiclePos::new(0.3, 0.4),
            &k,
            &d,
            &[Interval { lo: 0.0, hi: 0.5 }],
        );
        assert!((total - 2.0 * one_side).abs() < 1e-10);
    }

    #[test]
    fn empty_region_contributes_nothing() {
        let d = uniform();
        let near = [(0.3, 0.2), (0.7, 0.25)];
        let base = expected_time_multi(&config(&near, 0.5), &d).unwrap();
        let with_far =
            expected_time_multi(&config(&[(0.3, 0.2), (0.7, 0.25), (0.5, 1e3)], 0.5), &d).unwrap();
        assert!((base - with_far).abs() < 1e-9);
    }

    #[test]
    fn partition_route_matches_direct_minimum() {
        let d = uniform();
        let c = config(&[(0.2, 0.3), (0.6, 0.15), (0.85, 0.5)], 0.4);
        let via_partition = expected_time_multi(&c, &d).unwrap();
        let direct = expected_time_multi_direct(&c, &d).unwrap();
        assert!((via_partition - direct).abs() < 1e-8);
    }

    #[test]
    fn symmetric_pair_has_opposite_x_gradients() {
        let d = uniform();
        let c = config(&[(0.3, 0.4), (0.7, 0.4)], 0.5);
        let (g0x, g0y) = region_gradient(&c, 0, &d).unwrap();
        let (g1x, g1y) = region_gradient(&c, 1, &d).unwrap();
        assert!((g0x + g1x).abs() < 1e-10);
        assert!((g0y - g1y).abs() < 1e-10);
    }

    #[test]
    fn full_region_gradient_reduces_to_single_vehicle() {
        let d = uniform();
        let c = config(&[(0.4, 0.3), (0.5, 50.0)], 0.5);
        let (gx, gy) = region_gradient(&c, 0, &d).unwrap();
        let k = c.params().time_coeffs();
        let (sx, sy) = expected_cost_gradient(VehiclePos::new(0.4, 0.3), &k, &d).unwrap();
        assert!((gx - sx).abs() < 1e-10 && (gy - sy).abs() < 1e-10);
    }

    #[test]
    fn gradient_flags_empty_region() {
        let d = uniform();
        let c = config(&[(0.4, 0.3), (0.5, 50.0)], 0.5);
        assert!(matches!(
            region_gradient(&c, 1, &d),
            Err(Error::EmptyRegion { vehicle: 1 })
        ));
    }

    #[test]
    fn round_drops_empty_vehicle_toward_generator() {
        let d = uniform();
        let c = config(&[(0.4, 0.3), (0.5, 2.5)], 0.5);
        let next = lloyd_round(&c, &d, 16).unwrap();
        assert!((next.positions()[1].x - 0.5).abs() < 1e-15);
        assert!((next.positions()[1].y - 1.5).abs() < 1e-15);

        let c = config(&[(0.4, 0.3), (0.5, 4.0)], 0.5);
        // Run enough rounds for the empty vehicle at Y=4 to reach the axis.
        let mut cc = c;
        for _ in 0..4 {
            cc = lloyd_round(&cc, &d, 16).unwrap();
        }
        assert!(cc.positions()[1].y.abs() < 1e-12);
    }

    #[test]
    fn round_from_y_below_one_lands_on_generator() {
        let d = uniform();
        // Two low flankers shadow the middle vehicle at Y = 0.5 everywhere,
        // so its region is empty and one round puts it on the generator.
        let c = config(&[(0.25, 0.05), (0.75, 0.05), (0.5, 0.5)], 0.5);
        let part = dominance_partition(c.positions(), c.params()).unwrap();
        assert!(part.region(2).is_empty());
        let next = lloyd_round(&c, &d, 16).unwrap();
        assert!((next.positions()[2].x - 0.5).abs() < 1e-15);
        assert_eq!(next.positions()[2].y, 0.0);
    }

    #[test]
    fn saturated_round_moves_unit_distance() {
        // Wide generator, vehicle near the left end owning all the mass: the
        // gradient norm stays above 1 for the whole round and the field
        // direction is nearly constant, so the displacement is one unit.
        let w = 1000.0;
        let d = Density::uniform(w).unwrap();
        let g = GameParams::new(w, 0.5).unwrap();
        let c = Configuration::new(
            vec![VehiclePos::new(2.0, 0.3), VehiclePos::new(500.0, 2000.0)],
            g,
        )
        .unwrap();
        let part = dominance_partition(c.positions(), c.params()).unwrap();
        assert!(part.region(1).is_empty());
        let k = g.time_coeffs();
        let (gx, gy) = cost_gradient_over(c.positions()[0], &k, &d, part.region(0).intervals());
        assert!(
            (gx * gx + gy * gy).sqrt() > 1.05,
            "field must start saturated"
        );

        let next = lloyd_round(&c, &d, DEFAULT_SUBSTEPS).unwrap();
        let moved = c.positions()[0].distance(&next.positions()[0]);
        assert!(
            (moved - 1.0).abs() < 1e-6,
            "saturated displacement was {moved}"
        );
        let (gx, gy) = cost_gradient_over(next.positions()[0], &k, &d, part.region(0).intervals());
        assert!(
            (gx * gx + gy * gy).sqrt() > 1.05,
            "field must stay saturated"
        );
        assert!(next.positions()[1].y == 1999.0);
    }

    #[test]
    fn rounds_never_exceed_unit_displacement() {
        let d = uniform();
        let mut c = config(&[(0.1, 0.9), (0.8, 0.2), (0.45, 1.4)], 0.6);
        for _ in 0..5 {
            let next = lloyd_round(&c, &d, 32).unwrap();
            for (a, b) in c.positions().iter().zip(next.positions()) {
                assert!(a.distance(b) <= 1.0 + 1e-9);
            }
            c = next;
        }
    }

    #[test]
    fn descend_converges_on_symmetric_pair() {
        let d = uniform();
        let c = config(&[(0.25, 0.4), (0.75, 0.4)], 0.5);
        let trace = lloyd_descend_with(&c, &d, 200, 1e-6, 32).unwrap();
        assert!(trace.converged);
        for w in trace.rounds.windows(2) {
            assert!(w[1].expected_time <= w[0].expected_time + 1e-10);
        }
        let report = is_critical(&trace.final_configuration(), &d, 1e-5).unwrap();
        assert!(report.critical);
    }

    #[test]
    fn is_critical_rejects_unconverged() {
        let d = uniform();
        let c = config(&[(0.1, 0.9), (0.9, 0.9)], 0.5);
        let report = is_critical(&c, &d, 1e-6).unwrap();
        assert!(!report.critical);
        assert!(report.per_vehicle.iter().any(|v| !v.passes));
    }

    #[test]
    fn is_critical_diagnoses_empty_region() {
        let d = uniform();
        let c = config(&[(0.4, 0.3), (0.5, 50.0)], 0.5);
        let report = is_critical(&c, &d, 1e-6).unwrap();
        assert!(!report.critical);
        assert!(report.per_vehicle[1].empty);
    }

    #[test]
    fn instability_check_requires_critical_configuration() {
        let d = uniform();
        let c = config(&[(0.1, 0.9), (0.9, 0.9)], 0.5);
        assert!(matches!(
            instability_check(&c, &d),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn single_vehicle_critical_config_is_stable_candidate() {
        let d = uniform();
        let k = GameParams::new(1.0, 0.5).unwrap().time_coeffs();
        let r =
            crate::single_vehicle::optimize_single(VehiclePos::new(0.3, 0.5), &k, &d, 1e-9, 10_000)
                .unwrap();
        let c = Configuration::new(vec![r.optimum], GameParams::new(1.0, 0.5).unwrap()).unwrap();
        let verdicts = instability_check(&c, &d).unwrap();
        assert_eq!(verdicts, vec![StabilityVerdict::StableCandidate]);
    }
}
