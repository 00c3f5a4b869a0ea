//! Dominance-region partitioning of the generator.
//!
//! The pairwise dominance region of vehicle i against vehicle j is the set
//! of arrival abscissae vehicle i reaches no later than vehicle j. Its
//! boundary points are found on the perpendicular bisector of the two
//! vehicles: the points whose distance to the axis is v times their distance
//! to either vehicle, which reduces to a quadratic with real roots. The full
//! dominance region of a vehicle is the intersection of its pairwise regions
//! and the regions tile the generator up to shared endpoints.

use crate::density::Interval;
use crate::error::{Error, Result};
use crate::single_vehicle::{GameParams, VehiclePos};

/// Scan step factor for the degenerate-case fallback boundary search.
const SCAN_STEP_FACTOR: f64 = 1e-6;

/// A finite union of disjoint closed subintervals of `[0, W]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    intervals: Vec<Interval>,
}

impl Region {
    /// Normalize raw intervals: clip to `[0, width]`, sort, drop slivers
    /// shorter than the snap tolerance, and merge touching neighbors.
    pub fn from_intervals(raw: Vec<Interval>, width: f64) -> Self {
        let snap = 1e-12 * width;
        let mut ivs: Vec<Interval> = raw
            .into_iter()
            .filter_map(|iv| {
                let lo = iv.lo.max(0.0);
                let hi = iv.hi.min(width);
                (hi - lo > snap).then_some(Interval { lo, hi })
            })
            .collect();
        ivs.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap());
        let mut merged: Vec<Interval> = Vec::with_capacity(ivs.len());
        for iv in ivs {
            match merged.last_mut() {
                Some(last) if iv.lo <= last.hi + snap => last.hi = last.hi.max(iv.hi),
                _ => merged.push(iv),
            }
        }
        Self { intervals: merged }
    }

    pub fn empty() -> Self {
        Self { intervals: vec![] }
    }

    pub fn full(width: f64) -> Self {
        Self {
            intervals: vec![Interval { lo: 0.0, hi: width }],
        }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn total_length(&self) -> f64 {
        // +0.0 so the empty sum (whose f64 identity is -0.0) prints as 0.
        self.intervals.iter().map(Interval::length).sum::<f64>() + 0.0
    }

    pub fn num_components(&self) -> usize {
        self.intervals.len()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|iv| iv.contains(x))
    }

    /// Intersection of two interval unions.
    pub fn intersect(&self, other: &Region, width: f64) -> Region {
        let mut out = Vec::new();
        for a in &self.intervals {
            for b in &other.intervals {
                if let Some(iv) = a.intersect(b) {
                    out.push(iv);
                }
            }
        }
        Region::from_intervals(out, width)
    }

    /// Closure of `[0, width]` minus this region.
    pub fn complement_within(&self, width: f64) -> Region {
        let mut out = Vec::new();
        let mut cursor = 0.0;
        for iv in &self.intervals {
            if iv.lo > cursor {
                out.push(Interval {
                    lo: cursor,
                    hi: iv.lo,
                });
            }
            cursor = cursor.max(iv.hi);
        }
        if cursor < width {
            out.push(Interval {
                lo: cursor,
                hi: width,
            });
        }
        Region::from_intervals(out, width)
    }

    /// Distance from a point to the region (infinite if empty).
    fn distance_to(&self, x: f64) -> f64 {
        self.intervals
            .iter()
            .map(|iv| {
                if iv.contains(x) {
                    0.0
                } else {
                    (iv.lo - x).abs().min((iv.hi - x).abs())
                }
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// One dominance region per vehicle; together they tile `[0, W]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    regions: Vec<Region>,
    width: f64,
}

impl Partition {
    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn region(&self, i: usize) -> &Region {
        &self.regions[i]
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }
}

fn check_distinct(p_i: VehiclePos, p_j: VehiclePos, i: usize, j: usize, width: f64) -> Result<()> {
    let dist = p_i.distance(&p_j);
    if dist < 1e-12 * width.max(1.0) {
        return Err(Error::CoincidentVehicles { i, j, dist });
    }
    Ok(())
}

/// Arrival abscissae for which `p_i` intercepts no later than `p_j`.
pub fn pairwise_dominance(p_i: VehiclePos, p_j: VehiclePos, g: &GameParams) -> Result<Region> {
    check_distinct(p_i, p_j, 0, 1, g.width())?;
    if p_i.y < 0.0 || p_j.y < 0.0 {
        return Err(Error::Domain("vehicle Y-coordinates must be >= 0".into()));
    }
    let w = g.width();
    let v = g.target_speed();

    // Equal heights: the perpendicular bisector cuts the generator once.
    if p_i.y == p_j.y {
        let mid = 0.5 * (p_i.x + p_j.x);
        let iv = if p_i.x < p_j.x {
            Interval { lo: 0.0, hi: mid }
        } else {
            Interval { lo: mid, hi: w }
        };
        return Ok(Region::from_intervals(vec![iv], w));
    }

    let theta = (p_j.y - p_i.y).atan2(p_j.x - p_i.x) + std::f64::consts::FRAC_PI_2;
    let (sin_t, cos_t) = (theta.sin(), theta.cos());
    let sum_y = p_i.y + p_j.y;
    let sep2 = (p_i.x - p_j.x).powi(2) + (p_i.y - p_j.y).powi(2);
    let (mid_x, mid_y) = (0.5 * (p_i.x + p_j.x), 0.5 * sum_y);

    let qa = 4.0 * (sin_t * sin_t - v * v);
    let qb = 4.0 * sum_y * sin_t;
    let qc = sum_y * sum_y - v * v * sep2;

    let candidates: Vec<f64> = if qa == 0.0 {
        if qb == 0.0 {
            // Doubly degenerate: construct the boundary by dense scan.
            return Ok(scan_dominance(p_i, p_j, g));
        }
        vec![-qc / qb]
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        let scale = (qb * qb).max((4.0 * qa * qc).abs()).max(1.0);
        if disc < -1e-12 * scale {
            return Err(Error::InvariantViolation(format!(
                "pairwise boundary quadratic has complex roots (disc = {disc}) for \
                 p_i=({}, {}), p_j=({}, {})",
                p_i.x, p_i.y, p_j.x, p_j.y
            )));
        }
        let (l1, l2) = stable_quadratic_roots(qa, qb, disc.max(0.0));
        vec![l1, l2]
    };

    let ys: Vec<f64> = candidates.iter().map(|l| mid_y + sin_t * l).collect();

    let region = if candidates.len() == 2 && ys[0] > 0.0 && ys[1] > 0.0 {
        let mut x1 = mid_x + cos_t * candidates[0];
        let mut x2 = mid_x + cos_t * candidates[1];
        if x1 > x2 {
            std::mem::swap(&mut x1, &mut x2);
        }
        if p_i.y < p_j.y {
            Region::from_intervals(vec![Interval { lo: x1, hi: x2 }], w)
        } else {
            Region::from_intervals(
                vec![
                    Interval {
                        lo: f64::NEG_INFINITY,
                        hi: x1,
                    },
                    Interval {
                        lo: x2,
                        hi: f64::INFINITY,
                    },
                ],
                w,
            )
        }
    } else {
        let k = match ys.iter().position(|&y| y > 0.0) {
            Some(k) => k,
            None => {
                return Err(Error::InvariantViolation(format!(
                    "no boundary candidate with positive Y for p_i=({}, {}), p_j=({}, {})",
                    p_i.x, p_i.y, p_j.x, p_j.y
                )))
            }
        };
        let x = mid_x + candidates[k] * cos_t;
        if p_i.x < p_j.x {
            Region::from_intervals(
                vec![Interval {
                    lo: f64::NEG_INFINITY,
                    hi: x,
                }],
                w,
            )
        } else {
            Region::from_intervals(
                vec![Interval {
                    lo: x,
                    hi: f64::INFINITY,
                }],
                w,
            )
        }
    };
    Ok(region)
}

/// Numerically stable roots of `a l² + b l + c = 0` given `a != 0` and the
/// already-clamped discriminant.
fn stable_quadratic_roots(a: f64, b: f64, disc: f64) -> (f64, f64) {
    let sq = disc.sqrt();
    // c = (b² - disc) / (4a)
    let c = (b * b - disc) / (4.0 * a);
    if c == 0.0 {
        return (0.0, -b / a);
    }
    let q = if b >= 0.0 {
        -0.5 * (b + sq)
    } else {
        -0.5 * (b - sq)
    };
    (q / a, c / q)
}

/// Fallback boundary construction by dense membership scan, step `W * 1e-6`.
fn scan_dominance(p_i: VehiclePos, p_j: VehiclePos, g: &GameParams) -> Region {
    use crate::single_vehicle::constrained_time;
    let w = g.width();
    let step = w * SCAN_STEP_FACTOR;
    let n = (w / step).round() as usize;
    let mut out: Vec<Interval> = Vec::new();
    let mut open: Option<f64> = None;
    for k in 0..=n {
        let x = (k as f64 * step).min(w);
        let inside = constrained_time(p_i, x, g) <= constrained_time(p_j, x, g);
        match (inside, open) {
            (true, None) => open = Some(x),
            (false, Some(lo)) => {
                out.push(Interval { lo, hi: x });
                open = None;
            }
            _ => {}
        }
    }
    if let Some(lo) = open {
        out.push(Interval { lo, hi: w });
    }
    Region::from_intervals(out, w)
}

/// Per-vehicle dominance regions: the intersection over all pairwise
/// regions. Empty regions are legal outputs.
pub fn dominance_partition(ps: &[VehiclePos], g: &GameParams) -> Result<Partition> {
    if ps.is_empty() {
        return Err(Error::Domain("at least one vehicle required".into()));
    }
    for i in 0..ps.len() {
        for j in (i + 1)..ps.len() {
            check_distinct(ps[i], ps[j], i, j, g.width())?;
        }
    }
    let w = g.width();
    let mut regions = Vec::with_capacity(ps.len());
    for i in 0..ps.len() {
        let mut region = Region::full(w);
        for j in 0..ps.len() {
            if i == j {
                continue;
            }
            let u_ij = pairwise_dominance(ps[i], ps[j], g)?;
            region = region.intersect(&u_ij, w);
        }
        regions.push(region);
    }
    Ok(Partition { regions, width: w })
}

/// Symmetric Hausdorff distance between two interval unions. Returns 0 when
/// both are empty and the infinity sentinel when exactly one is.
pub fn region_hausdorff(a: &Region, b: &Region) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return 0.0,
        (true, false) | (false, true) => return f64::INFINITY,
        _ => {}
    }
    one_sided(a, b).max(one_sided(b, a))
}

/// sup over points of `a` of the distance to `b`; attained at endpoints of
/// `a` or at gap midpoints of `b` lying inside `a`.
fn one_sided(a: &Region, b: &Region) -> f64 {
    let mut worst = 0.0f64;
    for iv in a.intervals() {
        worst = worst.max(b.distance_to(iv.lo)).max(b.distance_to(iv.hi));
    }
    for gap in b.intervals().windows(2) {
        let mid = 0.5 * (gap[0].hi + gap[1].lo);
        if a.contains(mid) {
            worst = worst.max(b.distance_to(mid));
        }
    }
    worst
}
