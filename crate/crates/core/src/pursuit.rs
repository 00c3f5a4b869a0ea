//! Pursuit-evasion geometry: Apollonius circles, optimal evader targets,
//! closed-form capture payoffs, and a discrete-time simulation used as an
//! independent oracle for the closed forms.
//!
//! The pursuer moves at unit speed with the constant-bearing law (the line
//! joining pursuer and evader stays parallel to its initial direction while
//! the distance shrinks); the evader commits at t = 0 to the straight-line
//! strategy that is optimal for the payoff under play.

use crate::error::{Error, Result};
use crate::single_vehicle::VehiclePos;

/// Wall-game payoffs divide by the target speed; speeds below this are
/// outside the adversarial model.
pub const MIN_ADVERSARIAL_SPEED: f64 = 1e-9;

/// A plain planar point (capture points, circle centers may have y < 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }
}

/// The evader's safe-set boundary: points reachable by the evader no later
/// than the pursuer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApolloniusCircle {
    pub center: Point,
    pub radius: f64,
}

impl ApolloniusCircle {
    /// Whether this disc contains `other` entirely (within `tol`).
    pub fn contains_disc(&self, other: &ApolloniusCircle, tol: f64) -> bool {
        self.center.distance(&other.center) <= self.radius - other.radius + tol
    }
}

fn check_speed(v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0 && v < 1.0) {
        return Err(Error::Domain(format!(
            "target speed must lie strictly in (0, 1), got {v}"
        )));
    }
    Ok(())
}

/// Apollonius circle for pursuer `p` and evader at `(x, 0)` with speed
/// ratio `v`: center `((x - v²X)/(1-v²), -v²Y/(1-v²))`, radius
/// `v·|p - (x,0)|/(1-v²)`.
pub fn apollonius(p: VehiclePos, x: f64, v: f64) -> Result<ApolloniusCircle> {
    check_speed(v)?;
    let dist = ((p.x - x).powi(2) + p.y * p.y).sqrt();
    if dist == 0.0 {
        return Err(Error::DegenerateCircle { x: p.x, y: p.y });
    }
    let s = 1.0 - v * v;
    Ok(ApolloniusCircle {
        center: Point::new((x - v * v * p.x) / s, -v * v * p.y / s),
        radius: v * dist / s,
    })
}

/// Top-most point of the Apollonius circle: the evader's optimal aim when
/// maximizing capture height.
pub fn evader_target_height(p: VehiclePos, x: f64, v: f64) -> Result<Point> {
    let c = apollonius(p, x, v)?;
    Ok(Point::new(c.center.x, c.center.y + c.radius))
}

/// Capture height under optimal play:
/// `H = v·sqrt((X-x)² + Y²)/(1-v²) - v²Y/(1-v²)`.
///
/// Evaluated through [`generic_cost`] with the vertical-height coefficients,
/// so the two agree bit for bit.
///
/// [`generic_cost`]: crate::single_vehicle::generic_cost
pub fn vertical_height(p: VehiclePos, x: f64, v: f64) -> Result<f64> {
    if p.y < 0.0 {
        return Err(Error::Domain(format!("Y must be >= 0, got {}", p.y)));
    }
    let k = crate::single_vehicle::CostCoeffs::vertical_height(v)?;
    Ok(crate::single_vehicle::generic_cost(p, x, &k))
}

/// The X-axis intersection of the Apollonius circle farthest from the
/// evader's start: its optimal aim when maximizing intercept time while
/// staying above the axis. Ties (pursuer directly above the evader) break
/// toward +X.
pub fn evader_target_wall(p: VehiclePos, x: f64, v: f64) -> Result<Point> {
    let c = apollonius(p, x, v)?;
    let rad = c.radius * c.radius - c.center.y * c.center.y;
    let half_chord = clamp_radicand(rad, "wall-target half-chord")?.sqrt();
    let plus = c.center.x + half_chord;
    let minus = c.center.x - half_chord;
    if (plus - x).abs() >= (minus - x).abs() {
        Ok(Point::new(plus, 0.0))
    } else {
        Ok(Point::new(minus, 0.0))
    }
}

/// Intercept time of the wall-pursuit game under optimal play: the evader
/// runs to the far X-axis point of the circle, so the time is its distance
/// there over its speed — half-chord plus chord-midpoint offset, over v.
pub fn intercept_time(p: VehiclePos, x: f64, v: f64) -> Result<f64> {
    if !(v.is_finite() && (MIN_ADVERSARIAL_SPEED..1.0).contains(&v)) {
        return Err(Error::Domain(format!(
            "intercept time needs v in [{MIN_ADVERSARIAL_SPEED}, 1), got {v}"
        )));
    }
    if p.y < 0.0 {
        return Err(Error::Domain(format!("Y must be >= 0, got {}", p.y)));
    }
    if p.y == 0.0 && p.x == x {
        return Ok(0.0);
    }
    let c = apollonius(p, x, v)?;
    let rad = c.radius * c.radius - c.center.y * c.center.y;
    let half_chord = clamp_radicand(rad, "intercept-time radicand")?.sqrt();
    Ok((half_chord + (c.center.x - x).abs()) / v)
}

/// Nonnegative by the geometry; clamp roundoff in [-1e-12, 0) and report
/// anything more negative instead of silently correcting.
fn clamp_radicand(rad: f64, what: &str) -> Result<f64> {
    if rad >= 0.0 {
        Ok(rad)
    } else if rad >= -1e-12 {
        Ok(0.0)
    } else {
        Err(Error::Infeasible(format!("{what} is negative: {rad}")))
    }
}

/// Which payoff the evader maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PursuitStrategy {
    /// Maximize capture height: aim at the circle's top-most point.
    Height,
    /// Maximize intercept time above the axis: aim at the far wall point.
    Wall,
}

/// Discrete-time record of one pursuit.
#[derive(Debug, Clone)]
pub struct PursuitTrace {
    pub dt: f64,
    pub pursuer: Vec<Point>,
    pub evader: Vec<Point>,
    /// Contact point, refined by extrapolating the final closing step.
    pub capture_point: Option<Point>,
    pub captured: bool,
    capture_time: Option<f64>,
}

impl PursuitTrace {
    /// Capture time (refined within the final step), or the elapsed time at
    /// the end of an uncaptured trace.
    pub fn capture_time(&self) -> f64 {
        self.capture_time
            .unwrap_or((self.pursuer.len() - 1) as f64 * self.dt)
    }
}

/// Forward-Euler pursuit: the evader commits to its strategy's aim point,
/// the pursuer keeps the joining line parallel to its initial direction
/// while closing at unit speed. Ends at capture (separation within
/// `capture_radius`) or at the time cap `10·|p0 - (x0,0)|/(1-v)`.
pub fn simulate_pursuit(
    p0: VehiclePos,
    x0: f64,
    v: f64,
    strategy: PursuitStrategy,
    dt: f64,
    capture_radius: f64,
) -> Result<PursuitTrace> {
    check_speed(v)?;
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::Domain(format!("dt must be positive, got {dt}")));
    }
    if capture_radius < dt {
        return Err(Error::Domain(format!(
            "capture_radius {capture_radius} must be at least dt {dt} so discrete capture is detectable"
        )));
    }

    let mut pursuer = Point::new(p0.x, p0.y);
    let mut evader = Point::new(x0, 0.0);
    let mut trace = PursuitTrace {
        dt,
        pursuer: vec![pursuer],
        evader: vec![evader],
        capture_point: None,
        captured: false,
        capture_time: None,
    };

    let sep0 = pursuer.distance(&evader);
    if sep0 <= capture_radius {
        trace.captured = true;
        trace.capture_point = Some(evader);
        trace.capture_time = Some(0.0);
        return Ok(trace);
    }

    let aim = match strategy {
        PursuitStrategy::Height => evader_target_height(p0, x0, v)?,
        PursuitStrategy::Wall => evader_target_wall(p0, x0, v)?,
    };
    let aim_dist = evader.distance(&aim);
    // Evader velocity, fixed for the whole game (straight-line optimal play).
    let (wx, wy) = if aim_dist == 0.0 {
        (0.0, 0.0)
    } else {
        (
            v * (aim.x - evader.x) / aim_dist,
            v * (aim.y - evader.y) / aim_dist,
        )
    };

    // Initial bearing, pursuer -> evader.
    let (ux, uy) = ((evader.x - pursuer.x) / sep0, (evader.y - pursuer.y) / sep0);
    // Match the evader's cross-bearing velocity, spend the rest closing.
    let w_par = wx * ux + wy * uy;
    let (wpx, wpy) = (wx - w_par * ux, wy - w_par * uy);
    let wp2 = wpx * wpx + wpy * wpy;
    let along = (1.0 - wp2).sqrt();
    let (pvx, pvy) = (wpx + along * ux, wpy + along * uy);

    let max_steps = (10.0 * sep0 / ((1.0 - v) * dt)).ceil() as usize;
    let mut sep_prev = sep0;
    for step in 1..=max_steps {
        pursuer = Point::new(pursuer.x + dt * pvx, pursuer.y + dt * pvy);
        evader = Point::new(evader.x + dt * wx, evader.y + dt * wy);
        trace.pursuer.push(pursuer);
        trace.evader.push(evader);
        let sep = pursuer.distance(&evader);
        if sep <= capture_radius {
            trace.captured = true;
            // Localize the zero of the linearly closing separation inside
            // the final step: first-crossing alone is only O(dt/(1-v)).
            let closing = (sep_prev - sep) / dt;
            let extra = if closing > 1e-12 { sep / closing } else { 0.0 };
            trace.capture_time = Some(step as f64 * dt + extra);
            trace.capture_point = Some(Point::new(evader.x + extra * wx, evader.y + extra * wy));
            return Ok(trace);
        }
        sep_prev = sep;
    }
    Ok(trace)
}

/// Owner classes of the two-pursuer adversarial partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoPursuerRegion {
    /// The circle w.r.t. pursuer 1 lies inside the circle w.r.t. pursuer 2:
    /// pursuer 1 moves alone.
    V1,
    /// The circle w.r.t. pursuer 2 lies inside the circle w.r.t. pursuer 1.
    V2,
    /// Neither circle contains the other: both pursuers move.
    V12,
}

/// Classify a generator point by Apollonius-circle containment for two
/// pursuers. The containing test assigns the region to the pursuer whose
/// circle is the contained (smaller) one.
pub fn classify_two_pursuer(
    x: f64,
    p1: VehiclePos,
    p2: VehiclePos,
    v: f64,
) -> Result<TwoPursuerRegion> {
    if p1 == p2 {
        return Err(Error::CoincidentVehicles {
            i: 0,
            j: 1,
            dist: 0.0,
        });
    }
    let c1 = apollonius(p1, x, v)?;
    let c2 = apollonius(p2, x, v)?;
    if c2.contains_disc(&c1, 0.0) {
        Ok(TwoPursuerRegion::V1)
    } else if c1.contains_disc(&c2, 0.0) {
        Ok(TwoPursuerRegion::V2)
    } else {
        Ok(TwoPursuerRegion::V12)
    }
}
