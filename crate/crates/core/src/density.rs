//! Arrival density on the generator segment.
//!
//! A [`Density`] is a continuous piecewise-linear probability density on
//! `[0, W]`, normalized to unit mass at construction. It carries the
//! quadrature backend used by every expected-value computation in the
//! crate: fixed-order Gauss–Legendre panels split at density breakpoints
//! (and any caller-supplied breaks), with adaptive bisection as a fallback
//! when the panel estimate has not settled.
//!
//! A `Density` is immutable after construction and every operation here is
//! a pure function, so values can be shared freely across threads.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Mass below which a density is rejected as identically zero.
const MIN_TOTAL_MASS: f64 = 1e-12;

/// Absolute error target per quadrature subinterval.
const QUAD_TOL: f64 = 1e-10;

/// Maximum bisection depth of the adaptive fallback.
const QUAD_MAX_DEPTH: u32 = 32;

/// A closed subinterval `[lo, hi]` of the generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(Error::Domain(format!(
                "interval requires finite lo <= hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Intersection with another interval, `None` if disjoint.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }
}

/// 20-point Gauss–Legendre nodes and weights on [-1, 1].
///
/// Computed once by Newton iteration on the Legendre polynomial; exact for
/// polynomials up to degree 39, so each smooth panel of `f * phi` is
/// integrated essentially to machine precision.
fn gauss_legendre_20() -> &'static [(f64, f64); 20] {
    static TABLE: OnceLock<[(f64, f64); 20]> = OnceLock::new();
    TABLE.get_or_init(|| {
        const N: usize = 20;
        let mut table = [(0.0f64, 0.0f64); N];
        for k in 0..N {
            // Chebyshev-like initial guess, then Newton on P_20.
            let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (N as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0f64, x);
                for j in 2..=N {
                    let jf = j as f64;
                    let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = (N as f64) * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            table[N - 1 - k] = (x, w);
        }
        table
    })
}

/// Continuous piecewise-linear arrival density on `[0, W]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Density {
    width: f64,
    /// Breakpoint abscissae, strictly increasing, first 0 and last `width`.
    xs: Vec<f64>,
    /// Density values at the breakpoints, after normalization.
    vs: Vec<f64>,
    /// Upper bound M = max breakpoint value.
    bound: f64,
}

impl Density {
    /// Uniform density `1/W` on `[0, W]`.
    pub fn uniform(width: f64) -> Result<Self> {
        Self::piecewise_linear(width, &[(0.0, 1.0), (width, 1.0)])
    }

    /// Density from breakpoints `(x, value)`; values are scaled so the
    /// integral over `[0, W]` is exactly 1.
    pub fn piecewise_linear(width: f64, points: &[(f64, f64)]) -> Result<Self> {
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::Domain(format!(
                "width must be positive, got {width}"
            )));
        }
        if points.len() < 2 {
            return Err(Error::Domain(
                "density needs at least two breakpoints".into(),
            ));
        }
        let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
        let mut vs: Vec<f64> = points.iter().map(|p| p.1).collect();
        if xs[0] != 0.0 || *xs.last().unwrap() != width {
            return Err(Error::Domain(format!(
                "breakpoints must start at 0 and end at width {width}, got [{}, {}]",
                xs[0],
                xs.last().unwrap()
            )));
        }
        if xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain(
                "breakpoint abscissae must be strictly increasing".into(),
            ));
        }
        if vs.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Domain(
                "density values must be finite and non-negative".into(),
            ));
        }
        // Trapezoid mass of the raw polyline.
        let mass: f64 = xs
            .windows(2)
            .zip(vs.windows(2))
            .map(|(x, v)| 0.5 * (v[0] + v[1]) * (x[1] - x[0]))
            .sum();
        if mass <= MIN_TOTAL_MASS {
            return Err(Error::Domain(
                "density must have positive total mass".into(),
            ));
        }
        for v in &mut vs {
            *v /= mass;
        }
        let bound = vs.iter().cloned().fold(0.0, f64::max);
        let d = Self {
            width,
            xs,
            vs,
            bound,
        };
        debug_assert!((d.integrate(|_| 1.0) - 1.0).abs() < 1e-9);
        Ok(d)
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    /// Upper bound M on the density.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().cloned().zip(self.vs.iter().cloned())
    }

    /// Density value at `x` by linear interpolation.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        if !(0.0..=self.width).contains(&x) {
            return Err(Error::Domain(format!(
                "x = {x} outside [0, {}]",
                self.width
            )));
        }
        Ok(self.value_at(x))
    }

    fn value_at(&self, x: f64) -> f64 {
        // partition_point > 1 because xs[0] == 0 <= x.
        let i = self.xs.partition_point(|&b| b <= x).min(self.xs.len() - 1);
        let (x0, x1) = (self.xs[i - 1], self.xs[i]);
        let (v0, v1) = (self.vs[i - 1], self.vs[i]);
        v0 + (v1 - v0) * (x - x0) / (x1 - x0)
    }

    /// CDF at `x`; piecewise quadratic, exact per panel.
    pub fn cdf(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, self.width);
        let mut acc = 0.0;
        for i in 1..self.xs.len() {
            let (x0, x1) = (self.xs[i - 1], self.xs[i]);
            let (v0, v1) = (self.vs[i - 1], self.vs[i]);
            if x >= x1 {
                acc += 0.5 * (v0 + v1) * (x1 - x0);
            } else {
                let t = x - x0;
                let slope = (v1 - v0) / (x1 - x0);
                acc += v0 * t + 0.5 * slope * t * t;
                break;
            }
        }
        acc
    }

    /// `∫ f(x) φ(x) dx` over the whole generator.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.integrate_interval(
            Interval {
                lo: 0.0,
                hi: self.width,
            },
            f,
        )
    }

    /// `∫ f(x) φ(x) dx` over one subinterval.
    pub fn integrate_interval(&self, iv: Interval, f: impl Fn(f64) -> f64) -> f64 {
        self.integrate_with_breaks(&[iv], &[], f)
    }

    /// `∫ f(x) φ(x) dx` over a union of subintervals.
    pub fn integrate_intervals(&self, ivs: &[Interval], f: impl Fn(f64) -> f64) -> f64 {
        self.integrate_with_breaks(ivs, &[], f)
    }

    /// Quadrature over `ivs` with panels split at density breakpoints and at
    /// `extra_breaks` (for integrands with known kinks, e.g. |X - x| terms).
    pub fn integrate_with_breaks(
        &self,
        ivs: &[Interval],
        extra_breaks: &[f64],
        f: impl Fn(f64) -> f64,
    ) -> f64 {
        let g = |x: f64| f(x) * self.value_at(x);
        let mut total = 0.0;
        for iv in ivs {
            let (lo, hi) = (iv.lo.max(0.0), iv.hi.min(self.width));
            if hi <= lo {
                continue;
            }
            let mut cuts: Vec<f64> = vec![lo];
            for &b in self.xs.iter().chain(extra_breaks.iter()) {
                if b > lo && b < hi {
                    cuts.push(b);
                }
            }
            cuts.push(hi);
            cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            cuts.dedup();
            for w in cuts.windows(2) {
                total += adaptive_panel(&g, w[0], w[1], QUAD_TOL, 0);
            }
        }
        total
    }

    /// Centroid `X* = ∫ x φ dx` and spread `Y* = sqrt(∫ (X*-x)² φ dx)`.
    pub fn centroid_and_spread(&self) -> (f64, f64) {
        let cx = self.integrate(|x| x);
        let var = self.integrate(|x| (cx - x) * (cx - x));
        (cx, var.max(0.0).sqrt())
    }

    /// The x with CDF(x) = 1/2, from the analytic piecewise-quadratic CDF.
    pub fn median(&self) -> f64 {
        let mut acc = 0.0;
        for i in 1..self.xs.len() {
            let (x0, x1) = (self.xs[i - 1], self.xs[i]);
            let (v0, v1) = (self.vs[i - 1], self.vs[i]);
            let piece = 0.5 * (v0 + v1) * (x1 - x0);
            if acc + piece < 0.5 {
                acc += piece;
                continue;
            }
            // Crossing lies in this panel: solve v0 t + slope t²/2 = 1/2 - acc.
            let need = 0.5 - acc;
            if need <= 0.0 {
                return x0;
            }
            let slope = (v1 - v0) / (x1 - x0);
            let mut t = if slope.abs() < 1e-300 {
                if v0 <= 0.0 {
                    // Flat zero-density stretch covering the crossing.
                    return x0;
                }
                need / v0
            } else {
                let disc = (v0 * v0 + 2.0 * slope * need).max(0.0);
                let root = (-v0 + disc.sqrt()) / slope;
                if (0.0..=(x1 - x0)).contains(&root) {
                    root
                } else {
                    (-v0 - disc.sqrt()) / slope
                }
            };
            // Bisection polish on the monotone CDF, to 1e-12.
            let (mut lo, mut hi) = (0.0, x1 - x0);
            for _ in 0..200 {
                let c = v0 * t + 0.5 * slope * t * t - need;
                if c.abs() < 1e-15 || hi - lo < 1e-13 {
                    break;
                }
                if c > 0.0 {
                    hi = t;
                } else {
                    lo = t;
                }
                t = 0.5 * (lo + hi);
            }
            return (x0 + t).clamp(x0, x1);
        }
        self.width
    }
}

/// One Gauss–Legendre pass of `g` over `[a, b]`.
fn gl_panel(g: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    gauss_legendre_20()
        .iter()
        .map(|&(x, w)| w * g(mid + half * x))
        .sum::<f64>()
        * half
}

/// Adaptive bisection: accept the two-half estimate once it agrees with the
/// whole-panel pass; recurse where it does not (kinked or near-singular g).
fn adaptive_panel(g: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    if b <= a {
        return 0.0;
    }
    let whole = gl_panel(g, a, b);
    let mid = 0.5 * (a + b);
    let halves = gl_panel(g, a, mid) + gl_panel(g, mid, b);
    let err = (whole - halves).abs();
    if err <= tol.max(1e-14 * halves.abs()) || depth >= QUAD_MAX_DEPTH || (b - a) < 1e-15 {
        halves
    } else {
        adaptive_panel(g, a, mid, 0.5 * tol, depth + 1)
            + adaptive_panel(g, mid, b, 0.5 * tol, depth + 1)
    }
}
