use thiserror::Error;

/// Errors surfaced by placement, partition, and game computations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Pursuer and evader coincide; the Apollonius circle degenerates.
    #[error("degenerate Apollonius circle: pursuer and evader coincide at ({x}, {y})")]
    DegenerateCircle { x: f64, y: f64 },

    /// Gradient integrand is singular (vehicle on the generator with mass at its abscissa).
    #[error("gradient singular at Y = 0 (X = {x} lies in the integration support)")]
    GradientSingularity { x: f64 },

    /// Two vehicles occupy (numerically) the same position.
    #[error("coincident vehicles {i} and {j} at distance {dist:e}")]
    CoincidentVehicles { i: usize, j: usize, dist: f64 },

    /// A vehicle's dominance region is empty where a non-empty one is required.
    #[error("empty dominance region for vehicle {vehicle}")]
    EmptyRegion { vehicle: usize },

    /// Intercept geometry produced an imaginary travel distance.
    #[error("infeasible intercept geometry: {0}")]
    Infeasible(String),

    /// A numerical invariant the algorithm relies on was violated.
    #[error("numerical invariant violated: {0}")]
    InvariantViolation(String),

    /// A documented precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
