//! Optimal placement of unit-speed vehicles intercepting a mobile target
//! that appears at a random point of a line segment.
//!
//! The crate provides:
//!
//! - [`density`]: piecewise-linear arrival densities with exact panel
//!   quadrature, moments, and the weighted median;
//! - [`single_vehicle`]: the expected-cost family `a·sqrt(b(X-x)² + Y²) - cY`
//!   (constrained travel time, capture height), analytic gradients, and a
//!   convergent Armijo gradient descent;
//! - [`pursuit`]: Apollonius-circle geometry, optimal evader strategies,
//!   closed-form height/time payoffs, and a discrete pursuit simulation used
//!   as an independent oracle;
//! - [`partition`]: pairwise and full dominance-region partitions of the
//!   generator with a Hausdorff metric for continuity checks;
//! - [`lloyd`]: synchronous partition-and-descend rounds for many vehicles,
//!   critical-configuration detection, and instability diagnosis;
//! - [`verify`]: seeded property suites covering each module's invariants.

pub mod density;
pub mod error;
pub mod lloyd;
pub mod partition;
pub mod pursuit;
pub mod single_vehicle;
pub mod verify;

pub use density::{Density, Interval};
pub use error::{Error, Result};
pub use lloyd::{
    expected_time_multi, expected_time_multi_direct, instability_check, is_critical, lloyd_descend,
    lloyd_descend_with, lloyd_round, region_gradient, Configuration, CriticalityReport, LloydTrace,
    RoundRecord, StabilityVerdict, VehicleCriticality, DEFAULT_SUBSTEPS,
};
pub use partition::{dominance_partition, pairwise_dominance, region_hausdorff, Partition, Region};
pub use pursuit::{
    apollonius, classify_two_pursuer, evader_target_height, evader_target_wall, intercept_time,
    simulate_pursuit, vertical_height, ApolloniusCircle, Point, PursuitStrategy, PursuitTrace,
    TwoPursuerRegion,
};
pub use single_vehicle::{
    constrained_time, equal_speed_optimum, expected_cost, expected_cost_gradient, generic_cost,
    optimize_single, CostCoeffs, DescentResult, GameParams, VehiclePos,
};
