//! Generalized triangle-distance Delaunay graphs.
//!
//! A TD-Delaunay graph joins two points whenever some scaled translate of a
//! fixed triangle has both on its boundary and no other point inside. This
//! crate builds those graphs for an arbitrary triangle with angles
//! `θ₁ ≤ θ₂ ≤ θ₃`, routes on them with a 1-local, memoryless router whose
//! worst-case routing ratio is optimal, and measures spanning and routing
//! ratios against their closed-form bounds.
//!
//! Modules:
//! - [`geometry`]: the triangle, its six cones, and smallest homothets.
//! - [`graph`]: point sets, general position, and the two graph builders.
//! - [`routing`]: the local router, its potential function, and the
//!   affine baseline it is compared against.
//! - [`analysis`]: exact ratio measurement, bound evaluators, and the
//!   adversarial instance generators.

pub mod analysis;
mod error;
pub mod geometry;
pub mod graph;
pub mod routing;

pub use analysis::{
    adversarial_routing, adversarial_spanning, baseline_ratio_expression, c_theta,
    c_theta_integrand, routing_ratio_measured, routing_ratio_split, shortest_paths, spanning_bound,
    spanning_ratio, spanning_ratio_with_pairs, BoundValue, RatioReport, Router,
    RoutingConstruction, RoutingInstance, SpanningInstance, SplitRatios,
};
pub use error::{Error, Result};
pub use geometry::{
    cone_of, homothet_contains, smallest_homothet, ConeId, ConeIndex, Containment, Homothet, Point,
    Polarity, TriangleShape,
};
pub use graph::{
    build_empty_homothet_oracle, build_sweep, perturb, validate_general_position, PointSet,
    TdGraph, ValidationReport, Violation,
};
pub use routing::{
    affine_baseline_route, potential, regions, route, route_step, Case, LocalView, RegionSet,
    RouteStep, RouteTrace, StepRecord,
};
