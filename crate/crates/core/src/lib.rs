pub mod balls;
pub mod domain;
pub mod error;
pub mod export;
pub mod geodesics;
pub mod metrics;
pub mod mobius;
pub mod point;
pub mod verify;

pub use balls::{BallTrace, Convexity, EuclideanBall};
pub use domain::{BoundarySample, DomainSpec, Polygon, Sector};
pub use error::{GeomError, Result};
pub use geodesics::{Bracket, DensityField, Polyline};
pub use metrics::{evaluate, EvalConfig, Evaluator, MetricKind, SupSearchConfig};
pub use mobius::{absolute_ratio, chordal_distance, mobius_apply, ExtendedPoint, Generator, MobiusMap};
pub use point::Point;
