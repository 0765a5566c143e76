//! Asymmetric metrics and Finsler structures on convex domains.
//!
//! - [`bodies`]: convex domains and their ray-exit queries.
//! - [`metric`]: weak metrics, symmetrisation families, axiom probes.
//! - [`funk`]: closed-form Funk, Hilbert and weighted Funk distances and Lagrangians.
//! - [`finsler`]: Lagrangian combinators, path length, induced distances.
//! - [`triangle`]: the log-max-ratio metric on unit-area triangles.
//! - [`experiments`]: scripted numerical checks producing [`experiments::ExperimentReport`]s.

pub mod bodies;
pub mod error;
pub mod experiments;
pub mod finsler;
pub mod funk;
pub mod metric;
pub mod point;
pub mod sampling;
pub mod triangle;

pub use bodies::{ConvexBody, ExitDistance, HalfSpace, Polytope};
pub use error::{Error, Result};
pub use finsler::{GeodesicOptions, GeodesicResult, Lagrangian, PolylinePath};
pub use metric::{ProbeReport, WeakMetric, Weight};
pub use point::{Point, Vector};
