//! Finsler machinery: Lagrangian combinators, the path-length functional,
//! and the discretized solver for induced distances.

mod lagrangian;
mod path;
mod solver;

pub use lagrangian::{
    arith_family, max_family, max_lagrangian, reverse_lagrangian, sum_lagrangian, weighted_max_lagrangian,
    weighted_sum_lagrangian, Lagrangian, Smoothness,
};
pub use path::{crucial_identity_check, path_length, PolylinePath, Quadrature};
pub use solver::{induced_distance, GeodesicOptions, GeodesicResult};
