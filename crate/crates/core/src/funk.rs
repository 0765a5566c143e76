//! Funk, Hilbert and weighted Funk metrics on convex bodies, in closed form,
//! together with their Lagrangians.
//!
//! With `s` the exit parameter of the ray from `x` through `y`, the boundary
//! point is `a+ = x + s (y - x)` and `|x - a+| / |y - a+| = s / (s - 1)`, so
//! the Funk distance is `-ln(1 - 1/s)`; it is 0 when the ray never exits.
//! The Funk Lagrangian is `p(x, v) = 1 / s` with `s` the exit parameter of
//! the ray `x + s v`.

use std::sync::Arc;

use crate::bodies::ConvexBody;
use crate::error::{Error, Result};
use crate::finsler::{arith_family, max_family, Lagrangian, Smoothness};
use crate::metric::{arith_combine, max_combine, WeakMetric, Weight};
use crate::point::{dot, sub};

/// Points closer than this (normalized) to the boundary are rejected.
pub const EVAL_MARGIN: f64 = 1e-10;

pub fn funk_distance(body: &ConvexBody, x: &[f64], y: &[f64]) -> Result<f64> {
    body.require_interior(x, EVAL_MARGIN)?;
    body.require_interior(y, EVAL_MARGIN)?;
    if x == y {
        return Ok(0.0);
    }
    let s = body.exit_unchecked(x, &sub(y, x));
    if s.is_infinite() {
        Ok(0.0)
    } else {
        Ok(-(-1.0 / s).ln_1p())
    }
}

/// `(F(x, y) + F(y, x)) / 2`
pub fn hilbert_distance(body: &ConvexBody, x: &[f64], y: &[f64]) -> Result<f64> {
    Ok(0.5 * (funk_distance(body, x, y)? + funk_distance(body, y, x)?))
}

/// `(1 - t) F(x, y) + t F(y, x)`
pub fn weighted_funk_arith(body: &ConvexBody, t: Weight, x: &[f64], y: &[f64]) -> Result<f64> {
    Ok(arith_combine(t, funk_distance(body, x, y)?, funk_distance(body, y, x)?))
}

/// `max{(1 - t) F(x, y), t F(y, x)}`
pub fn weighted_funk_max(body: &ConvexBody, t: Weight, x: &[f64], y: &[f64]) -> Result<f64> {
    Ok(max_combine(t, funk_distance(body, x, y)?, funk_distance(body, y, x)?))
}

pub fn funk_metric(body: Arc<ConvexBody>) -> WeakMetric {
    WeakMetric::new(format!("funk[{body}]"), move |x, y| funk_distance(&body, x, y))
}

pub fn hilbert_metric(body: Arc<ConvexBody>) -> WeakMetric {
    WeakMetric::new(format!("hilbert[{body}]"), move |x, y| hilbert_distance(&body, x, y))
}

/// `p(x, v) = |v| / |x - a|`, `a` the exit point of the ray `x + s v`.
pub fn funk_lagrangian(body: Arc<ConvexBody>) -> Lagrangian {
    let smoothness = match *body {
        ConvexBody::Ball { .. } | ConvexBody::Ellipsoid { .. } => Smoothness::Smooth,
        ConvexBody::Polytope(_) | ConvexBody::UpperHalfSpace { .. } => Smoothness::Piecewise,
    };
    let inner = body.clone();
    Lagrangian::new(format!("funk[{body}]"), body.dim(), smoothness, move |x, v| {
        if v.iter().all(|c| *c == 0.0) {
            return 0.0;
        }
        let s = inner.exit_unchecked(x, v);
        if s.is_infinite() {
            0.0
        } else {
            1.0 / s
        }
    })
    .restricted_to(body, EVAL_MARGIN)
}

/// `q(x, v) = (p(x, v) + p(x, -v)) / 2`
pub fn hilbert_lagrangian(body: Arc<ConvexBody>) -> Lagrangian {
    arith_family(&funk_lagrangian(body), Weight::HALF)
}

/// `(1 - t) p(x, v) + t p(x, -v)`
pub fn weighted_funk_lagrangian(body: Arc<ConvexBody>, t: Weight) -> Lagrangian {
    arith_family(&funk_lagrangian(body), t)
}

/// `max{(1 - t) p(x, v), t p(x, -v)}`, assembled from `p` and its reverse.
pub fn weighted_funk_max_lagrangian(body: Arc<ConvexBody>, t: Weight) -> Lagrangian {
    max_family(&funk_lagrangian(body), t)
}

/// Weighted Funk Lagrangian of the open unit ball:
/// `((1 - 2t) <x, v> + sqrt((1 - |x|^2) |v|^2 + <x, v>^2)) / (1 - |x|^2)`.
pub fn ball_funk_lagrangian_closed(x: &[f64], v: &[f64], t: Weight) -> Result<f64> {
    if x.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: v.len(),
        });
    }
    let gap = 1.0 - dot(x, x);
    if gap <= 0.0 {
        return Err(Error::NotInterior { margin: gap });
    }
    let xv = dot(x, v);
    let root = (gap * dot(v, v) + xv * xv).sqrt();
    Ok(((1.0 - 2.0 * t.value()) * xv + root) / gap)
}

/// Weighted Funk Lagrangian of `{x_n > 0}` (`n` the last coordinate):
/// `t v_n / x_n` for `v_n > 0`, `(1 - t) |v_n| / x_n` for `v_n < 0`.
/// At `t = 0` this is `max(-v_n / x_n, 0)`.
pub fn halfspace_funk_lagrangian_closed(x: &[f64], v: &[f64], t: Weight) -> Result<f64> {
    if x.len() != v.len() || x.is_empty() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: v.len(),
        });
    }
    let n = x.len() - 1;
    if x[n] <= 0.0 {
        return Err(Error::NotInterior { margin: x[n] });
    }
    let vn = v[n];
    Ok(if vn > 0.0 {
        t.value() * vn / x[n]
    } else if vn < 0.0 {
        t.complement() * vn.abs() / x[n]
    } else {
        0.0
    })
}
