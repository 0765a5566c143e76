//! Weak metrics: distance functions valued in `[0, +inf]` that vanish on the
//! diagonal and satisfy the triangle inequality, but need not be symmetric.
//!
//! This module holds the distance-level symmetrisation families and the
//! sampling probes used to test the axioms on concrete metrics. Probes can
//! certify a violation exactly (they return the witness) but can only
//! report statistical evidence that an axiom holds.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{distance, dot, sub, Point};
use crate::sampling::PointSource;

/// Default slack for the triangle-inequality probe.
pub const TRIANGLE_TOLERANCE: f64 = 1e-9;
/// How far a middle point may sit off the segment in collinearity checks.
pub const COLLINEAR_TOLERANCE: f64 = 1e-9;

type MetricFn = dyn Fn(&[f64], &[f64]) -> Result<f64> + Send + Sync;

/// Shared handle to a two-point distance function.
#[derive(Clone)]
pub struct WeakMetric {
    eval: Arc<MetricFn>,
    label: String,
}

impl WeakMetric {
    pub fn new<F>(label: impl Into<String>, eval: F) -> Self
    where
        F: Fn(&[f64], &[f64]) -> Result<f64> + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(eval),
            label: label.into(),
        }
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        (self.eval)(x, y)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn euclidean() -> Self {
        Self::new("euclidean", |x, y| Ok(distance(x, y)))
    }
}

impl fmt::Debug for WeakMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeakMetric").field("label", &self.label).finish()
    }
}

/// Interpolation parameter `t` of the weighted families, in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Weight(f64);

impl Weight {
    pub const ZERO: Self = Self(0.0);
    pub const HALF: Self = Self(0.5);
    pub const ONE: Self = Self(1.0);

    pub fn new(t: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&t) {
            Ok(Self(t))
        } else {
            Err(Error::InvalidWeight(t))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `1 - t`
    pub fn complement(self) -> f64 {
        1.0 - self.0
    }
}

impl TryFrom<f64> for Weight {
    type Error = Error;

    fn try_from(t: f64) -> Result<Self> {
        Self::new(t)
    }
}

impl From<Weight> for f64 {
    fn from(w: Weight) -> f64 {
        w.0
    }
}

/// `c * v` on extended reals with the convention `0 * inf = 0`.
pub fn scale_ext(c: f64, v: f64) -> f64 {
    if c == 0.0 {
        0.0
    } else {
        c * v
    }
}

/// `(1 - t) a + t b` on extended reals.
pub fn arith_combine(t: Weight, a: f64, b: f64) -> f64 {
    scale_ext(t.complement(), a) + scale_ext(t.value(), b)
}

/// `max{(1 - t) a, t b}` on extended reals.
pub fn max_combine(t: Weight, a: f64, b: f64) -> f64 {
    scale_ext(t.complement(), a).max(scale_ext(t.value(), b))
}

pub fn reverse_metric(d: &WeakMetric) -> WeakMetric {
    let inner = d.clone();
    WeakMetric::new(format!("reverse({})", d.label), move |x, y| inner.eval(y, x))
}

/// `(1 - t) d(x, y) + t d(y, x)`
pub fn arith_symmetrise(d: &WeakMetric, t: Weight) -> WeakMetric {
    let inner = d.clone();
    WeakMetric::new(format!("arith({}, {})", d.label, t.0), move |x, y| {
        Ok(arith_combine(t, inner.eval(x, y)?, inner.eval(y, x)?))
    })
}

/// `max{(1 - t) d(x, y), t d(y, x)}`
pub fn max_symmetrise(d: &WeakMetric, t: Weight) -> WeakMetric {
    let inner = d.clone();
    WeakMetric::new(format!("max({}, {})", d.label, t.0), move |x, y| {
        Ok(max_combine(t, inner.eval(x, y)?, inner.eval(y, x)?))
    })
}

/// Offending inputs and the values computed on them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub inputs: Vec<Point>,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub probe: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub witness: Option<Witness>,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, f64>,
}

impl ProbeReport {
    fn new(probe: &str, samples: usize, max_residual: f64, tolerance: f64, witness: Option<Witness>) -> Self {
        Self {
            probe: probe.to_string(),
            samples,
            max_residual,
            tolerance,
            witness,
            passed: max_residual <= tolerance,
            details: BTreeMap::new(),
        }
    }
}

/// `d(x, z) - d(x, y) - d(y, z)` on extended reals; positive means violation.
pub fn triangle_residual(d: &WeakMetric, x: &[f64], y: &[f64], z: &[f64]) -> Result<(f64, [f64; 3])> {
    let xz = d.eval(x, z)?;
    let xy = d.eval(x, y)?;
    let yz = d.eval(y, z)?;
    let rhs = xy + yz;
    let residual = match (xz.is_infinite(), rhs.is_infinite()) {
        (true, true) => 0.0,
        (true, false) => f64::INFINITY,
        (false, true) => f64::NEG_INFINITY,
        (false, false) => xz - rhs,
    };
    Ok((residual, [xz, xy, yz]))
}

/// Draws `count` triples from `sampler` and reports the worst
/// triangle-inequality residual. Triples are evaluated in parallel; the
/// reduction is index-ordered so the report is deterministic.
pub fn triangle_inequality_probe(
    d: &WeakMetric,
    sampler: &mut dyn PointSource,
    count: usize,
    tolerance: f64,
) -> Result<ProbeReport> {
    if count == 0 {
        return Err(Error::EmptySample);
    }
    let triples: Vec<[Point; 3]> = (0..count)
        .map(|_| [sampler.next_point(), sampler.next_point(), sampler.next_point()])
        .collect();
    let results: Vec<(f64, [f64; 3])> = triples
        .par_iter()
        .map(|[x, y, z]| triangle_residual(d, x, y, z))
        .collect::<Result<_>>()?;
    let (worst, (residual, values)) =
        results.iter().enumerate().fold(
            (0, results[0]),
            |best, (i, r)| if r.0 > best.1 .0 { (i, *r) } else { best },
        );
    let witness = Witness {
        inputs: triples[worst].to_vec(),
        values: values.to_vec(),
    };
    Ok(ProbeReport::new(
        "triangle_inequality",
        count,
        residual,
        tolerance,
        Some(witness),
    ))
}

/// Compares forward convergence `d(x_n, x) -> 0` with backward convergence
/// `d(x, x_n) -> 0` on the last quarter of `approach`. The residual is the
/// larger of the two tail maxima.
pub fn busemann_probe(d: &WeakMetric, x: &Point, approach: &[Point], tolerance: f64) -> Result<ProbeReport> {
    if approach.len() < 4 {
        return Err(Error::SequenceTooShort(approach.len()));
    }
    let start = approach.len() - approach.len().div_ceil(4);
    let tail = &approach[start..];
    let pairs: Vec<(f64, f64)> = tail
        .par_iter()
        .map(|xn| Ok((d.eval(xn, x)?, d.eval(x, xn)?)))
        .collect::<Result<_>>()?;
    let mut forward = (0.0_f64, 0);
    let mut backward = (0.0_f64, 0);
    for (i, &(f, b)) in pairs.iter().enumerate() {
        if f > forward.0 {
            forward = (f, i);
        }
        if b > backward.0 {
            backward = (b, i);
        }
    }
    let worst = if forward.0 >= backward.0 { forward.1 } else { backward.1 };
    let witness = Witness {
        inputs: vec![x.clone(), tail[worst].clone()],
        values: vec![pairs[worst].0, pairs[worst].1],
    };
    let mut report = ProbeReport::new(
        "busemann",
        approach.len(),
        forward.0.max(backward.0),
        tolerance,
        Some(witness),
    );
    report.details.insert("forward_tail".into(), forward.0);
    report.details.insert("backward_tail".into(), backward.0);
    report.details.insert("tail_start".into(), start as f64);
    Ok(report)
}

/// `d(x, y) + d(y, z) - d(x, z)` for `y` on the segment `[x, z]`. Zero means
/// the line is additive through `y`; a positive value means the straight
/// segment is not distance-realizing.
pub fn collinear_additivity_residual(d: &WeakMetric, x: &[f64], y: &[f64], z: &[f64]) -> Result<f64> {
    let off = distance_to_segment(y, x, z);
    if off > COLLINEAR_TOLERANCE {
        return Err(Error::NotOnSegment(off));
    }
    let xy = d.eval(x, y)?;
    let yz = d.eval(y, z)?;
    let xz = d.eval(x, z)?;
    Ok(xy + yz - xz)
}

fn distance_to_segment(p: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let ab = sub(b, a);
    let len2 = dot(&ab, &ab);
    if len2 == 0.0 {
        return distance(p, a);
    }
    let s = (dot(&sub(p, a), &ab) / len2).clamp(0.0, 1.0);
    let foot: Vec<f64> = a.iter().zip(&ab).map(|(ai, d)| ai + s * d).collect();
    distance(p, &foot)
}
