//! Marked Euclidean triangles and the log-max-ratio metric on the unit-area
//! slice.
//!
//! A triangle with sides `a1, a2, a3` is described by the coordinates
//! `A_i = (a_j + a_k - a_i) / 2`, in which Heron's formula reads
//! `sqrt((A1 + A2 + A3) A1 A2 A3)` and the triangle inequalities become
//! positivity. On the unit-area slice
//! `eta(X, Y) = log max_i Y_i / X_i` is an asymmetric metric.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{arith_symmetrise, max_symmetrise, WeakMetric, Weight};
use crate::sampling::{log_uniform, seeded_rng};

/// Allowed deviation of the Heron area from 1 on the slice.
pub const UNIT_AREA_TOLERANCE: f64 = 1e-12;
/// Gap an asymmetry witness has to exceed.
pub const ASYMMETRY_GAP: f64 = 0.01;
/// Sampling box for A-coordinates, `[e^-2, e^2]` per coordinate.
pub const SAMPLE_RANGE: (f64, f64) = (0.135_335_283_236_612_7, 7.389_056_098_930_65);

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleSides {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl TriangleSides {
    pub fn new(a1: f64, a2: f64, a3: f64) -> Result<Self> {
        let s = [a1, a2, a3];
        if s.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
            return Err(Error::InvalidTriangle(format!(
                "side lengths must be positive, got {s:?}"
            )));
        }
        for i in 0..3 {
            if s[(i + 1) % 3] + s[(i + 2) % 3] <= s[i] {
                return Err(Error::InvalidTriangle(format!(
                    "sides {s:?} violate the triangle inequality"
                )));
            }
        }
        Ok(Self { a1, a2, a3 })
    }

    pub fn to_a(self) -> TriangleA {
        sides_to_a(self)
    }
}

/// Heron coordinates of a triangle; all strictly positive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct TriangleA([f64; 3]);

impl TriangleA {
    pub fn new(a1: f64, a2: f64, a3: f64) -> Result<Self> {
        Self::try_from([a1, a2, a3])
    }

    pub fn coords(&self) -> [f64; 3] {
        self.0
    }

    pub fn scaled(self, lambda: f64) -> Result<Self> {
        Self::try_from(self.0.map(|a| lambda * a))
    }

    pub fn to_sides(self) -> TriangleSides {
        a_to_sides(self)
    }
}

impl TryFrom<[f64; 3]> for TriangleA {
    type Error = Error;

    fn try_from(a: [f64; 3]) -> Result<Self> {
        if a.iter().all(|x| x.is_finite() && *x > 0.0) {
            Ok(Self(a))
        } else {
            Err(Error::InvalidTriangle(format!(
                "A-coordinates must be positive, got {a:?}"
            )))
        }
    }
}

impl From<TriangleA> for [f64; 3] {
    fn from(a: TriangleA) -> Self {
        a.0
    }
}

/// A point of the unit-area slice.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct UnitAreaTriangle(TriangleA);

impl UnitAreaTriangle {
    pub fn new(a: TriangleA) -> Result<Self> {
        let area = heron_area(a);
        if (area - 1.0).abs() > UNIT_AREA_TOLERANCE {
            return Err(Error::InvalidTriangle(format!("Heron area is {area}, not 1")));
        }
        Ok(Self(a))
    }

    pub fn a(&self) -> TriangleA {
        self.0
    }

    pub fn coords(&self) -> [f64; 3] {
        self.0 .0
    }
}

pub fn sides_to_a(s: TriangleSides) -> TriangleA {
    let TriangleSides { a1, a2, a3 } = s;
    TriangleA([(a2 + a3 - a1) / 2.0, (a3 + a1 - a2) / 2.0, (a1 + a2 - a3) / 2.0])
}

pub fn a_to_sides(a: TriangleA) -> TriangleSides {
    let [x1, x2, x3] = a.0;
    TriangleSides {
        a1: x2 + x3,
        a2: x3 + x1,
        a3: x1 + x2,
    }
}

pub fn heron_area(a: TriangleA) -> f64 {
    let [x1, x2, x3] = a.0;
    ((x1 + x2 + x3) * x1 * x2 * x3).sqrt()
}

/// Rescales `a` by `Ar(a)^(-1/2)`, the unique factor giving area 1.
pub fn normalize_unit_area(a: TriangleA) -> UnitAreaTriangle {
    let lambda = heron_area(a).sqrt().recip();
    UnitAreaTriangle(TriangleA(a.0.map(|x| lambda * x)))
}

/// `log max_i Y_i / X_i`
pub fn eta(x: TriangleA, y: TriangleA) -> f64 {
    eta_raw(&x.0, &y.0)
}

fn eta_raw(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| b / a)
        .fold(f64::NEG_INFINITY, f64::max)
        .ln()
}

/// `|exp(eta(lam X, lam' Y)) - (lam' / lam) exp(eta(X, Y))|`
pub fn eta_scaling_residual(x: TriangleA, y: TriangleA, lambda: f64, lambda_prime: f64) -> Result<f64> {
    let lhs = eta(x.scaled(lambda)?, y.scaled(lambda_prime)?).exp();
    Ok((lhs - lambda_prime / lambda * eta(x, y).exp()).abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Arith,
    Max,
}

impl std::str::FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "arith" => Ok(Self::Arith),
            "max" => Ok(Self::Max),
            other => Err(Error::InvalidArgument(format!(
                "unknown family kind {other:?}, expected arith or max"
            ))),
        }
    }
}

/// `eta` as a weak metric on three-coordinate points of the unit-area slice.
pub fn eta_metric() -> WeakMetric {
    WeakMetric::new("eta", |x, y| {
        let x = unit_area_point(x)?;
        let y = unit_area_point(y)?;
        Ok(eta(x.a(), y.a()))
    })
}

pub fn eta_family(kind: FamilyKind, t: Weight) -> WeakMetric {
    match kind {
        FamilyKind::Arith => arith_symmetrise(&eta_metric(), t),
        FamilyKind::Max => max_symmetrise(&eta_metric(), t),
    }
}

fn unit_area_point(x: &[f64]) -> Result<UnitAreaTriangle> {
    let coords: [f64; 3] = x.try_into().map_err(|_| Error::DimensionMismatch {
        expected: 3,
        found: x.len(),
    })?;
    UnitAreaTriangle::new(TriangleA::try_from(coords)?)
}

/// A-coordinates drawn log-uniformly from [`SAMPLE_RANGE`], then normalized.
pub fn sample_unit_area(rng: &mut impl Rng) -> UnitAreaTriangle {
    let (lo, hi) = SAMPLE_RANGE;
    normalize_unit_area(TriangleA([0; 3].map(|_| log_uniform(rng, lo, hi))))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymmetryWitness {
    pub t: f64,
    pub kind: FamilyKind,
    #[serde(rename = "X")]
    pub x: UnitAreaTriangle,
    #[serde(rename = "Y")]
    pub y: UnitAreaTriangle,
    pub forward: f64,
    pub backward: f64,
    pub gap: f64,
}

/// Searches `count` seeded unit-area pairs for the largest
/// `|eta_t(X, Y) - eta_t(Y, X)|`. Returns it when it exceeds
/// [`ASYMMETRY_GAP`].
pub fn asymmetry_witness(t: Weight, kind: FamilyKind, count: usize, seed: u64) -> Result<Option<AsymmetryWitness>> {
    if count == 0 {
        return Err(Error::EmptySample);
    }
    let mut rng = seeded_rng(seed);
    let pairs: Vec<(UnitAreaTriangle, UnitAreaTriangle)> = (0..count)
        .map(|_| (sample_unit_area(&mut rng), sample_unit_area(&mut rng)))
        .collect();
    let d = eta_family(kind, t);
    let values: Vec<(f64, f64)> = pairs
        .par_iter()
        .map(|(x, y)| Ok((d.eval(&x.coords(), &y.coords())?, d.eval(&y.coords(), &x.coords())?)))
        .collect::<Result<_>>()?;
    let (best, &(forward, backward)) = values.iter().enumerate().fold((0, &values[0]), |acc, (i, v)| {
        if (v.0 - v.1).abs() > (acc.1 .0 - acc.1 .1).abs() {
            (i, v)
        } else {
            acc
        }
    });
    let gap = (forward - backward).abs();
    Ok((gap > ASYMMETRY_GAP).then(|| AsymmetryWitness {
        t: t.value(),
        kind,
        x: pairs[best].0,
        y: pairs[best].1,
        forward,
        backward,
        gap,
    }))
}
