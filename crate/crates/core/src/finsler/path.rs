use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use serde::Serialize;

use super::lagrangian::Lagrangian;
use crate::error::{Error, Result};
use crate::metric::Weight;
use crate::point::{check_dim, distance, dot, lerp, sub, Point};

/// Gauss-Legendre rule mapped to `[0, 1]`.
#[derive(Clone, Debug)]
pub struct Quadrature {
    pairs: Vec<(f64, f64)>,
}

impl Quadrature {
    pub fn gauss_legendre(order: usize) -> Result<Self> {
        let degree =
            NonZeroUsize::new(order).ok_or_else(|| Error::InvalidOptions("quadrature order must be >= 1".into()))?;
        let rule = GaussLegendre::new(degree);
        let pairs = rule
            .iter()
            .map(|(node, weight)| (0.5 * (node + 1.0), 0.5 * weight))
            .collect();
        Ok(Self { pairs })
    }

    pub fn order(&self) -> usize {
        self.pairs.len()
    }

    /// `(node, weight)` pairs on `[0, 1]`.
    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    /// `int_0^1 F(a + s (b - a), b - a) ds`
    pub fn segment(&self, f: &Lagrangian, a: &[f64], b: &[f64], scratch: &mut Vec<f64>) -> f64 {
        let v = sub(b, a);
        if v.iter().all(|c| *c == 0.0) {
            return 0.0;
        }
        let mut acc = 0.0;
        for &(s, w) in &self.pairs {
            scratch.clear();
            scratch.extend(a.iter().zip(&v).map(|(ai, vi)| ai + s * vi));
            acc += w * f.eval_unchecked(scratch, &v);
        }
        acc
    }
}

impl Default for Quadrature {
    fn default() -> Self {
        Self::gauss_legendre(4).expect("order 4 is valid")
    }
}

/// Piecewise-linear path through `nodes`, parametrized uniformly.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct PolylinePath {
    nodes: Vec<Point>,
}

impl PolylinePath {
    pub fn new(nodes: Vec<Point>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidArgument("a path needs at least two nodes".into()));
        }
        let dim = nodes[0].dim();
        for n in &nodes {
            check_dim(dim, n.dim())?;
        }
        Ok(Self { nodes })
    }

    /// `count` equally spaced nodes on the segment `[x, y]`.
    pub fn straight(x: &Point, y: &Point, count: usize) -> Result<Self> {
        check_dim(x.dim(), y.dim())?;
        if count < 2 {
            return Err(Error::InvalidArgument("a path needs at least two nodes".into()));
        }
        let nodes = (0..count)
            .map(|i| {
                let s = i as f64 / (count - 1) as f64;
                Point::from_slice(&lerp(x, y, s))
            })
            .collect();
        Ok(Self { nodes })
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn start(&self) -> &Point {
        &self.nodes[0]
    }

    pub fn end(&self) -> &Point {
        &self.nodes[self.nodes.len() - 1]
    }

    pub fn dim(&self) -> usize {
        self.nodes[0].dim()
    }

    pub fn reversed(&self) -> Self {
        let mut nodes = self.nodes.clone();
        nodes.reverse();
        Self { nodes }
    }

    /// Inserts the midpoint of every segment: `N` nodes become `2N - 1`.
    pub fn refined(&self) -> Self {
        let mut nodes = Vec::with_capacity(2 * self.nodes.len() - 1);
        for w in self.nodes.windows(2) {
            nodes.push(w[0].clone());
            nodes.push(Point::from_slice(&lerp(&w[0], &w[1], 0.5)));
        }
        nodes.push(self.end().clone());
        Self { nodes }
    }

    /// Joins `self` and `other`, which must start where `self` ends.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.end() != other.start() {
            return Err(Error::InvalidArgument("paths do not meet".into()));
        }
        let mut nodes = self.nodes.clone();
        nodes.extend_from_slice(&other.nodes[1..]);
        Ok(Self { nodes })
    }

    /// Largest Euclidean distance from a node to the segment `[a, b]`.
    pub fn max_deviation_from_segment(&self, a: &[f64], b: &[f64]) -> f64 {
        let ab = sub(b, a);
        let len2 = dot(&ab, &ab);
        self.nodes
            .iter()
            .map(|p| {
                if len2 == 0.0 {
                    return distance(p, a);
                }
                let s = (dot(&sub(p, a), &ab) / len2).clamp(0.0, 1.0);
                distance(p, &lerp(a, b, s))
            })
            .fold(0.0, f64::max)
    }

    pub fn euclidean_length(&self) -> f64 {
        self.nodes.windows(2).map(|w| distance(&w[0], &w[1])).sum()
    }

    /// One node per row, coordinates as columns `x0, x1, ...`.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record((0..self.dim()).map(|i| format!("x{i}")))?;
        for n in &self.nodes {
            w.write_record(n.iter().map(|c| c.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Length of `path` under `f`: per-segment Gauss-Legendre quadrature of
/// `F(gamma(s), gamma'(s))`.
pub fn path_length(f: &Lagrangian, path: &PolylinePath, quad: &Quadrature) -> Result<f64> {
    check_dim(f.dim(), path.dim())?;
    for n in path.nodes() {
        f.check_point(n)?;
    }
    let mut scratch = Vec::with_capacity(path.dim());
    Ok(path
        .nodes()
        .windows(2)
        .map(|w| quad.segment(f, &w[0], &w[1], &mut scratch))
        .sum())
}

/// `|l_{(1-t) F1 + t F2}(path) - ((1-t) l_{F1}(path) + t l_{F2}(path))|`
pub fn crucial_identity_check(
    f1: &Lagrangian,
    f2: &Lagrangian,
    t: Weight,
    path: &PolylinePath,
    quad: &Quadrature,
) -> Result<f64> {
    let combined = super::lagrangian::weighted_sum_lagrangian(f1, f2, t)?;
    let lhs = path_length(&combined, path, quad)?;
    let rhs = t.complement() * path_length(f1, path, quad)? + t.value() * path_length(f2, path, quad)?;
    Ok((lhs - rhs).abs())
}
