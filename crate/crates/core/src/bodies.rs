//! Convex domains of `R^n` and the ray/boundary queries the Funk and Hilbert
//! formulas are built on.
//!
//! Every variant answers the same question: starting from an interior point
//! `x` and moving along `v`, for which `s > 0` does `x + s v` hit the
//! boundary? Polytopes are solved face by face, balls and ellipsoids with the
//! quadratic formula. A ray that never leaves the domain reports an infinite
//! exit distance.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{along, check_dim, dot, norm, Point};

/// Smallest normalized constraint slack for which a point counts as interior.
pub const INTERIOR_MARGIN: f64 = 1e-12;

/// One constraint `normal . x <= offset` of a polytope.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfSpace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

/// Intersection of finitely many half-spaces with nonempty interior.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Polytope {
    halfspaces: Vec<HalfSpace>,
    #[serde(skip)]
    normal_norms: Vec<f64>,
    #[serde(skip)]
    center: Vec<f64>,
}

impl Polytope {
    pub fn new(halfspaces: Vec<HalfSpace>) -> Result<Self> {
        let first = halfspaces
            .first()
            .ok_or_else(|| Error::InvalidBody("polytope needs at least one half-space".into()))?;
        let dim = first.normal.len();
        if dim == 0 {
            return Err(Error::InvalidBody("half-space normal is empty".into()));
        }
        let mut normal_norms = Vec::with_capacity(halfspaces.len());
        for h in &halfspaces {
            check_dim(dim, h.normal.len())?;
            if h.normal.iter().chain([&h.offset]).any(|c| !c.is_finite()) {
                return Err(Error::InvalidBody("non-finite half-space coefficient".into()));
            }
            let n = norm(&h.normal);
            if n == 0.0 {
                return Err(Error::InvalidBody("half-space with zero normal".into()));
            }
            normal_norms.push(n);
        }
        let center = chebyshev_center(&halfspaces, &normal_norms, dim)?;
        Ok(Self {
            halfspaces,
            normal_norms,
            center,
        })
    }

    /// Axis-aligned box `[lo_i, hi_i]`.
    pub fn cube(lo: &[f64], hi: &[f64]) -> Result<Self> {
        check_dim(lo.len(), hi.len())?;
        let dim = lo.len();
        let mut hs = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            let mut e = vec![0.0; dim];
            e[i] = 1.0;
            hs.push(HalfSpace {
                normal: e.clone(),
                offset: hi[i],
            });
            e[i] = -1.0;
            hs.push(HalfSpace {
                normal: e,
                offset: -lo[i],
            });
        }
        Self::new(hs)
    }

    pub fn halfspaces(&self) -> &[HalfSpace] {
        &self.halfspaces
    }

    pub fn dim(&self) -> usize {
        self.halfspaces[0].normal.len()
    }

    /// True when no nonzero `d` satisfies `n_i . d <= 0` for every face,
    /// i.e. the polytope is bounded.
    pub fn recession_cone_is_trivial(&self) -> bool {
        let dim = self.dim();
        (0..dim).all(|j| {
            [OptimizationDirection::Maximize, OptimizationDirection::Minimize]
                .into_iter()
                .all(|dir| {
                    let mut lp = Problem::new(dir);
                    let d: Vec<_> = (0..dim)
                        .map(|i| lp.add_var(if i == j { 1.0 } else { 0.0 }, (-1.0, 1.0)))
                        .collect();
                    for h in &self.halfspaces {
                        let row: Vec<_> = d.iter().copied().zip(h.normal.iter().copied()).collect();
                        lp.add_constraint(&row, ComparisonOp::Le, 0.0);
                    }
                    lp.solve().is_ok_and(|s| s.objective().abs() < 1e-12)
                })
        })
    }

    /// Center of the largest inscribed ball (radius capped at 1).
    pub fn chebyshev_center(&self) -> &[f64] {
        &self.center
    }
}

/// Maximizes `r` subject to `n_i . c + r |n_i| <= b_i`, `0 <= r <= 1`.
fn chebyshev_center(hs: &[HalfSpace], norms: &[f64], dim: usize) -> Result<Vec<f64>> {
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let coords: Vec<_> = (0..dim)
        .map(|_| lp.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY)))
        .collect();
    let radius = lp.add_var(1.0, (0.0, 1.0));
    for (h, &n) in hs.iter().zip(norms) {
        let mut row: Vec<_> = coords.iter().copied().zip(h.normal.iter().copied()).collect();
        row.push((radius, n));
        lp.add_constraint(&row, ComparisonOp::Le, h.offset);
    }
    let sol = lp
        .solve()
        .map_err(|e| Error::InvalidBody(format!("polytope is empty: {e}")))?;
    if sol[radius] < 1e-9 {
        return Err(Error::InvalidBody("polytope has empty interior".into()));
    }
    Ok(coords.iter().map(|&v| sol[v]).collect())
}

/// Distance parameter `s` at which a ray leaves the domain.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct ExitDistance(f64);

impl ExitDistance {
    pub const INFINITE: Self = Self(f64::INFINITY);

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn finite(self) -> Option<f64> {
        self.is_finite().then_some(self.0)
    }
}

/// A closed convex subset of `R^n` with nonempty interior.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConvexBody {
    Ball {
        center: Point,
        radius: f64,
    },
    Ellipsoid {
        center: Point,
        semi_axes: Vec<f64>,
    },
    Polytope(Polytope),
    /// `{ x : x[axis] > 0 }` in `R^dim`; `axis` is 0-based.
    UpperHalfSpace {
        dim: usize,
        axis: usize,
    },
}

impl ConvexBody {
    pub fn ball(center: Point, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidBody(format!("ball radius {radius} must be positive")));
        }
        Ok(Self::Ball { center, radius })
    }

    pub fn unit_ball(dim: usize) -> Self {
        Self::Ball {
            center: Point::origin(dim),
            radius: 1.0,
        }
    }

    pub fn ellipsoid(center: Point, semi_axes: Vec<f64>) -> Result<Self> {
        check_dim(center.dim(), semi_axes.len())?;
        if semi_axes.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
            return Err(Error::InvalidBody("ellipsoid semi-axes must be positive".into()));
        }
        Ok(Self::Ellipsoid { center, semi_axes })
    }

    pub fn polytope(halfspaces: Vec<HalfSpace>) -> Result<Self> {
        Polytope::new(halfspaces).map(Self::Polytope)
    }

    pub fn upper_half_space(dim: usize, axis: usize) -> Result<Self> {
        if dim == 0 || axis >= dim {
            return Err(Error::InvalidBody(format!(
                "half-space axis {axis} out of range for dimension {dim}"
            )));
        }
        Ok(Self::UpperHalfSpace { dim, axis })
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Ball { center, .. } | Self::Ellipsoid { center, .. } => center.dim(),
            Self::Polytope(p) => p.dim(),
            Self::UpperHalfSpace { dim, .. } => *dim,
        }
    }

    pub fn is_bounded(&self) -> bool {
        match self {
            Self::Ball { .. } | Self::Ellipsoid { .. } => true,
            Self::UpperHalfSpace { .. } => false,
            Self::Polytope(p) => p.recession_cone_is_trivial(),
        }
    }

    /// A fixed, well-inside point: the center, the Chebyshev center of a
    /// polytope, or the unit point on the axis of a half-space.
    pub fn anchor(&self) -> Point {
        match self {
            Self::Ball { center, .. } | Self::Ellipsoid { center, .. } => center.clone(),
            Self::Polytope(p) => Point::from_slice(&p.center),
            Self::UpperHalfSpace { dim, axis } => {
                let mut c = vec![0.0; *dim];
                c[*axis] = 1.0;
                Point::from_slice(&c)
            }
        }
    }

    /// Normalized slack of the tightest constraint; positive inside.
    pub fn interior_margin(&self, x: &[f64]) -> f64 {
        match self {
            Self::Ball { center, radius } => {
                let d = x
                    .iter()
                    .zip(center.coords())
                    .map(|(a, c)| (a - c) * (a - c))
                    .sum::<f64>()
                    .sqrt();
                1.0 - d / radius
            }
            Self::Ellipsoid { center, semi_axes } => {
                let d = x
                    .iter()
                    .zip(center.coords())
                    .zip(semi_axes)
                    .map(|((a, c), s)| ((a - c) / s).powi(2))
                    .sum::<f64>()
                    .sqrt();
                1.0 - d
            }
            Self::Polytope(p) => p
                .halfspaces
                .iter()
                .zip(&p.normal_norms)
                .map(|(h, n)| (h.offset - dot(&h.normal, x)) / n)
                .fold(f64::INFINITY, f64::min),
            Self::UpperHalfSpace { axis, .. } => x[*axis],
        }
    }

    /// Strict interior membership.
    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        check_dim(self.dim(), x.len())?;
        Ok(self.interior_margin(x) >= INTERIOR_MARGIN)
    }

    pub(crate) fn require_interior(&self, x: &[f64], margin: f64) -> Result<()> {
        check_dim(self.dim(), x.len())?;
        let m = self.interior_margin(x);
        if m >= margin {
            Ok(())
        } else {
            Err(Error::NotInterior { margin: m })
        }
    }

    /// Exit parameter of the ray `x + s v`, `s > 0`.
    pub fn ray_exit(&self, x: &[f64], v: &[f64]) -> Result<ExitDistance> {
        self.require_interior(x, INTERIOR_MARGIN)?;
        check_dim(self.dim(), v.len())?;
        if v.iter().all(|c| *c == 0.0) {
            return Err(Error::ZeroVector);
        }
        Ok(ExitDistance(self.exit_unchecked(x, v)))
    }

    /// Exit parameter without argument validation. `x` must be interior and
    /// `v` nonzero of matching dimension.
    pub(crate) fn exit_unchecked(&self, x: &[f64], v: &[f64]) -> f64 {
        match self {
            Self::Ball { center, radius } => {
                let w: Vec<f64> = x.iter().zip(center.coords()).map(|(a, c)| a - c).collect();
                quadratic_exit(dot(v, v), dot(v, &w), dot(&w, &w) - radius * radius)
            }
            Self::Ellipsoid { center, semi_axes } => {
                let w: Vec<f64> = x
                    .iter()
                    .zip(center.coords())
                    .zip(semi_axes)
                    .map(|((a, c), s)| (a - c) / s)
                    .collect();
                let u: Vec<f64> = v.iter().zip(semi_axes).map(|(a, s)| a / s).collect();
                quadratic_exit(dot(&u, &u), dot(&u, &w), dot(&w, &w) - 1.0)
            }
            Self::Polytope(p) => p
                .halfspaces
                .iter()
                .filter_map(|h| {
                    let rate = dot(&h.normal, v);
                    (rate > 0.0).then(|| (h.offset - dot(&h.normal, x)) / rate)
                })
                .fold(f64::INFINITY, f64::min),
            Self::UpperHalfSpace { axis, .. } => {
                if v[*axis] < 0.0 {
                    -x[*axis] / v[*axis]
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// Boundary points of the line through `x` and `y`: `a_plus` beyond `y`,
    /// `a_minus` beyond `x`. Absent when that ray never leaves the body.
    pub fn chord_endpoints(&self, x: &[f64], y: &[f64]) -> Result<(Option<Point>, Option<Point>)> {
        self.require_interior(x, INTERIOR_MARGIN)?;
        self.require_interior(y, INTERIOR_MARGIN)?;
        if x == y {
            return Err(Error::CoincidentPoints);
        }
        let forward: Vec<f64> = y.iter().zip(x).map(|(b, a)| b - a).collect();
        let backward: Vec<f64> = forward.iter().map(|c| -c).collect();
        let a_plus = ExitDistance(self.exit_unchecked(x, &forward))
            .finite()
            .map(|s| Point::from_slice(&along(x, s, &forward)));
        let a_minus = ExitDistance(self.exit_unchecked(y, &backward))
            .finite()
            .map(|s| Point::from_slice(&along(y, s, &backward)));
        Ok((a_plus, a_minus))
    }

    /// Reads the text body format (see the README).
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        std::fs::read_to_string(path)?.parse()
    }

    pub fn to_text(&self) -> String {
        let join = |v: &[f64]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
        match self {
            Self::Ball { center, radius } => format!("ball\n{}\n{radius}\n", join(center)),
            Self::Ellipsoid { center, semi_axes } => {
                format!("ellipsoid\n{}\n{}\n", join(center), join(semi_axes))
            }
            Self::Polytope(p) => {
                let mut out = String::from("polytope\n");
                for h in &p.halfspaces {
                    out.push_str(&join(&h.normal));
                    out.push_str(&format!(" {}\n", h.offset));
                }
                out
            }
            Self::UpperHalfSpace { dim, axis } => format!("halfspace\n{dim} {axis}\n"),
        }
    }
}

/// Positive root of `a s^2 + 2 b s + c = 0` with `a > 0`, `c < 0`.
fn quadratic_exit(a: f64, b: f64, c: f64) -> f64 {
    let disc = (b * b - a * c).max(0.0).sqrt();
    // Cancellation-free branch selection.
    if b >= 0.0 {
        -c / (b + disc)
    } else {
        (disc - b) / a
    }
}

impl FromStr for ConvexBody {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (_, tag) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty body file".into(),
        })?;
        let mut rows = Vec::new();
        for (line, l) in lines {
            let row = l
                .split_whitespace()
                .map(|t| {
                    t.parse::<f64>().map_err(|e| Error::Parse {
                        line,
                        msg: format!("bad number {t:?}: {e}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push((line, row));
        }
        let expect_rows = |n: usize| -> Result<()> {
            if rows.len() == n {
                Ok(())
            } else {
                Err(Error::Parse {
                    line: rows.last().map_or(1, |r| r.0),
                    msg: format!("{tag} expects {n} numeric lines, found {}", rows.len()),
                })
            }
        };
        match tag.to_ascii_lowercase().as_str() {
            "ball" => {
                expect_rows(2)?;
                let radius = single(&rows[1])?;
                Self::ball(Point::new(rows[0].1.clone())?, radius)
            }
            "ellipsoid" => {
                expect_rows(2)?;
                Self::ellipsoid(Point::new(rows[0].1.clone())?, rows[1].1.clone())
            }
            "polytope" => {
                if rows.is_empty() {
                    return Err(Error::Parse {
                        line: 1,
                        msg: "polytope needs at least one half-space row".into(),
                    });
                }
                let hs = rows
                    .into_iter()
                    .map(|(line, mut r)| {
                        if r.len() < 2 {
                            return Err(Error::Parse {
                                line,
                                msg: "half-space row needs a normal and an offset".into(),
                            });
                        }
                        let offset = r.pop().unwrap_or_default();
                        Ok(HalfSpace { normal: r, offset })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::polytope(hs)
            }
            "halfspace" => {
                expect_rows(1)?;
                let (line, r) = &rows[0];
                let as_index = |v: f64| -> Result<usize> {
                    if v >= 0.0 && v.fract() == 0.0 {
                        Ok(v as usize)
                    } else {
                        Err(Error::Parse {
                            line: *line,
                            msg: format!("{v} is not a valid index"),
                        })
                    }
                };
                match r.as_slice() {
                    [dim, axis] => Self::upper_half_space(as_index(*dim)?, as_index(*axis)?),
                    _ => Err(Error::Parse {
                        line: *line,
                        msg: "halfspace expects `dim axis`".into(),
                    }),
                }
            }
            other => Err(Error::Parse {
                line: 1,
                msg: format!("unknown body kind {other:?}"),
            }),
        }
    }
}

fn single((line, row): &(usize, Vec<f64>)) -> Result<f64> {
    match row.as_slice() {
        [v] => Ok(*v),
        _ => Err(Error::Parse {
            line: *line,
            msg: "expected a single number".into(),
        }),
    }
}

impl fmt::Display for ConvexBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Ball { center, radius } => write!(f, "Ball({center}, {radius})"),
            Self::Ellipsoid { center, semi_axes } => {
                write!(f, "Ellipsoid({center}, {semi_axes:?})")
            }
            Self::Polytope(p) => write!(f, "Polytope({} faces)", p.halfspaces.len()),
            Self::UpperHalfSpace { dim, axis } => write!(f, "UpperHalfSpace(dim {dim}, axis {axis})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn square() -> ConvexBody {
        ConvexBody::Polytope(Polytope::cube(&[-1.0, -1.0], &[1.0, 1.0]).unwrap())
    }

    #[test]
    fn contains_examples() {
        let disc = ConvexBody::unit_ball(2);
        assert!(disc.contains(&[0.0, 0.0]).unwrap());
        assert!(!disc.contains(&[1.0, 0.0]).unwrap());
        let h = ConvexBody::upper_half_space(2, 1).unwrap();
        assert!(!h.contains(&[5.0, -1.0]).unwrap());
        assert!(h.contains(&[5.0, 1e-3]).unwrap());
        assert!(matches!(
            disc.contains(&[0.0]),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn ray_exit_examples() {
        let disc = ConvexBody::unit_ball(2);
        assert_eq!(disc.ray_exit(&[0.0, 0.0], &[1.0, 0.0]).unwrap().value(), 1.0);
        let h = ConvexBody::upper_half_space(2, 1).unwrap();
        assert!(!h.ray_exit(&[0.0, 1.0], &[0.0, 1.0]).unwrap().is_finite());
        assert_eq!(h.ray_exit(&[0.0, 2.0], &[3.0, -4.0]).unwrap().value(), 0.5);
        // Face-by-face: x + s v hits x1 = 1 at s = 0.5.
        assert_eq!(square().ray_exit(&[0.5, 0.0], &[1.0, 0.0]).unwrap().value(), 0.5);
    }

    #[test]
    fn ray_exit_errors() {
        let disc = ConvexBody::unit_ball(2);
        assert!(matches!(
            disc.ray_exit(&[1.0, 0.0], &[1.0, 0.0]),
            Err(Error::NotInterior { .. })
        ));
        assert!(matches!(
            disc.ray_exit(&[0.0, 0.0], &[0.0, 0.0]),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn ellipsoid_exit_matches_scaled_ball() {
        let e = ConvexBody::ellipsoid(Point::from([1.0, -1.0]), vec![2.0, 0.5]).unwrap();
        assert_relative_eq!(e.ray_exit(&[1.0, -1.0], &[1.0, 0.0]).unwrap().value(), 2.0);
        assert_relative_eq!(e.ray_exit(&[1.0, -1.0], &[0.0, -1.0]).unwrap().value(), 0.5);
        // Off-center: (x/2)^2 + y^2 = 1 from (0,0) relative, direction (1,1)/.. solved by hand.
        let s = e.ray_exit(&[1.0, -1.0], &[1.0, 1.0]).unwrap().value();
        assert_relative_eq!((s / 2.0).powi(2) + (s / 0.5).powi(2), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn chord_endpoints_examples() {
        let disc = ConvexBody::unit_ball(2);
        let (p, m) = disc.chord_endpoints(&[0.0, 0.0], &[0.5, 0.0]).unwrap();
        assert_eq!(p.unwrap().coords(), &[1.0, 0.0]);
        assert_eq!(m.unwrap().coords(), &[-1.0, 0.0]);
        let (p, m) = disc.chord_endpoints(&[0.0, 0.0], &[0.0, 0.5]).unwrap();
        assert_eq!(p.unwrap().coords(), &[0.0, 1.0]);
        assert_eq!(m.unwrap().coords(), &[0.0, -1.0]);
        let h = ConvexBody::upper_half_space(2, 1).unwrap();
        let (p, m) = h.chord_endpoints(&[0.0, 2.0], &[0.0, 1.0]).unwrap();
        assert_eq!(p.unwrap().coords(), &[0.0, 0.0]);
        assert!(m.is_none());
        assert!(matches!(
            disc.chord_endpoints(&[0.1, 0.0], &[0.1, 0.0]),
            Err(Error::CoincidentPoints)
        ));
    }

    #[test]
    fn polytope_rejects_empty_interior() {
        // x <= 0 and -x <= 0: a line, no interior.
        let flat = ConvexBody::polytope(vec![
            HalfSpace {
                normal: vec![1.0, 0.0],
                offset: 0.0,
            },
            HalfSpace {
                normal: vec![-1.0, 0.0],
                offset: 0.0,
            },
        ]);
        assert!(matches!(flat, Err(Error::InvalidBody(_))));
        let empty = ConvexBody::polytope(vec![
            HalfSpace {
                normal: vec![1.0],
                offset: -1.0,
            },
            HalfSpace {
                normal: vec![-1.0],
                offset: -1.0,
            },
        ]);
        assert!(empty.is_err());
        assert!(ConvexBody::ball(Point::origin(2), 0.0).is_err());
        assert!(ConvexBody::ellipsoid(Point::origin(2), vec![1.0, -1.0]).is_err());
    }

    #[test]
    fn unbounded_polytope_is_allowed() {
        let wedge = ConvexBody::polytope(vec![
            HalfSpace {
                normal: vec![-1.0, 0.0],
                offset: 0.0,
            },
            HalfSpace {
                normal: vec![0.0, -1.0],
                offset: 0.0,
            },
        ])
        .unwrap();
        assert!(!wedge.is_bounded());
        assert!(square().is_bounded());
        let c = wedge.anchor();
        assert!(wedge.contains(&c).unwrap());
        assert!(!wedge.ray_exit(&c, &[1.0, 1.0]).unwrap().is_finite());
    }

    #[test]
    fn parse_text_format() {
        let b: ConvexBody = "ball\n0 0\n1\n".parse().unwrap();
        assert_eq!(b, ConvexBody::unit_ball(2));
        let e: ConvexBody = "# an ellipse\nellipsoid\n0 0\n2 1\n".parse().unwrap();
        assert_eq!(e.dim(), 2);
        let p: ConvexBody = "polytope\n1 0 1\n-1 0 1\n0 1 1\n0 -1 1\n".parse().unwrap();
        assert_eq!(p.ray_exit(&[0.5, 0.0], &[1.0, 0.0]).unwrap().value(), 0.5);
        let h: ConvexBody = "halfspace\n2 1\n".parse().unwrap();
        assert_eq!(h, ConvexBody::upper_half_space(2, 1).unwrap());
        for body in [&b, &e, &p, &h] {
            assert_eq!(&body.to_text().parse::<ConvexBody>().unwrap(), body);
        }
        assert!("cube\n1\n".parse::<ConvexBody>().is_err());
        assert!("ball\n0 0\n".parse::<ConvexBody>().is_err());
        assert!("ball\n0 0\n1 2\n".parse::<ConvexBody>().is_err());
        assert!("polytope\n1\n".parse::<ConvexBody>().is_err());
        assert!("halfspace\n2 1.5\n".parse::<ConvexBody>().is_err());
        assert!(matches!(
            "ball\n0 x\n1\n".parse::<ConvexBody>(),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
