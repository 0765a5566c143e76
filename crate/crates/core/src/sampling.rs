//! Seeded point sources. Everything random in the crate is drawn from a
//! `ChaCha8Rng` so that runs are reproducible for a fixed seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bodies::ConvexBody;
use crate::point::{along, Point};

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Anything that can hand out points one at a time.
pub trait PointSource {
    fn next_point(&mut self) -> Point;
}

impl<F: FnMut() -> Point> PointSource for F {
    fn next_point(&mut self) -> Point {
        self()
    }
}

/// Replays a fixed list of points, cycling when exhausted.
#[derive(Clone, Debug)]
pub struct FixedPoints {
    points: Vec<Point>,
    next: usize,
}

impl FixedPoints {
    pub fn new(points: Vec<Point>) -> Self {
        assert!(!points.is_empty(), "FixedPoints needs at least one point");
        Self { points, next: 0 }
    }
}

impl PointSource for FixedPoints {
    fn next_point(&mut self) -> Point {
        let p = self.points[self.next].clone();
        self.next = (self.next + 1) % self.points.len();
        p
    }
}

/// Uniform direction on the unit sphere of `R^dim`.
pub fn unit_vector(rng: &mut impl Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let n = crate::point::norm(&v);
        if n > 1e-3 && n <= 1.0 {
            return v.into_iter().map(|c| c / n).collect();
        }
    }
}

/// `exp(U(lo, hi))`
pub fn log_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi).exp()
}

/// Star-shaped sampler around the body's anchor point: a random direction,
/// then a radius in `[0, shrink * exit)`. With `shrink < 1` every sample keeps
/// a positive distance from the boundary. Unbounded directions are cut at
/// `reach`.
#[derive(Clone, Debug)]
pub struct BodySampler {
    body: ConvexBody,
    anchor: Point,
    shrink: f64,
    reach: f64,
    rng: SeededRng,
}

impl BodySampler {
    pub fn new(body: ConvexBody, seed: u64) -> Self {
        Self::with_shrink(body, seed, 0.95)
    }

    pub fn with_shrink(body: ConvexBody, seed: u64, shrink: f64) -> Self {
        assert!(shrink > 0.0 && shrink < 1.0, "shrink must lie in (0, 1)");
        let anchor = body.anchor();
        Self {
            body,
            anchor,
            shrink,
            reach: 10.0,
            rng: seeded_rng(seed),
        }
    }

    pub fn body(&self) -> &ConvexBody {
        &self.body
    }

    pub fn rng(&mut self) -> &mut SeededRng {
        &mut self.rng
    }
}

impl PointSource for BodySampler {
    fn next_point(&mut self) -> Point {
        let dim = self.body.dim();
        let u = unit_vector(&mut self.rng, dim);
        let exit = self.body.exit_unchecked(&self.anchor, &u).min(self.reach);
        let r = self.shrink * exit * self.rng.random::<f64>().powf(1.0 / dim as f64);
        Point::from_slice(&along(&self.anchor, r, &u))
    }
}
