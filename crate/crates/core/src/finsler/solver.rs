//! Discretized geodesic solver.
//!
//! The induced distance `d(F)(x, y)` is approximated from above by minimizing
//! the quadrature length of polylines with fixed endpoints. Interior nodes
//! move by coordinate-wise pattern search, which needs no derivatives and
//! copes with the kinks of max-type Lagrangians. A converged level is
//! refined by inserting midpoints (`N -> 2N - 1`) and polished again until
//! the relative change between two levels drops below the tolerance.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lagrangian::Lagrangian;
use super::lagrangian::Smoothness;
use super::path::{path_length, PolylinePath, Quadrature};
use crate::error::{Error, Result};
use crate::point::{check_dim, distance, dot, lerp, norm, Point};
use crate::sampling::{seeded_rng, unit_vector};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeodesicOptions {
    /// Node count of the first level, endpoints included.
    pub nodes: usize,
    /// Gauss-Legendre points per segment.
    pub quadrature_order: usize,
    /// Relative change between refinement levels accepted as converged.
    pub tolerance: f64,
    /// Pattern-search sweep budget per start, summed over levels.
    pub max_iterations: usize,
    pub multistart: usize,
    pub seed: u64,
    /// Refinement stops before exceeding this many nodes.
    pub max_nodes: usize,
    /// Amplitude of the perturbed starts relative to the chord length.
    pub perturbation: f64,
}

impl Default for GeodesicOptions {
    fn default() -> Self {
        Self {
            nodes: 33,
            quadrature_order: 4,
            tolerance: 1e-4,
            max_iterations: 20_000,
            multistart: 3,
            seed: 0,
            max_nodes: 257,
            perturbation: 0.1,
        }
    }
}

impl GeodesicOptions {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidOptions(msg.into()));
        if self.nodes < 2 {
            return bad("node count must be >= 2");
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return bad("tolerance must be positive");
        }
        if self.quadrature_order == 0 {
            return bad("quadrature order must be >= 1");
        }
        if self.multistart == 0 {
            return bad("multistart count must be >= 1");
        }
        if self.max_nodes < self.nodes {
            return bad("max_nodes must be >= nodes");
        }
        if !(self.perturbation >= 0.0 && self.perturbation.is_finite()) {
            return bad("perturbation must be nonnegative");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeodesicResult {
    #[serde(rename = "nodes")]
    pub path: PolylinePath,
    pub length: f64,
    pub converged: bool,
    pub iterations: usize,
    /// `(node count, length)` at the end of each level.
    pub history: Vec<(usize, f64)>,
    /// Which start produced the result; 0 is the straight segment.
    pub start: usize,
}

impl GeodesicResult {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

/// Upper approximation of `d(F)(x, y)`.
pub fn induced_distance(f: &Lagrangian, x: &Point, y: &Point, opts: &GeodesicOptions) -> Result<GeodesicResult> {
    opts.validate()?;
    check_dim(f.dim(), x.dim())?;
    check_dim(f.dim(), y.dim())?;
    f.check_point(x)?;
    f.check_point(y)?;
    let quad = Quadrature::gauss_legendre(opts.quadrature_order)?;
    if x == y {
        return Ok(GeodesicResult {
            path: PolylinePath::new(vec![x.clone(), y.clone()])?,
            length: 0.0,
            converged: true,
            iterations: 0,
            history: vec![(2, 0.0)],
            start: 0,
        });
    }
    let starts: Vec<Vec<Vec<f64>>> = (0..opts.multistart).map(|k| initial_nodes(f, x, y, opts, k)).collect();
    let results: Vec<GeodesicResult> = starts
        .into_par_iter()
        .enumerate()
        .map(|(k, nodes)| solve_from(f, &quad, nodes, opts, k))
        .collect::<Result<_>>()?;
    let mut best: Option<GeodesicResult> = None;
    for r in results {
        // Earlier starts win ties.
        let better = best.as_ref().is_none_or(|b| r.length < b.length - 1e-12);
        if better {
            best = Some(r);
        }
    }
    Ok(best.expect("multistart >= 1"))
}

fn initial_nodes(f: &Lagrangian, x: &Point, y: &Point, opts: &GeodesicOptions, k: usize) -> Vec<Vec<f64>> {
    let n = opts.nodes;
    let straight: Vec<Vec<f64>> = (0..n).map(|i| lerp(x, y, i as f64 / (n - 1) as f64)).collect();
    if k == 0 || opts.perturbation == 0.0 {
        return straight;
    }
    let mut rng = seeded_rng(opts.seed.wrapping_add(k as u64));
    let basis = normal_basis(&crate::point::sub(y, x));
    if basis.is_empty() {
        return straight;
    }
    let mix = unit_vector(&mut rng, basis.len());
    let dir: Vec<f64> = (0..x.dim())
        .map(|c| basis.iter().zip(&mix).map(|(b, m)| m * b[c]).sum())
        .collect();
    let harmonic = rng.random_range(1..=2) as f64;
    let amplitude = opts.perturbation * distance(x, y) * rng.random_range(0.5..1.0);
    straight
        .into_iter()
        .enumerate()
        .map(|(i, base)| {
            let s = i as f64 / (n - 1) as f64;
            let mut scale = amplitude * (harmonic * std::f64::consts::PI * s).sin();
            // Pull back toward the chord until the node is admissible.
            for _ in 0..60 {
                let cand: Vec<f64> = base.iter().zip(&dir).map(|(b, d)| b + scale * d).collect();
                if f.in_domain(&cand) {
                    return cand;
                }
                scale *= 0.5;
            }
            base
        })
        .collect()
}

const SUFFICIENT_DECREASE: f64 = 1e-4;
const SWEEPS_PER_STEP: usize = 50;
const QUASI_NEWTON_ITERATIONS: usize = 2_000;

/// Orthonormal basis of the hyperplane orthogonal to `d`.
fn normal_basis(d: &[f64]) -> Vec<Vec<f64>> {
    let dim = d.len();
    let dn = norm(d);
    let mut basis: Vec<Vec<f64>> = vec![d.iter().map(|c| c / dn).collect()];
    for k in 0..dim {
        let mut e = vec![0.0; dim];
        e[k] = 1.0;
        for b in &basis {
            let c = dot(&e, b);
            e.iter_mut().zip(b).for_each(|(ei, bi)| *ei -= c * bi);
        }
        let n = norm(&e);
        if n > 1e-8 {
            basis.push(e.into_iter().map(|c| c / n).collect());
        }
        if basis.len() == dim {
            break;
        }
    }
    basis.remove(0);
    basis
}

/// Optimizer state for one start. Interior nodes only move along `dirs`,
/// an orthonormal basis of the chord's normal space, so every node keeps its
/// uniform chord parameter. Sliding along the path would leave the length
/// unchanged but lets nodes bunch up and leave long, badly integrated
/// segments behind.
struct Search<'a> {
    f: &'a Lagrangian,
    quad: &'a Quadrature,
    dirs: Vec<Vec<f64>>,
    scratch: Vec<f64>,
}

impl Search<'_> {
    fn segment(&mut self, a: &[f64], b: &[f64]) -> f64 {
        self.quad.segment(self.f, a, b, &mut self.scratch)
    }

    /// Cost of the two segments touching interior node `i`.
    fn local(&mut self, nodes: &[Vec<f64>], i: usize) -> f64 {
        self.segment(&nodes[i - 1], &nodes[i]) + self.segment(&nodes[i], &nodes[i + 1])
    }

    fn shift(&self, node: &mut [f64], k: usize, delta: f64) {
        node.iter_mut().zip(&self.dirs[k]).for_each(|(c, d)| *c += delta * d);
    }

    fn try_move(
        &mut self,
        nodes: &mut [Vec<f64>],
        i: usize,
        k: usize,
        delta: f64,
        current: f64,
        rho: f64,
    ) -> Option<f64> {
        let saved = nodes[i].clone();
        self.shift(&mut nodes[i], k, delta);
        if self.f.in_domain(&nodes[i]) {
            let cost = self.local(nodes, i);
            if cost < current - rho.max(1e-15 * current.abs()) {
                return Some(cost);
            }
        }
        nodes[i] = saved;
        None
    }

    /// Compass search over interior nodes; returns the sweep count.
    fn run(&mut self, nodes: &mut [Vec<f64>], mut step: f64, min_step: f64, budget: &mut usize) -> usize {
        let n = nodes.len();
        let mut sweeps = 0;
        let mut at_this_step = 0;
        while step >= min_step && *budget > 0 && !self.dirs.is_empty() {
            let mut improved = false;
            for i in 1..n - 1 {
                for k in 0..self.dirs.len() {
                    let mut current = self.local(nodes, i);
                    // Sufficient decrease: a fraction of what a transverse move
                    // of size `step` gains on a locally straight chain.
                    let half = 0.5 * distance(&nodes[i - 1], &nodes[i + 1]);
                    let rho = if half > 0.0 {
                        SUFFICIENT_DECREASE * current.abs() * (step / half).powi(2)
                    } else {
                        0.0
                    };
                    for dir in [1.0, -1.0] {
                        let Some(cost) = self.try_move(nodes, i, k, dir * step, current, rho) else {
                            continue;
                        };
                        current = cost;
                        improved = true;
                        let mut reach = 2.0 * step;
                        for _ in 0..30 {
                            match self.try_move(nodes, i, k, dir * reach, current, rho) {
                                Some(c) => current = c,
                                None => break,
                            }
                            reach *= 2.0;
                        }
                        break;
                    }
                }
            }
            sweeps += 1;
            at_this_step += 1;
            *budget -= 1;
            if !improved || at_this_step >= SWEEPS_PER_STEP {
                step *= 0.5;
                at_this_step = 0;
            }
        }
        sweeps
    }

    /// One refinement level: quasi-Newton first for smooth Lagrangians, then
    /// compass search, which also polishes kinks the gradient step misses.
    fn level(&mut self, nodes: &mut Vec<Vec<f64>>, step: f64, min_step: f64, scale: f64, budget: &mut usize) -> usize {
        let mut iterations = 0;
        if self.f.smoothness() == Smoothness::Smooth && !self.dirs.is_empty() {
            iterations += self.quasi_newton(nodes, scale, QUASI_NEWTON_ITERATIONS);
        }
        iterations + self.run(nodes, step, min_step, budget)
    }

    fn total(&mut self, nodes: &[Vec<f64>]) -> f64 {
        if !nodes[1..nodes.len() - 1].iter().all(|n| self.f.in_domain(n)) {
            return f64::INFINITY;
        }
        (0..nodes.len() - 1)
            .map(|i| self.segment(&nodes[i], &nodes[i + 1]))
            .sum()
    }

    /// Central-difference gradient of the total length with respect to the
    /// transverse offsets. Only the two segments at a node depend on it.
    fn gradient(&mut self, nodes: &mut [Vec<f64>], h: f64) -> Option<Vec<f64>> {
        let n = nodes.len();
        let m = self.dirs.len();
        let mut g = Vec::with_capacity((n - 2) * m);
        for i in 1..n - 1 {
            let orig = nodes[i].clone();
            for k in 0..m {
                self.shift(&mut nodes[i], k, h);
                let up = self.f.in_domain(&nodes[i]).then(|| self.local(nodes, i));
                nodes[i].clone_from(&orig);
                self.shift(&mut nodes[i], k, -h);
                let down = self.f.in_domain(&nodes[i]).then(|| self.local(nodes, i));
                nodes[i].clone_from(&orig);
                g.push((up? - down?) / (2.0 * h));
            }
        }
        Some(g)
    }

    fn displaced(&self, base: &[Vec<f64>], z: &[f64]) -> Vec<Vec<f64>> {
        let m = self.dirs.len();
        let mut out = base.to_vec();
        for (idx, c) in z.iter().enumerate() {
            let node = &mut out[1 + idx / m];
            node.iter_mut().zip(&self.dirs[idx % m]).for_each(|(x, d)| *x += c * d);
        }
        out
    }

    /// Limited-memory BFGS with Armijo backtracking on the transverse
    /// offsets. Returns the iteration count.
    fn quasi_newton(&mut self, nodes: &mut Vec<Vec<f64>>, scale: f64, max_iter: usize) -> usize {
        const MEMORY: usize = 8;
        let h = 1e-7 * scale;
        let base = nodes.clone();
        let mut z = vec![0.0; (nodes.len() - 2) * self.dirs.len()];
        let mut fz = self.total(nodes);
        let Some(mut g) = self.gradient(nodes, h) else { return 0 };
        let mut mem: Vec<(Vec<f64>, Vec<f64>, f64)> = Vec::new();
        let mut iters = 0;
        while iters < max_iter {
            iters += 1;
            // Two-loop recursion.
            let mut q = g.clone();
            let mut alphas = Vec::with_capacity(mem.len());
            for (s, y, rho) in mem.iter().rev() {
                let a = rho * dot(s, &q);
                q.iter_mut().zip(y).for_each(|(qi, yi)| *qi -= a * yi);
                alphas.push(a);
            }
            let gamma = mem
                .last()
                .map_or(1e-2 * scale / norm(&g).max(1e-300), |(s, y, _)| dot(s, y) / dot(y, y));
            q.iter_mut().for_each(|qi| *qi *= gamma);
            for ((s, y, rho), a) in mem.iter().zip(alphas.into_iter().rev()) {
                let b = rho * dot(y, &q);
                q.iter_mut().zip(s).for_each(|(qi, si)| *qi += (a - b) * si);
            }
            let slope = -dot(&g, &q);
            if slope >= 0.0 {
                if mem.is_empty() {
                    break;
                }
                mem.clear();
                continue;
            }
            let mut alpha = 1.0;
            let mut accepted = None;
            for _ in 0..40 {
                let trial: Vec<f64> = z.iter().zip(&q).map(|(a, d)| a - alpha * d).collect();
                let cand = self.displaced(&base, &trial);
                let ft = self.total(&cand);
                if ft <= fz + 1e-4 * alpha * slope {
                    accepted = Some((trial, cand, ft));
                    break;
                }
                alpha *= 0.5;
            }
            let Some((z_new, mut cand, f_new)) = accepted else {
                break;
            };
            let Some(g_new) = self.gradient(&mut cand, h) else {
                break;
            };
            let s: Vec<f64> = z_new.iter().zip(&z).map(|(a, b)| a - b).collect();
            let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
            let sy = dot(&s, &y);
            let decrease = fz - f_new;
            *nodes = cand;
            z = z_new;
            g = g_new;
            fz = f_new;
            if sy > 1e-12 * norm(&s) * norm(&y) {
                mem.push((s, y, 1.0 / sy));
                if mem.len() > MEMORY {
                    mem.remove(0);
                }
            }
            if decrease <= 1e-15 * fz.abs() {
                break;
            }
        }
        iters
    }
}

fn solve_from(
    f: &Lagrangian,
    quad: &Quadrature,
    mut nodes: Vec<Vec<f64>>,
    opts: &GeodesicOptions,
    start: usize,
) -> Result<GeodesicResult> {
    let first = nodes[0].clone();
    let last = nodes[nodes.len() - 1].clone();
    let scale = distance(&first, &last).max(1e-300);
    let min_step = 1e-9 * scale;
    let mut budget = opts.max_iterations;
    let mut search = Search {
        f,
        quad,
        dirs: normal_basis(&crate::point::sub(&last, &first)),
        scratch: Vec::with_capacity(first.len()),
    };
    let mut iterations = 0;
    // Nested iteration: solve on every other node first so that the smooth
    // part of the correction is found where compass search is cheap.
    let target = nodes.len();
    let mut chain = vec![target];
    while chain[chain.len() - 1] > 3 && (chain[chain.len() - 1] - 1) % 2 == 0 {
        let m = chain[chain.len() - 1];
        chain.push((m - 1) / 2 + 1);
    }
    if chain.len() > 1 {
        let stride = 1 << (chain.len() - 1);
        nodes = nodes.into_iter().step_by(stride).collect();
        for _ in 1..chain.len() {
            let step = scale / (nodes.len() - 1) as f64;
            iterations += search.level(&mut nodes, step, min_step, scale, &mut budget);
            nodes = refine(&nodes);
        }
    }
    let mut history: Vec<(usize, f64)> = Vec::new();
    let mut converged = false;
    let mut step = scale / (nodes.len() - 1) as f64;
    loop {
        iterations += search.level(&mut nodes, step, min_step, scale, &mut budget);
        let path = to_path(&nodes)?;
        let len = path_length(f, &path, quad)?;
        if let Some(&(_, prev)) = history.last() {
            if (prev - len).abs() <= opts.tolerance * len.abs() {
                converged = true;
            }
        }
        history.push((nodes.len(), len));
        if converged || budget == 0 || 2 * nodes.len() - 1 > opts.max_nodes {
            break;
        }
        nodes = refine(&nodes);
        step = 0.5 * scale / (nodes.len() - 1) as f64;
    }
    let path = to_path(&nodes)?;
    let length = path_length(f, &path, quad)?;
    Ok(GeodesicResult {
        path,
        length,
        converged,
        iterations,
        history,
        start,
    })
}

fn refine(nodes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(2 * nodes.len() - 1);
    for w in nodes.windows(2) {
        out.push(w[0].clone());
        out.push(lerp(&w[0], &w[1], 0.5));
    }
    out.push(nodes[nodes.len() - 1].clone());
    out
}

fn to_path(nodes: &[Vec<f64>]) -> Result<PolylinePath> {
    PolylinePath::new(nodes.iter().map(|n| Point::from_slice(n)).collect())
}
