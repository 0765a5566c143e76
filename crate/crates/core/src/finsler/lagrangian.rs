use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bodies::ConvexBody;
use crate::error::{Error, Result};
use crate::metric::{scale_ext, Weight};
use crate::point::{check_dim, neg, norm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Smoothness {
    Smooth,
    /// Max-type: continuous but with kinks where the active branch switches.
    Piecewise,
}

type LagrangianFn = dyn Fn(&[f64], &[f64]) -> f64 + Send + Sync;

/// An open convex set a Lagrangian is restricted to, with the minimal
/// normalized margin a point needs to be accepted.
#[derive(Clone, Debug)]
struct Domain {
    body: Arc<ConvexBody>,
    margin: f64,
}

/// Handle to a function `F(x, v) >= 0`, positively homogeneous of degree 1
/// in `v`, defined on the intersection of its domains (all of `R^n` when
/// there are none).
#[derive(Clone)]
pub struct Lagrangian {
    eval: Arc<LagrangianFn>,
    domains: Vec<Domain>,
    dim: usize,
    smoothness: Smoothness,
    label: String,
}

impl Lagrangian {
    pub fn new<F>(label: impl Into<String>, dim: usize, smoothness: Smoothness, eval: F) -> Self
    where
        F: Fn(&[f64], &[f64]) -> f64 + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(eval),
            domains: Vec::new(),
            dim,
            smoothness,
            label: label.into(),
        }
    }

    pub fn restricted_to(mut self, body: Arc<ConvexBody>, margin: f64) -> Self {
        if !self
            .domains
            .iter()
            .any(|d| Arc::ptr_eq(&d.body, &body) && d.margin == margin)
        {
            self.domains.push(Domain { body, margin });
        }
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn smoothness(&self) -> Smoothness {
        self.smoothness
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn in_domain(&self, x: &[f64]) -> bool {
        self.domains.iter().all(|d| d.body.interior_margin(x) >= d.margin)
    }

    pub fn check_point(&self, x: &[f64]) -> Result<()> {
        check_dim(self.dim, x.len())?;
        for d in &self.domains {
            let m = d.body.interior_margin(x);
            if m < d.margin {
                return Err(Error::NotInterior { margin: m });
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: &[f64], v: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        check_dim(self.dim, v.len())?;
        Ok((self.eval)(x, v))
    }

    /// Evaluation without domain or dimension checks.
    pub fn eval_unchecked(&self, x: &[f64], v: &[f64]) -> f64 {
        (self.eval)(x, v)
    }

    fn merged_domains(&self, other: &Self) -> Vec<Domain> {
        let mut out = self.domains.clone();
        for d in &other.domains {
            if !out
                .iter()
                .any(|e| Arc::ptr_eq(&e.body, &d.body) && e.margin == d.margin)
            {
                out.push(d.clone());
            }
        }
        out
    }

    /// `|v|`
    pub fn euclidean(dim: usize) -> Self {
        Self::new("euclidean", dim, Smoothness::Smooth, |_, v| norm(v))
    }

    /// `sqrt(sum_i c_i v_i^2)` with positive coefficients.
    pub fn diagonal_norm(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().any(|c| !(*c > 0.0 && c.is_finite())) {
            return Err(Error::InvalidArgument(
                "diagonal norm needs positive coefficients".into(),
            ));
        }
        let dim = coeffs.len();
        let label = format!("diag{coeffs:?}");
        Ok(Self::new(label, dim, Smoothness::Smooth, move |_, v| {
            v.iter().zip(&coeffs).map(|(vi, c)| c * vi * vi).sum::<f64>().sqrt()
        }))
    }

    /// Poincare upper half-space norm `|v| / x_last` on `{x_last > 0}`.
    pub fn hyperbolic(dim: usize) -> Result<Self> {
        let body = Arc::new(ConvexBody::upper_half_space(dim, dim - 1)?);
        let last = dim - 1;
        Ok(Self::new("hyperbolic", dim, Smoothness::Smooth, move |x, v| norm(v) / x[last]).restricted_to(body, 1e-12))
    }
}

impl fmt::Debug for Lagrangian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lagrangian")
            .field("label", &self.label)
            .field("dim", &self.dim)
            .field("smoothness", &self.smoothness)
            .finish()
    }
}

/// `F(x, -v)`
pub fn reverse_lagrangian(f: &Lagrangian) -> Lagrangian {
    let inner = f.clone();
    Lagrangian {
        eval: Arc::new(move |x, v| inner.eval_unchecked(x, &neg(v))),
        domains: f.domains.clone(),
        dim: f.dim,
        smoothness: f.smoothness,
        label: format!("reverse({})", f.label),
    }
}

/// `(1 - t) F1 + t F2`
pub fn weighted_sum_lagrangian(f1: &Lagrangian, f2: &Lagrangian, t: Weight) -> Result<Lagrangian> {
    check_dim(f1.dim, f2.dim)?;
    let (a, b) = (f1.clone(), f2.clone());
    let smoothness = if f1.smoothness == Smoothness::Smooth && f2.smoothness == Smoothness::Smooth {
        Smoothness::Smooth
    } else {
        Smoothness::Piecewise
    };
    Ok(Lagrangian {
        eval: Arc::new(move |x, v| {
            scale_ext(t.complement(), a.eval_unchecked(x, v)) + scale_ext(t.value(), b.eval_unchecked(x, v))
        }),
        domains: f1.merged_domains(f2),
        dim: f1.dim,
        smoothness,
        label: format!("sum({}, {}; {})", f1.label, f2.label, t.value()),
    })
}

/// `max{(1 - t) F1, t F2}`
pub fn weighted_max_lagrangian(f1: &Lagrangian, f2: &Lagrangian, t: Weight) -> Result<Lagrangian> {
    check_dim(f1.dim, f2.dim)?;
    let (a, b) = (f1.clone(), f2.clone());
    Ok(Lagrangian {
        eval: Arc::new(move |x, v| {
            scale_ext(t.complement(), a.eval_unchecked(x, v)).max(scale_ext(t.value(), b.eval_unchecked(x, v)))
        }),
        domains: f1.merged_domains(f2),
        dim: f1.dim,
        smoothness: Smoothness::Piecewise,
        label: format!("max({}, {}; {})", f1.label, f2.label, t.value()),
    })
}

/// Plain `max{F1, F2}` without weights.
pub fn max_lagrangian(f1: &Lagrangian, f2: &Lagrangian) -> Result<Lagrangian> {
    check_dim(f1.dim, f2.dim)?;
    let (a, b) = (f1.clone(), f2.clone());
    Ok(Lagrangian {
        eval: Arc::new(move |x, v| a.eval_unchecked(x, v).max(b.eval_unchecked(x, v))),
        domains: f1.merged_domains(f2),
        dim: f1.dim,
        smoothness: Smoothness::Piecewise,
        label: format!("max({}, {})", f1.label, f2.label),
    })
}

/// Plain `F1 + F2`.
pub fn sum_lagrangian(f1: &Lagrangian, f2: &Lagrangian) -> Result<Lagrangian> {
    check_dim(f1.dim, f2.dim)?;
    let (a, b) = (f1.clone(), f2.clone());
    Ok(Lagrangian {
        eval: Arc::new(move |x, v| a.eval_unchecked(x, v) + b.eval_unchecked(x, v)),
        domains: f1.merged_domains(f2),
        dim: f1.dim,
        smoothness: if f1.smoothness == Smoothness::Smooth && f2.smoothness == Smoothness::Smooth {
            Smoothness::Smooth
        } else {
            Smoothness::Piecewise
        },
        label: format!("sum({}, {})", f1.label, f2.label),
    })
}

/// `(1 - t) F(x, v) + t F(x, -v)`
pub fn arith_family(f: &Lagrangian, t: Weight) -> Lagrangian {
    let mut out =
        weighted_sum_lagrangian(f, &reverse_lagrangian(f), t).expect("a Lagrangian and its reverse share a dimension");
    out.label = format!("arith({}, {})", f.label, t.value());
    out
}

/// `max{(1 - t) F(x, v), t F(x, -v)}`
pub fn max_family(f: &Lagrangian, t: Weight) -> Lagrangian {
    let mut out =
        weighted_max_lagrangian(f, &reverse_lagrangian(f), t).expect("a Lagrangian and its reverse share a dimension");
    out.label = format!("maxfam({}, {})", f.label, t.value());
    out
}
