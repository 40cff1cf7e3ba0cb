//! Body-valued transforms: the tau-family of projection bodies built from
//! surface measures and of centroid bodies built from star bodies, plus
//! their polars.
//!
//! Every transform exposes an evaluator that answers support queries at
//! arbitrary directions (used by the mixed functionals, where sampling and
//! re-interpolating would waste accuracy) and a sampler that lays the body
//! down on a grid.

use crate::body::{Body, SupportEval, SupportField};
use crate::density::{alpha_np_tau, c_np, c_np_tau, pow_fast, psi_tau_pow};
use crate::error::{Error, Result};
use crate::functional::MeasureContext;
use crate::grid::SphereGrid;
use crate::surfmeas::SurfaceMeasure;
use crate::vecn::{dot, pairwise_sum_by, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// How a transform result was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    DirectPsiTau,
    PlusMinusCombination,
    SpatialMc,
}

/// Parameter block attached to a transform result.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransformParams {
    pub p: f64,
    pub tau: f64,
    pub density: String,
    pub grid_resolution: usize,
    pub source: String,
}

/// A transform output: a support field (direct transforms) or a radial
/// field (polars), with its parameters and computation route.
#[derive(Debug, Clone)]
pub struct TransformResult {
    pub field: TransformField,
    pub params: TransformParams,
    pub route: Route,
}

#[derive(Debug, Clone)]
pub enum TransformField {
    Support(SupportField),
    Radial(crate::body::RadialField),
}

impl TransformResult {
    pub fn as_body(&self) -> Body {
        match &self.field {
            TransformField::Support(f) => Body::Support(f.clone()),
            TransformField::Radial(f) => Body::Radial(f.clone()),
        }
    }
}

/// Kernel selector for projection-type transforms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProjKernel {
    /// `(u . v)_+^p` against `c_{n,p}`.
    Plus,
    /// `(u . v)_-^p` against `c_{n,p}`.
    Minus,
    /// `psi_tau(u . v)^p` against `c_{n,p}(tau)`.
    Tau(f64),
}

/// Support evaluator of a projection-type body over a surface measure.
pub struct ProjBodyEval<'a> {
    measure: &'a SurfaceMeasure,
    p: f64,
    kernel: ProjKernel,
    coeff: f64,
}

impl<'a> ProjBodyEval<'a> {
    pub fn new(measure: &'a SurfaceMeasure, kernel: ProjKernel) -> Result<Self> {
        let p = measure.p();
        let n = measure.dim();
        if let ProjKernel::Tau(tau) = kernel {
            if !(-1.0..=1.0).contains(&tau) {
                return Err(Error::InvalidArgument("tau must lie in [-1, 1]".into()));
            }
        }
        let coeff = match kernel {
            ProjKernel::Plus | ProjKernel::Minus => c_np(n, p),
            ProjKernel::Tau(tau) => c_np_tau(n, p, tau),
        };
        Ok(ProjBodyEval { measure, p, kernel, coeff })
    }

    /// `h(u)^p`.
    pub fn support_pow_at(&self, u: Vec3) -> f64 {
        let p = self.p;
        let value = match self.kernel {
            ProjKernel::Plus => self.measure.integrate(|v| pow_fast(dot(u, v).max(0.0), p)),
            ProjKernel::Minus => self.measure.integrate(|v| pow_fast((-dot(u, v)).max(0.0), p)),
            ProjKernel::Tau(tau) => self.measure.integrate(|v| psi_tau_pow(dot(u, v), tau, p)),
        };
        self.coeff * value
    }
}

impl SupportEval for ProjBodyEval<'_> {
    fn support_at(&self, u: Vec3) -> f64 {
        self.support_pow_at(u).powf(1.0 / self.p)
    }
}

/// Samples a support evaluator onto a grid, failing loudly (with the node
/// index) if any sampled value is not strictly positive.
pub fn sample_positive_support<E: SupportEval + ?Sized>(
    eval: &E,
    grid: Arc<SphereGrid>,
) -> Result<SupportField> {
    let values: Vec<f64> = grid.nodes().par_iter().map(|&u| eval.support_at(u)).collect();
    if let Some(k) = values.iter().position(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::NumericDegeneracy(format!(
            "transform support vanished at node {k} (direction {:?})",
            grid.node(k)
        )));
    }
    SupportField::new(grid, values)
}

/// Nonsymmetric projection body `h^p = c_{n,p} * integral (u.v)_+^p dS`.
pub fn proj_body_plus(s: &SurfaceMeasure, grid: Arc<SphereGrid>) -> Result<SupportField> {
    sample_positive_support(&ProjBodyEval::new(s, ProjKernel::Plus)?, grid)
}

/// Mirror of [`proj_body_plus`] with the negative part.
pub fn proj_body_minus(s: &SurfaceMeasure, grid: Arc<SphereGrid>) -> Result<SupportField> {
    sample_positive_support(&ProjBodyEval::new(s, ProjKernel::Minus)?, grid)
}

/// The tau-weighted projection body, direct route.
pub fn proj_body_tau(s: &SurfaceMeasure, grid: Arc<SphereGrid>, tau: f64) -> Result<SupportField> {
    sample_positive_support(&ProjBodyEval::new(s, ProjKernel::Tau(tau))?, grid)
}

/// The tau-weighted projection body through the plus/minus combination
/// `g1 . plus +_p g2 . minus`; agrees with the direct route to roundoff and
/// serves as its cross-check.
pub fn proj_body_tau_combination(
    s: &SurfaceMeasure,
    grid: Arc<SphereGrid>,
    tau: f64,
) -> Result<SupportField> {
    let p = s.p();
    let w = crate::density::g_pair(p, tau);
    let plus = proj_body_plus(s, grid.clone())?;
    let minus = proj_body_minus(s, grid)?;
    crate::body::lp_minkowski_combine(w.g1, &plus, w.g2, &minus, p)
}

/// Support evaluator of a centroid-type body of a star body: the transform
/// of `rho^{p + 1/s}` against the sphere measure, normalized by `mu(K)`
/// computed on the same grid.
pub struct CentroidBodyEval {
    grid: Arc<SphereGrid>,
    /// `rho(v)^{p + 1/s} * sphere_weight(v)` per node.
    moment_weights: Vec<f64>,
    p: f64,
    tau: f64,
    norm: f64,
    mu: f64,
}

impl CentroidBodyEval {
    pub fn new(body: &Body, ctx: &MeasureContext, p: f64, tau: f64) -> Result<Self> {
        if p < 1.0 {
            return Err(Error::InvalidArgument("centroid body needs p >= 1".into()));
        }
        if !(-1.0..=1.0).contains(&tau) {
            return Err(Error::InvalidArgument("tau must lie in [-1, 1]".into()));
        }
        let rho = ctx.radial_values(body)?;
        let mu = crate::functional::mu_from_radial_values(ctx, &rho)?;
        if !(mu > 0.0) {
            return Err(Error::NumericDegeneracy("mu(K) not positive".into()));
        }
        let inv_s = 1.0 / ctx.s();
        let exp = p + inv_s;
        let moment_weights: Vec<f64> = rho
            .iter()
            .zip(ctx.sphere_weights())
            .map(|(&r, &w)| r.powf(exp) * w)
            .collect();
        let alpha = alpha_np_tau(ctx.dim(), p, tau);
        let norm = 2.0 / (alpha * (p + inv_s) * mu);
        Ok(CentroidBodyEval {
            grid: ctx.grid().clone(),
            moment_weights,
            p,
            tau,
            norm,
            mu,
        })
    }

    /// `mu(K)` as used in the normalization.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// `h(u)^p`.
    pub fn support_pow_at(&self, u: Vec3) -> f64 {
        let nodes = self.grid.nodes();
        let sum = pairwise_sum_by(nodes.len(), &|k| {
            psi_tau_pow(dot(u, nodes[k]), self.tau, self.p) * self.moment_weights[k]
        });
        self.norm * sum
    }
}

impl SupportEval for CentroidBodyEval {
    fn support_at(&self, u: Vec3) -> f64 {
        self.support_pow_at(u).powf(1.0 / self.p)
    }
}

/// The tau-weighted centroid body on a grid (sphere-form quadrature).
pub fn centroid_body_tau(
    body: &Body,
    ctx: &MeasureContext,
    grid: Arc<SphereGrid>,
    p: f64,
    tau: f64,
) -> Result<SupportField> {
    sample_positive_support(&CentroidBodyEval::new(body, ctx, p, tau)?, grid)
}

/// The plus and minus centroid bodies in one pass over node pairs. Both
/// share the moment sums `S+(u) = sum over t>0 of t^p rho^{p+1/s} w` and the
/// mirrored `S-`, so extracting them together halves the dominant kernel;
/// the whole tau-family then follows from the pair-weight combination.
pub fn centroid_plus_minus(
    body: &Body,
    ctx: &MeasureContext,
    grid: Arc<SphereGrid>,
    p: f64,
) -> Result<(SupportField, SupportField)> {
    let eval = CentroidBodyEval::new(body, ctx, p, 1.0)?;
    let nodes = ctx.grid().nodes();
    let weights = &eval.moment_weights;
    // at tau = 1 the evaluator constant is 2/(c 2^p (p+1/s) mu); the raw
    // plus/minus coefficient 2/(c (p+1/s) mu) recovers it times 2^p
    let coeff = eval.norm * (2.0f64).powf(p);
    let sums: Vec<(f64, f64)> = grid
        .nodes()
        .par_iter()
        .map(|&u| {
            let mut acc = (0.0, 0.0);
            for (v, w) in nodes.iter().zip(weights) {
                let t = dot(u, *v);
                if t > 0.0 {
                    acc.0 += pow_fast(t, p) * w;
                } else if t < 0.0 {
                    acc.1 += pow_fast(-t, p) * w;
                }
            }
            acc
        })
        .collect();
    let build = |pick: fn(&(f64, f64)) -> f64| -> Result<SupportField> {
        let values: Vec<f64> = sums
            .iter()
            .map(|s| (coeff * pick(s)).powf(1.0 / p))
            .collect();
        if let Some(k) = values.iter().position(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(Error::NumericDegeneracy(format!(
                "centroid moment field vanished at node {k}"
            )));
        }
        SupportField::new(grid.clone(), values)
    };
    Ok((build(|s| s.0)?, build(|s| s.1)?))
}

/// Spatial Monte Carlo route for the centroid body: per-node ratio
/// estimator of the moment integral over `mu` restricted to the body.
/// Returns the sampled field and a per-node standard error for the support
/// values. Deterministic per seed; chunks merge in fixed order.
pub fn centroid_body_tau_mc(
    body: &Body,
    w: &crate::density::HomogeneousDensity,
    p: f64,
    tau: f64,
    n_samples: u64,
    seed: u64,
    grid: Arc<SphereGrid>,
) -> Result<(SupportField, Vec<f64>)> {
    if n_samples < 10_000 {
        return Err(Error::InvalidArgument("need at least 10000 samples".into()));
    }
    if p < 1.0 || !(-1.0..=1.0).contains(&tau) {
        return Err(Error::InvalidArgument("bad p or tau".into()));
    }
    let dim = body.dim();
    let mut lo = [0.0; 3];
    let mut hi = [0.0; 3];
    for d in 0..dim {
        let mut e = [0.0; 3];
        e[d] = 1.0;
        hi[d] = body.support(e) * (1.0 + 1e-12);
        e[d] = -1.0;
        lo[d] = -body.support(e) * (1.0 + 1e-12);
    }
    let m = grid.len();
    const CHUNK: u64 = 1 << 13;
    let chunks: Vec<u64> = (0..n_samples.div_ceil(CHUNK)).collect();
    struct Acc {
        sx: Vec<f64>,
        sxx: Vec<f64>,
        sxy: Vec<f64>,
        sy: f64,
        syy: f64,
    }
    let partial: Vec<Acc> = chunks
        .par_iter()
        .map(|&c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c + 1);
            let count = CHUNK.min(n_samples - c * CHUNK);
            let mut acc = Acc {
                sx: vec![0.0; m],
                sxx: vec![0.0; m],
                sxy: vec![0.0; m],
                sy: 0.0,
                syy: 0.0,
            };
            for _ in 0..count {
                let mut x = [0.0; 3];
                for d in 0..dim {
                    x[d] = rng.gen_range(lo[d]..hi[d]);
                }
                let r = crate::vecn::norm(x);
                if r == 0.0 {
                    continue;
                }
                let inside = match body.radial([x[0] / r, x[1] / r, x[2] / r]) {
                    Ok(rad) => r <= rad,
                    Err(_) => false,
                };
                if !inside {
                    continue;
                }
                let omega = w.eval(x).unwrap_or(0.0);
                acc.sy += omega;
                acc.syy += omega * omega;
                for (k, &node) in grid.nodes().iter().enumerate() {
                    let t = psi_tau_pow(dot(node, x), tau, p) * omega;
                    acc.sx[k] += t;
                    acc.sxx[k] += t * t;
                    acc.sxy[k] += t * omega;
                }
            }
            acc
        })
        .collect();
    let mut sx = vec![0.0; m];
    let mut sxx = vec![0.0; m];
    let mut sxy = vec![0.0; m];
    let mut sy = 0.0;
    let mut syy = 0.0;
    for a in &partial {
        for k in 0..m {
            sx[k] += a.sx[k];
            sxx[k] += a.sxx[k];
            sxy[k] += a.sxy[k];
        }
        sy += a.sy;
        syy += a.syy;
    }
    if !(sy > 0.0) {
        return Err(Error::NumericDegeneracy("no accepted sample mass".into()));
    }
    let n = n_samples as f64;
    let alpha = alpha_np_tau(dim, p, tau);
    let ybar = sy / n;
    let var_y = (syy / n - ybar * ybar).max(0.0);
    let mut values = vec![0.0; m];
    let mut errors = vec![0.0; m];
    for k in 0..m {
        let xbar = sx[k] / n;
        let ratio = xbar / ybar;
        let hp = 2.0 * ratio / alpha;
        if !(hp > 0.0) {
            return Err(Error::NumericDegeneracy(format!(
                "monte carlo support vanished at node {k}"
            )));
        }
        let h = hp.powf(1.0 / p);
        // delta-method standard error of the ratio estimator, pushed
        // through h = (2 R / alpha)^{1/p}
        let var_x = (sxx[k] / n - xbar * xbar).max(0.0);
        let cov = sxy[k] / n - xbar * ybar;
        let var_r = (var_x - 2.0 * ratio * cov + ratio * ratio * var_y).max(0.0)
            / (ybar * ybar * n);
        let se_h = var_r.sqrt() / ratio.abs() * h / p;
        values[k] = h;
        errors[k] = se_h;
    }
    Ok((SupportField::new(grid, values)?, errors))
}

/// Polar of a transform output: nodewise reciprocal, tagged as a radial
/// field.
pub fn polar_of(result: &TransformResult) -> Result<TransformResult> {
    match &result.field {
        TransformField::Support(f) => Ok(TransformResult {
            field: TransformField::Radial(crate::body::polar_field(f)),
            params: result.params.clone(),
            route: result.route,
        }),
        TransformField::Radial(_) => Err(Error::InvalidArgument(
            "polar of a radial transform result is not defined".into(),
        )),
    }
}

/// Convenience wrapper assembling a tagged projection-body result.
pub fn proj_transform(
    s: &SurfaceMeasure,
    grid: Arc<SphereGrid>,
    tau: f64,
    source: &str,
) -> Result<TransformResult> {
    let field = proj_body_tau(s, grid.clone(), tau)?;
    Ok(TransformResult {
        field: TransformField::Support(field),
        params: TransformParams {
            p: s.p(),
            tau,
            density: s.density_label().to_string(),
            grid_resolution: grid.resolution(),
            source: source.to_string(),
        },
        route: Route::DirectPsiTau,
    })
}

/// Convenience wrapper assembling a tagged centroid-body result.
pub fn centroid_transform(
    body: &Body,
    ctx: &MeasureContext,
    grid: Arc<SphereGrid>,
    p: f64,
    tau: f64,
    source: &str,
) -> Result<TransformResult> {
    let field = centroid_body_tau(body, ctx, grid.clone(), p, tau)?;
    Ok(TransformResult {
        field: TransformField::Support(field),
        params: TransformParams {
            p,
            tau,
            density: ctx.density().label().to_string(),
            grid_resolution: grid.resolution(),
            source: source.to_string(),
        },
        route: Route::DirectPsiTau,
    })
}
