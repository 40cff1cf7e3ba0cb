//! Scalar functionals of a homogeneous measure: mu(K), the L_p mixed
//! measure mu_p(K, L), the mixed volume V_{mu,p}(K, L), the dual mixed form,
//! and seeded Monte Carlo oracles for cross-checking the quadrature routes.

use crate::body::{Body, RadialEval, SupportEval};
use crate::density::HomogeneousDensity;
use crate::error::{Error, Result};
use crate::grid::SphereGrid;
use crate::surfmeas::SurfaceMeasure;
use crate::vecn::{dot, norm, pairwise_sum_by, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::sync::Arc;

/// A density paired with a quadrature grid; caches the `s` exponent and the
/// per-node weights `a(u) * quadrature weight` that realize integration
/// against the measure restricted to the sphere.
#[derive(Debug, Clone)]
pub struct MeasureContext {
    density: Arc<HomogeneousDensity>,
    grid: Arc<SphereGrid>,
    s: f64,
    sphere_weights: Vec<f64>,
}

impl MeasureContext {
    pub fn new(density: Arc<HomogeneousDensity>, grid: Arc<SphereGrid>) -> Result<Self> {
        if density.dim() != grid.dim() {
            return Err(Error::GridMismatch("density and grid dims differ".into()));
        }
        let sphere_weights: Vec<f64> = grid
            .nodes()
            .iter()
            .zip(grid.weights())
            .map(|(&u, &w)| density.angular_eval(u) * w)
            .collect();
        if !(pairwise_sum_by(sphere_weights.len(), &|k| sphere_weights[k]) > 0.0) {
            return Err(Error::InvalidArgument("total sphere measure not positive".into()));
        }
        Ok(MeasureContext {
            s: density.s_exponent(),
            density,
            grid,
            sphere_weights,
        })
    }

    pub fn density(&self) -> &Arc<HomogeneousDensity> {
        &self.density
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        &self.grid
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn sphere_weights(&self) -> &[f64] {
        &self.sphere_weights
    }

    /// Radial samples of a body on this context's grid. Support fields are
    /// evaluated through their Wulff shape; everything else is exact.
    pub fn radial_values(&self, body: &Body) -> Result<Vec<f64>> {
        if body.dim() != self.dim() {
            return Err(Error::GridMismatch("body dim differs from context".into()));
        }
        match body {
            Body::Radial(f) if f.grid().same_layout(&self.grid) => Ok(f.values().to_vec()),
            Body::Support(f) if f.grid().same_layout(&self.grid) => {
                Ok(crate::body::radial_from_support_field(f)?.values().to_vec())
            }
            _ => self
                .grid
                .nodes()
                .par_iter()
                .map(|&u| body.radial(u))
                .collect::<Result<Vec<f64>>>(),
        }
    }

    /// Weighted integral of per-node values against the sphere measure.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.grid.len());
        pairwise_sum_by(values.len(), &|k| self.sphere_weights[k] * values[k])
    }
}

/// `mu(K) = s * integral of rho(K,u)^{1/s}` against the sphere measure.
pub fn mu_measure(ctx: &MeasureContext, body: &Body) -> Result<f64> {
    let rho = ctx.radial_values(body)?;
    mu_from_radial_values(ctx, &rho)
}

/// Same as [`mu_measure`] for precomputed radial samples.
pub fn mu_from_radial_values(ctx: &MeasureContext, rho: &[f64]) -> Result<f64> {
    if rho.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::NumericDegeneracy("nonpositive radial value".into()));
    }
    let inv_s = 1.0 / ctx.s;
    let powered: Vec<f64> = rho.iter().map(|&r| r.powf(inv_s)).collect();
    Ok(ctx.s * ctx.integrate(&powered))
}

/// Box-rejection Monte Carlo estimate of `mu(K) = integral of w over K`,
/// with a standard-error estimate. Deterministic per `(seed)`: sampling is
/// split into fixed chunks, each on its own ChaCha stream, merged in chunk
/// order.
pub fn mu_measure_mc(
    w: &HomogeneousDensity,
    body: &Body,
    n_samples: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    if n_samples < 1_000 {
        return Err(Error::InvalidArgument("need at least 1000 samples".into()));
    }
    let (lo, hi) = bounding_box(body)?;
    let dim = body.dim();
    let mut volume = 1.0;
    for d in 0..dim {
        volume *= hi[d] - lo[d];
    }
    const CHUNK: u64 = 1 << 14;
    let chunks: Vec<u64> = (0..n_samples.div_ceil(CHUNK)).collect();
    let partial: Vec<(f64, f64, u64)> = chunks
        .par_iter()
        .map(|&c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c + 1);
            let count = CHUNK.min(n_samples - c * CHUNK);
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for _ in 0..count {
                let mut x = [0.0; 3];
                for d in 0..dim {
                    x[d] = rng.gen_range(lo[d]..hi[d]);
                }
                let value = if contains(body, x) {
                    w.eval(x).unwrap_or(0.0)
                } else {
                    0.0
                };
                sum += value;
                sum_sq += value * value;
            }
            (sum, sum_sq, count)
        })
        .collect();
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for (a, b, _) in &partial {
        sum += a;
        sum_sq += b;
    }
    let n = n_samples as f64;
    let mean = sum / n;
    let variance = (sum_sq / n - mean * mean).max(0.0);
    Ok((volume * mean, volume * (variance / n).sqrt()))
}

fn bounding_box(body: &Body) -> Result<(Vec3, Vec3)> {
    let dim = body.dim();
    let mut lo = [0.0; 3];
    let mut hi = [0.0; 3];
    match body {
        Body::Radial(f) => {
            // star bodies need not be convex; bound by the largest radius
            let r = f.values().iter().cloned().fold(0.0, f64::max);
            for d in 0..dim {
                lo[d] = -r;
                hi[d] = r;
            }
        }
        _ => {
            for d in 0..dim {
                let mut e = [0.0; 3];
                e[d] = 1.0;
                hi[d] = body.support(e);
                e[d] = -1.0;
                lo[d] = -body.support(e);
                if !(hi[d] > lo[d]) {
                    return Err(Error::Geometry("empty bounding box".into()));
                }
            }
        }
    }
    Ok((lo, hi))
}

fn contains(body: &Body, x: Vec3) -> bool {
    match body {
        Body::Polytope(p) => p.contains(x, 0.0),
        Body::Ellipsoid(e) => e.contains(x),
        Body::Ball { radius, .. } => norm(x) <= *radius,
        Body::Support(f) => f
            .grid()
            .nodes()
            .iter()
            .zip(f.values())
            .all(|(&v, &h)| dot(x, v) <= h),
        Body::Radial(f) => {
            let r = norm(x);
            r == 0.0 || r <= f.radial([x[0] / r, x[1] / r, x[2] / r])
        }
    }
}

/// `mu_p(K, L) = (1/p) * integral of h(L, .)^p` against the surface measure
/// of `K` at the same exponent.
pub fn lp_mixed_mu(
    ctx: &MeasureContext,
    s_k: &SurfaceMeasure,
    h_l: &dyn SupportEval,
    p: f64,
) -> Result<f64> {
    if s_k.p() != p {
        return Err(Error::InvalidArgument(format!(
            "surface measure built at p={}, queried at p={p}",
            s_k.p()
        )));
    }
    if s_k.density_label() != ctx.density().label() {
        return Err(Error::InvalidArgument(
            "surface measure density differs from context".into(),
        ));
    }
    Ok(s_k.integrate(|v| crate::density::pow_fast(h_l.support_at(v), p)) / p)
}

/// `V_{mu,p}(K, L) = s p mu_p(K, L)`.
pub fn lp_mixed_volume(
    ctx: &MeasureContext,
    s_k: &SurfaceMeasure,
    h_l: &dyn SupportEval,
    p: f64,
) -> Result<f64> {
    Ok(ctx.s() * p * lp_mixed_mu(ctx, s_k, h_l, p)?)
}

/// Dual mixed form:
/// `s * integral of rho(K,u)^{(1-sp)/s} rho(L,u)^p` against the sphere
/// measure. `p` may be negative (star bodies keep radial values positive).
pub fn dual_mixed(
    ctx: &MeasureContext,
    k: &dyn RadialEval,
    l: &dyn RadialEval,
    p: f64,
) -> Result<f64> {
    if p == 0.0 {
        return Err(Error::InvalidArgument("dual mixed form needs p != 0".into()));
    }
    let exp_k = 1.0 / ctx.s - p;
    let nodes = ctx.grid().nodes();
    let values = (0..nodes.len())
        .map(|i| {
            let rk = k.radial_at(nodes[i]);
            let rl = l.radial_at(nodes[i]);
            if !(rk > 0.0) || !(rl > 0.0) {
                return Err(Error::NumericDegeneracy(format!(
                    "nonpositive radial value at node {i}"
                )));
            }
            Ok(rk.powf(exp_k) * rl.powf(p))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(ctx.s * ctx.integrate(&values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::SupportField;
    use crate::hull::convex_hull;
    use crate::surfmeas::{lp_surface_polytope, surface_mu_polytope};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn square() -> crate::body::Polytope {
        convex_hull(
            &[
                [1.0, 1.0, 0.0],
                [-1.0, 1.0, 0.0],
                [-1.0, -1.0, 0.0],
                [1.0, -1.0, 0.0],
            ],
            2,
        )
        .unwrap()
    }

    fn simplex() -> crate::body::Polytope {
        convex_hull(&[[-0.3, -0.3, 0.0], [1.0, -0.3, 0.0], [-0.3, 1.0, 0.0]], 2).unwrap()
    }

    fn ctx_2d(density: Arc<HomogeneousDensity>, res: usize) -> MeasureContext {
        MeasureContext::new(density, SphereGrid::build(2, res).unwrap()).unwrap()
    }

    #[test]
    fn mu_of_square_is_area() {
        let ctx = ctx_2d(HomogeneousDensity::lebesgue(2), 2048);
        let mu = mu_measure(&ctx, &Body::Polytope(square())).unwrap();
        assert!((mu - 4.0).abs() / 4.0 < 1e-4);
    }

    #[test]
    fn mu_of_disk_with_norm_density() {
        let ctx = ctx_2d(HomogeneousDensity::constant_profile(2, 1.0, 1.0).unwrap(), 2048);
        let mu = mu_measure(&ctx, &Body::Ball { dim: 2, radius: 1.0 }).unwrap();
        assert!((mu - 2.0 * PI / 3.0).abs() < 1e-6);
    }

    #[test]
    fn mu_of_unit_ball_3d() {
        let ctx = MeasureContext::new(
            HomogeneousDensity::lebesgue(3),
            SphereGrid::build(3, 48).unwrap(),
        )
        .unwrap();
        let mu = mu_measure(&ctx, &Body::Ball { dim: 3, radius: 1.0 }).unwrap();
        assert!((mu - 4.0 * PI / 3.0).abs() < 1e-3);
    }

    #[test]
    fn mu_scaling_law() {
        let w = HomogeneousDensity::constant_profile(2, 1.0, 0.5).unwrap();
        let ctx = ctx_2d(w, 1024);
        let body = Body::Polytope(simplex());
        let base = mu_measure(&ctx, &body).unwrap();
        for lambda in [0.5, 2.0] {
            let scaled = mu_measure(&ctx, &body.scaled(lambda).unwrap()).unwrap();
            let expect = lambda.powf(1.0 / ctx.s()) * base;
            assert!((scaled - expect).abs() <= 1e-9 * expect.abs());
        }
    }

    #[test]
    fn mc_oracle_square() {
        let w = HomogeneousDensity::lebesgue(2);
        let (value, se) = mu_measure_mc(&w, &Body::Polytope(square()), 1_000_000, 7).unwrap();
        assert!((value - 4.0).abs() <= 3.0 * se, "value {value} se {se}");
        assert!(mu_measure_mc(&w, &Body::Polytope(square()), 10, 7).is_err());
    }

    #[test]
    fn mc_oracle_disk_norm_density() {
        let w = HomogeneousDensity::constant_profile(2, 1.0, 1.0).unwrap();
        let disk = Body::Ball { dim: 2, radius: 1.0 };
        let (value, se) = mu_measure_mc(&w, &disk, 1_000_000, 42).unwrap();
        assert!((value - 2.0 * PI / 3.0).abs() <= 3.0 * se);
    }

    #[test]
    fn mc_oracle_cone_density_simplex() {
        let w = HomogeneousDensity::cone(2, [0.0, 1.0, 0.0], 1.0).unwrap();
        let ctx = MeasureContext::new(w.clone(), SphereGrid::build(2, 4096).unwrap()).unwrap();
        let body = Body::Polytope(simplex());
        let quad = mu_measure(&ctx, &body).unwrap();
        let (mc, se) = mu_measure_mc(&w, &body, 1_000_000, 1337).unwrap();
        assert!((mc - quad).abs() <= 3.0 * se, "quad {quad} mc {mc} se {se}");
    }

    #[test]
    fn mc_determinism() {
        let w = HomogeneousDensity::lebesgue(2);
        let body = Body::Polytope(simplex());
        let a = mu_measure_mc(&w, &body, 100_000, 9).unwrap();
        let b = mu_measure_mc(&w, &body, 100_000, 9).unwrap();
        assert_eq!(a.0.to_bits(), b.0.to_bits());
        let c = mu_measure_mc(&w, &body, 100_000, 10).unwrap();
        assert_ne!(a.0.to_bits(), c.0.to_bits());
    }

    #[test]
    fn mixed_mu_examples() {
        let leb = HomogeneousDensity::lebesgue(2);
        let ctx = ctx_2d(leb.clone(), 2048);
        let sq = square();
        // mu_p(K,K) = mu(K)/(s p) for p = 2
        let s2 = SurfaceMeasure::Discrete(lp_surface_polytope(&sq, &leb, 2.0).unwrap());
        let body = Body::Polytope(sq.clone());
        let mp = lp_mixed_mu(&ctx, &s2, &body, 2.0).unwrap();
        assert!((mp - 4.0).abs() < 1e-3);
        // homogeneity in L: mu_p(K, 2L) = 2^p mu_p(K, L)
        let doubled = body.scaled(2.0).unwrap();
        let mp2 = lp_mixed_mu(&ctx, &s2, &doubled, 2.0).unwrap();
        assert_relative_eq!(mp2, 4.0 * mp, max_relative = 1e-12);
        // mu_1(square, ball) = perimeter
        let s1 = SurfaceMeasure::Discrete(surface_mu_polytope(&sq, &leb).unwrap());
        let ball = Body::Ball { dim: 2, radius: 1.0 };
        let m1 = lp_mixed_mu(&ctx, &s1, &ball, 1.0).unwrap();
        assert!((m1 - 8.0).abs() < 1e-9);
        // p mismatch rejected
        assert!(lp_mixed_mu(&ctx, &s1, &ball, 2.0).is_err());
    }

    #[test]
    fn mixed_volume_diagonal_is_mu() {
        let leb = HomogeneousDensity::lebesgue(2);
        let ctx = ctx_2d(leb.clone(), 2048);
        let sq = square();
        let body = Body::Polytope(sq.clone());
        let mu = mu_measure(&ctx, &body).unwrap();
        for p in [1.0, 2.0] {
            let s = SurfaceMeasure::Discrete(lp_surface_polytope(&sq, &leb, p).unwrap());
            let v = lp_mixed_volume(&ctx, &s, &body, p).unwrap();
            assert!((v - mu).abs() / mu < 1e-3, "p={p}: V={v} mu={mu}");
        }
    }

    #[test]
    fn mixed_volume_ball_3d() {
        let leb = HomogeneousDensity::lebesgue(3);
        let ctx = MeasureContext::new(leb.clone(), SphereGrid::build(3, 48).unwrap()).unwrap();
        let ball = Body::Ball { dim: 3, radius: 1.0 };
        let e = crate::body::Ellipsoid::ball(3, 1.0).unwrap();
        let m = SurfaceMeasure::Continuous(
            crate::surfmeas::lp_surface_ellipsoid(&e, &leb, 1.0, ctx.grid().clone()).unwrap(),
        );
        let v = lp_mixed_volume(&ctx, &m, &ball, 1.0).unwrap();
        let mu = mu_measure(&ctx, &ball).unwrap();
        assert!((v - mu).abs() / mu < 1e-3);
    }

    #[test]
    fn dual_mixed_examples() {
        let leb = HomogeneousDensity::lebesgue(2);
        let ctx = ctx_2d(leb, 2048);
        let sq = Body::Polytope(square());
        let mu = mu_measure(&ctx, &sq).unwrap();
        let v = dual_mixed(&ctx, &sq, &sq, 1.0).unwrap();
        assert!((v - mu).abs() / mu < 1e-4);

        // dilatate identity on the disk: the dual form of (B, 2B) at p = 1
        // equals 2 pi = mu(B)^{1/2} mu(2B)^{1/2}
        let ball = Body::Ball { dim: 2, radius: 1.0 };
        let ball2 = Body::Ball { dim: 2, radius: 2.0 };
        let v = dual_mixed(&ctx, &ball, &ball2, 1.0).unwrap();
        assert!((v - 2.0 * PI).abs() < 1e-6);

        // homogeneity: dual(K, lambda L) = lambda^p dual(K, L)
        let tri = Body::Polytope(simplex());
        let v1 = dual_mixed(&ctx, &sq, &tri, 1.5).unwrap();
        let v2 = dual_mixed(&ctx, &sq, &tri.scaled(3.0).unwrap(), 1.5).unwrap();
        assert_relative_eq!(v2, 3.0f64.powf(1.5) * v1, max_relative = 1e-12);

        assert!(dual_mixed(&ctx, &sq, &tri, 0.0).is_err());
    }

    #[test]
    fn dual_mixed_diagonal_for_fields() {
        // the diagonal identity holds exactly at the discrete level for any
        // star body, including sampled fields
        let w = HomogeneousDensity::constant_profile(2, 1.0, 1.0).unwrap();
        let grid = SphereGrid::build(2, 512).unwrap();
        let ctx = MeasureContext::new(w, grid.clone()).unwrap();
        let field = crate::body::RadialField::new(
            grid.clone(),
            grid.nodes().iter().map(|v| 1.0 + 0.3 * v[0] * v[1]).collect(),
        )
        .unwrap();
        let body = Body::Radial(field);
        let mu = mu_measure(&ctx, &body).unwrap();
        for p in [1.0, 2.0, -1.0] {
            let v = dual_mixed(&ctx, &body, &body, p).unwrap();
            assert_relative_eq!(v, mu, max_relative = 1e-12);
        }
    }

    #[test]
    fn wulff_radial_route_for_support_fields() {
        let ctx = ctx_2d(HomogeneousDensity::lebesgue(2), 1024);
        let h = SupportField::sample(ctx.grid().clone(), &Body::Polytope(square())).unwrap();
        let mu = mu_measure(&ctx, &Body::Support(h)).unwrap();
        assert!((mu - 4.0).abs() / 4.0 < 1e-3);
    }
}
