//! Quadrature grids on the unit sphere S^{n-1}, n in {2, 3}.
//!
//! n = 2 uses the periodic trapezoid rule on equally spaced angles; n = 3
//! uses a Gauss-Legendre rule in cos(polar) crossed with a uniform trapezoid
//! rule in azimuth. Both constructions place `-u` in the node set bit-exactly
//! whenever possible, recorded in an index map, so that integrals of `f(v)`
//! and `f(-v)` agree exactly.

use crate::error::{Error, Result};
use crate::vecn::{pairwise_sum_by, Vec3};
use std::f64::consts::PI;
use std::sync::Arc;

/// Smallest accepted grid parameter.
pub const MIN_RESOLUTION: usize = 4;

/// Quadrature nodes and weights on the unit sphere.
#[derive(Debug, Clone)]
pub struct SphereGrid {
    dim: usize,
    resolution: usize,
    nodes: Vec<Vec3>,
    weights: Vec<f64>,
    /// `neg_index[k]` is the node index of `-nodes[k]`; empty when the grid
    /// is not antipodally closed.
    neg_index: Vec<usize>,
}

/// Per-node samples of a function on a [`SphereGrid`].
#[derive(Debug, Clone)]
pub struct NodeField {
    grid_dim: usize,
    grid_resolution: usize,
    values: Vec<f64>,
}

impl NodeField {
    pub fn new(grid: &SphereGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "field has {} values, grid has {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite field value".into()));
        }
        Ok(NodeField {
            grid_dim: grid.dim(),
            grid_resolution: grid.resolution(),
            values,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn belongs_to(&self, grid: &SphereGrid) -> bool {
        self.grid_dim == grid.dim()
            && self.grid_resolution == grid.resolution()
            && self.values.len() == grid.len()
    }
}

impl SphereGrid {
    /// Builds the quadrature grid for `S^{dim-1}`.
    ///
    /// * `dim = 2`: `resolution` equally spaced angles, each of weight
    ///   `2*pi/resolution`; antipodally closed when `resolution` is even.
    /// * `dim = 3`: Gauss-Legendre with `resolution` polar nodes crossed with
    ///   `2*resolution` azimuthal angles; always antipodally closed.
    pub fn build(dim: usize, resolution: usize) -> Result<Arc<SphereGrid>> {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidArgument(format!(
                "dim must be 2 or 3, got {dim}"
            )));
        }
        if resolution < MIN_RESOLUTION {
            return Err(Error::InvalidArgument(format!(
                "resolution must be >= {MIN_RESOLUTION}, got {resolution}"
            )));
        }
        let grid = match dim {
            2 => Self::build_circle(resolution),
            _ => Self::build_sphere(resolution),
        };
        Ok(Arc::new(grid))
    }

    fn build_circle(m: usize) -> SphereGrid {
        let mut nodes = Vec::with_capacity(m);
        let w = 2.0 * PI / m as f64;
        if m % 2 == 0 {
            let half = m / 2;
            for k in 0..half {
                let th = 2.0 * PI * k as f64 / m as f64;
                nodes.push([th.cos(), th.sin(), 0.0]);
            }
            // Second half by exact negation so the antipodal pairing is
            // bit-exact.
            for k in 0..half {
                let v = nodes[k];
                nodes.push([-v[0], -v[1], 0.0]);
            }
            let neg_index = (0..m).map(|k| (k + half) % m).collect();
            SphereGrid {
                dim: 2,
                resolution: m,
                nodes,
                weights: vec![w; m],
                neg_index,
            }
        } else {
            for k in 0..m {
                let th = 2.0 * PI * k as f64 / m as f64;
                nodes.push([th.cos(), th.sin(), 0.0]);
            }
            SphereGrid {
                dim: 2,
                resolution: m,
                nodes,
                weights: vec![w; m],
                neg_index: Vec::new(),
            }
        }
    }

    fn build_sphere(p: usize) -> SphereGrid {
        let (x, wx) = gauss_legendre(p);
        let a = 2 * p; // azimuth count, always even
        let half = a / 2;
        let wa = 2.0 * PI / a as f64;
        let mut nodes = vec![[0.0; 3]; p * a];
        let mut weights = vec![0.0; p * a];
        let mut neg_index = vec![0usize; p * a];
        let mut cos_sin = Vec::with_capacity(half);
        for j in 0..half {
            let th = 2.0 * PI * j as f64 / a as f64;
            cos_sin.push((th.cos(), th.sin()));
        }
        for i in 0..p {
            let sin_phi = (1.0 - x[i] * x[i]).max(0.0).sqrt();
            for j in 0..half {
                let (c, s) = cos_sin[j];
                nodes[i * a + j] = [sin_phi * c, sin_phi * s, x[i]];
            }
        }
        // Second azimuthal half by negating the polar-mirrored node: keeps
        // the antipodal pairing bit-exact (GL nodes are symmetrized).
        for i in 0..p {
            for j in half..a {
                let v = nodes[(p - 1 - i) * a + (j - half)];
                nodes[i * a + j] = [-v[0], -v[1], -v[2]];
            }
        }
        for i in 0..p {
            for j in 0..a {
                weights[i * a + j] = wx[i] * wa;
                neg_index[i * a + j] = (p - 1 - i) * a + (j + half) % a;
            }
        }
        SphereGrid {
            dim: 3,
            resolution: p,
            nodes,
            weights,
            neg_index,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Vec3] {
        &self.nodes
    }

    pub fn node(&self, k: usize) -> Vec3 {
        self.nodes[k]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn antipodal_closed(&self) -> bool {
        !self.neg_index.is_empty()
    }

    /// Index of `-node(k)`; grid must be antipodally closed.
    pub fn neg_index(&self, k: usize) -> usize {
        self.neg_index[k]
    }

    pub fn same_layout(&self, other: &SphereGrid) -> bool {
        self.dim == other.dim && self.resolution == other.resolution
    }

    /// Surface area of the sphere this grid covers.
    pub fn surface_area(&self) -> f64 {
        if self.dim == 2 {
            2.0 * PI
        } else {
            4.0 * PI
        }
    }

    /// Quadrature of a node field: sum of `weight * value`.
    ///
    /// On antipodally closed grids the terms are accumulated antipodal pair
    /// by antipodal pair, which makes `integrate(f compose neg)` equal to
    /// `integrate(f)` exactly.
    pub fn integrate(&self, f: &NodeField) -> Result<f64> {
        if !f.belongs_to(self) {
            return Err(Error::GridMismatch("field does not belong to grid".into()));
        }
        Ok(self.integrate_values(&f.values))
    }

    /// Same as [`integrate`](Self::integrate) for a raw value slice of the
    /// right length (internal fast path).
    pub fn integrate_values(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len());
        if self.antipodal_closed() {
            let pairs: Vec<(usize, usize)> = (0..self.len())
                .filter(|&k| k < self.neg_index[k])
                .map(|k| (k, self.neg_index[k]))
                .collect();
            pairwise_sum_by(pairs.len(), &|i| {
                let (k, nk) = pairs[i];
                self.weights[k] * values[k] + self.weights[nk] * values[nk]
            })
        } else {
            pairwise_sum_by(self.len(), &|k| self.weights[k] * values[k])
        }
    }

    /// Integrates `eval` on this grid and on the grid with doubled
    /// resolution; returns the finer value and the absolute difference as an
    /// error estimate.
    pub fn integrate_with_error<F: Fn(Vec3) -> f64>(&self, eval: F) -> Result<(f64, f64)> {
        let fine = SphereGrid::build(self.dim, self.resolution * 2)?;
        let coarse_vals: Vec<f64> = self.nodes.iter().map(|&v| eval(v)).collect();
        let fine_vals: Vec<f64> = fine.nodes.iter().map(|&v| eval(v)).collect();
        let coarse = self.integrate_values(&coarse_vals);
        let fine_v = fine.integrate_values(&fine_vals);
        Ok((fine_v, (fine_v - coarse).abs()))
    }
}

/// Gauss-Legendre nodes (ascending) and weights on [-1, 1], symmetrized so
/// that `x[i] == -x[n-1-i]` and `w[i] == w[n-1-i]` bit-exactly.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Initial guess for the i-th largest root.
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_deriv(n, z);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_deriv(n, z);
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[n - 1 - i] = z;
        x[i] = -z;
        w[n - 1 - i] = wi;
        w[i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

/// Legendre polynomial P_n and its derivative at `z` by the three-term
/// recurrence.
fn legendre_with_deriv(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, dp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::c_np;
    use crate::vecn::dot;
    use approx::assert_relative_eq;

    #[test]
    fn rejects_bad_parameters() {
        assert!(SphereGrid::build(4, 64).is_err());
        assert!(SphereGrid::build(2, 3).is_err());
    }

    #[test]
    fn circle_resolution_four() {
        let g = SphereGrid::build(2, 4).unwrap();
        let expect = [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]];
        for (node, e) in g.nodes().iter().zip(expect.iter()) {
            assert!((node[0] - e[0]).abs() < 1e-15);
            assert!((node[1] - e[1]).abs() < 1e-15);
        }
        for &w in g.weights() {
            assert_relative_eq!(w, PI / 2.0, max_relative = 1e-15);
        }
    }

    #[test]
    fn weight_sums_match_surface_area() {
        for (dim, res, tol) in [(2usize, 256usize, 1e-12), (2, 2048, 1e-12), (3, 64, 1e-10)] {
            let g = SphereGrid::build(dim, res).unwrap();
            let total: f64 = g.integrate_values(&vec![1.0; g.len()]);
            assert_relative_eq!(total, g.surface_area(), max_relative = tol);
        }
    }

    #[test]
    fn nodes_are_unit() {
        for (dim, res) in [(2usize, 37usize), (3, 24)] {
            let g = SphereGrid::build(dim, res).unwrap();
            for &v in g.nodes() {
                assert!((crate::vecn::norm(v) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn antipodal_pairing_is_bit_exact() {
        for (dim, res) in [(2usize, 64usize), (3, 12)] {
            let g = SphereGrid::build(dim, res).unwrap();
            assert!(g.antipodal_closed());
            for k in 0..g.len() {
                let nk = g.neg_index(k);
                let v = g.node(k);
                let nv = g.node(nk);
                assert_eq!(v[0], -nv[0]);
                assert_eq!(v[1], -nv[1]);
                assert_eq!(v[2], -nv[2]);
                assert_eq!(g.weights()[k], g.weights()[nk]);
            }
        }
        // Odd circle grids are not closed.
        assert!(!SphereGrid::build(2, 9).unwrap().antipodal_closed());
    }

    #[test]
    fn negated_integrand_is_exact() {
        for (dim, res) in [(2usize, 128usize), (3, 16)] {
            let g = SphereGrid::build(dim, res).unwrap();
            let f = |v: Vec3| (1.3 + v[0] + 0.2 * v[1]).exp() + v[2];
            let vals: Vec<f64> = g.nodes().iter().map(|&v| f(v)).collect();
            let neg_vals: Vec<f64> = g
                .nodes()
                .iter()
                .map(|&v| f([-v[0], -v[1], -v[2]]))
                .collect();
            let a = g.integrate_values(&vals);
            let b = g.integrate_values(&neg_vals);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn positive_part_integral_sphere() {
        // int_{S^2} (u.v)_+ dv = pi for any unit u; the kink line limits the
        // product rule to ~5e-5 absolute at resolution 64
        let g = SphereGrid::build(3, 64).unwrap();
        let u = crate::vecn::normalize([0.3, -0.8, 0.52]).unwrap();
        let vals: Vec<f64> = g.nodes().iter().map(|&v| dot(u, v).max(0.0)).collect();
        assert_relative_eq!(g.integrate_values(&vals), PI, epsilon = 1e-4);
    }

    #[test]
    fn abs_power_integral_matches_constant() {
        // int |u.v|^p dv = 2 / c_{n,p}.
        let u2 = [(0.3f64).cos(), (0.3f64).sin(), 0.0];
        let g2 = SphereGrid::build(2, 4096).unwrap();
        for p in [1.0, 1.5, 2.0, 3.0] {
            let vals: Vec<f64> = g2.nodes().iter().map(|&v| dot(u2, v).abs().powf(p)).collect();
            let integral = g2.integrate_values(&vals);
            assert!((c_np(2, p) * integral - 2.0).abs() < 1e-6, "p={p}");
        }
        let g3 = SphereGrid::build(3, 128).unwrap();
        let u3 = crate::vecn::normalize([0.4, 0.55, -0.75]).unwrap();
        for p in [1.0, 1.5, 2.0, 3.0] {
            let vals: Vec<f64> = g3.nodes().iter().map(|&v| dot(u3, v).abs().powf(p)).collect();
            let integral = g3.integrate_values(&vals);
            assert!((c_np(3, p) * integral - 2.0).abs() < 1e-3, "p={p}");
        }
    }

    #[test]
    fn rotation_robustness_2d() {
        let g = SphereGrid::build(2, 2048).unwrap();
        let p = 1.5;
        let vals_at = |angle: f64| {
            let u = [angle.cos(), angle.sin(), 0.0];
            let (v, e) = g
                .integrate_with_error(|x| dot(u, x).abs().powf(p))
                .unwrap();
            (v, e)
        };
        let (v0, e0) = vals_at(0.0);
        for angle in [0.17, 0.5, 1.1, 2.9] {
            let (v, e) = vals_at(angle);
            assert!((v - v0).abs() <= 2.0 * (e + e0).max(1e-12), "angle={angle}");
        }
    }

    #[test]
    fn integrate_with_error_constant_is_exact() {
        let g = SphereGrid::build(2, 64).unwrap();
        let (v, e) = g.integrate_with_error(|_| 1.0).unwrap();
        assert_relative_eq!(v, 2.0 * PI, max_relative = 1e-13);
        assert!(e < 1e-12);
    }

    #[test]
    fn integrate_with_error_abs_cosine() {
        // the returned (finer) value is good to 1e-6 at base resolution
        // 2048; the difference-based estimate is conservative by the usual
        // factor 3 for an O(h^2) rule and drops below 1e-6 at 4096
        let g = SphereGrid::build(2, 2048).unwrap();
        let u = [1.0, 0.0, 0.0];
        let (v, e) = g.integrate_with_error(|x| dot(u, x).abs()).unwrap();
        assert!((v - 4.0).abs() < 1e-6);
        assert!(e < 3e-6);
        let g = SphereGrid::build(2, 4096).unwrap();
        let (v, e) = g.integrate_with_error(|x| dot(u, x).abs()).unwrap();
        assert!((v - 4.0).abs() < 3e-7);
        assert!(e < 1e-6);
    }

    #[test]
    fn refinement_estimate_decreases() {
        // (u.v)_+^{1.5} error estimates shrink under refinement.
        let u = [(0.71f64).cos(), (0.71f64).sin(), 0.0];
        let mut last = f64::INFINITY;
        for res in [128usize, 256, 512, 1024] {
            let g = SphereGrid::build(2, res).unwrap();
            let (_, e) = g
                .integrate_with_error(|x| dot(u, x).max(0.0).powf(1.5))
                .unwrap();
            assert!(e < last, "estimate did not decrease at res {res}");
            last = e;
        }
    }

    #[test]
    fn gauss_legendre_basics() {
        let (x, w) = gauss_legendre(64);
        let sum: f64 = w.iter().sum();
        assert_relative_eq!(sum, 2.0, max_relative = 1e-13);
        for i in 0..32 {
            assert_eq!(x[i], -x[63 - i]);
            assert_eq!(w[i], w[63 - i]);
        }
        // Exactness on a polynomial of degree 9.
        let quad: f64 = x
            .iter()
            .zip(&w)
            .map(|(&xi, &wi)| wi * (xi.powi(9) + 3.0 * xi.powi(4)))
            .sum();
        assert_relative_eq!(quad, 6.0 / 5.0, max_relative = 1e-13);
    }

    #[test]
    fn node_field_checks() {
        let g = SphereGrid::build(2, 16).unwrap();
        assert!(NodeField::new(&g, vec![1.0; 15]).is_err());
        assert!(NodeField::new(&g, vec![f64::NAN; 16]).is_err());
        let f = NodeField::new(&g, vec![1.0; 16]).unwrap();
        assert_relative_eq!(g.integrate(&f).unwrap(), 2.0 * PI, max_relative = 1e-13);
    }
}
