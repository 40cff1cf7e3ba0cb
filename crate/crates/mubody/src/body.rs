//! Convex and star body representations: support/radial evaluation,
//! polarity, scaling, negation, and the L_p Minkowski and radial
//! combinations.
//!
//! Exact bodies (polytopes, ellipsoids, balls) evaluate support and radial
//! functions in closed form; transform outputs live as support or radial
//! samples on a shared grid and are composed nodewise.

use crate::error::{Error, Result};
use crate::grid::SphereGrid;
use crate::vecn::{dot, neg, norm, scale, Vec3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Anything that can answer support-function queries at arbitrary unit
/// directions.
pub trait SupportEval: Sync {
    fn support_at(&self, u: Vec3) -> f64;
}

/// Anything that can answer radial-function queries at arbitrary unit
/// directions.
pub trait RadialEval: Sync {
    fn radial_at(&self, u: Vec3) -> f64;
}

/// Facet of a polytope: outward unit normal, offset, and the vertex loop
/// lying on it (a convex planar polygon in outward orientation for n = 3).
#[derive(Debug, Clone)]
pub struct Facet {
    pub normal: Vec3,
    pub offset: f64,
    pub vertices: Vec<usize>,
}

/// Convex polytope with the origin strictly interior.
#[derive(Debug, Clone)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vec3>,
    facets: Vec<Facet>,
}

impl Polytope {
    pub fn new(dim: usize, vertices: Vec<Vec3>, facets: Vec<Facet>) -> Result<Self> {
        for f in &facets {
            if f.offset <= 0.0 {
                return Err(Error::Geometry("origin not strictly interior".into()));
            }
            if (norm(f.normal) - 1.0).abs() > 1e-9 {
                return Err(Error::Geometry("facet normal not unit".into()));
            }
            for &vi in &f.vertices {
                let d = dot(f.normal, vertices[vi]) - f.offset;
                if d.abs() > 1e-8 * f.offset.max(1.0) {
                    return Err(Error::Geometry(format!(
                        "vertex {vi} off its facet plane by {d:.2e}"
                    )));
                }
            }
        }
        Ok(Polytope { dim, vertices, facets })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn support(&self, u: Vec3) -> f64 {
        self.vertices
            .iter()
            .map(|&v| dot(u, v))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Radial function: nearest facet-plane hit along the ray through `u`.
    pub fn radial(&self, u: Vec3) -> Result<f64> {
        let mut best = f64::INFINITY;
        for f in &self.facets {
            let d = dot(u, f.normal);
            if d > 1e-12 {
                best = best.min(f.offset / d);
            }
        }
        if best.is_finite() {
            Ok(best)
        } else {
            Err(Error::Geometry("unbounded ray in radial query".into()))
        }
    }

    pub fn contains(&self, x: Vec3, tol: f64) -> bool {
        self.facets.iter().all(|f| dot(f.normal, x) <= f.offset + tol)
    }

    pub fn scaled(&self, lambda: f64) -> Result<Polytope> {
        if !(lambda > 0.0) {
            return Err(Error::InvalidArgument("scale factor must be > 0".into()));
        }
        Ok(Polytope {
            dim: self.dim,
            vertices: self.vertices.iter().map(|&v| scale(v, lambda)).collect(),
            facets: self
                .facets
                .iter()
                .map(|f| Facet {
                    normal: f.normal,
                    offset: f.offset * lambda,
                    vertices: f.vertices.clone(),
                })
                .collect(),
        })
    }

    pub fn negated(&self) -> Polytope {
        Polytope {
            dim: self.dim,
            vertices: self.vertices.iter().map(|&v| neg(v)).collect(),
            facets: self
                .facets
                .iter()
                .map(|f| Facet {
                    normal: neg(f.normal),
                    offset: f.offset,
                    // reverse to keep outward orientation of the loop
                    vertices: f.vertices.iter().rev().copied().collect(),
                })
                .collect(),
        }
    }
}

/// Ellipsoid `A . B^n` for a nonsingular map `A` (2d maps are embedded in the
/// plane with an identity third axis).
#[derive(Debug, Clone)]
pub struct Ellipsoid {
    dim: usize,
    map: [[f64; 3]; 3],
    inv: [[f64; 3]; 3],
    det: f64,
}

impl Ellipsoid {
    pub fn new(dim: usize, map: [[f64; 3]; 3]) -> Result<Self> {
        let det = det3(&map);
        if det.abs() < 1e-12 {
            return Err(Error::Geometry("ellipsoid map is singular".into()));
        }
        let inv = inv3(&map, det);
        Ok(Ellipsoid { dim, map, inv, det })
    }

    /// 2d ellipsoid from a 2x2 map.
    pub fn planar(m: [[f64; 2]; 2]) -> Result<Self> {
        Self::new(
            2,
            [
                [m[0][0], m[0][1], 0.0],
                [m[1][0], m[1][1], 0.0],
                [0.0, 0.0, 1.0],
            ],
        )
    }

    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidArgument("radius must be > 0".into()));
        }
        let z = if dim == 2 { 1.0 } else { radius };
        Self::new(
            dim,
            [[radius, 0.0, 0.0], [0.0, radius, 0.0], [0.0, 0.0, z]],
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn map(&self) -> &[[f64; 3]; 3] {
        &self.map
    }

    /// Determinant of the defining map restricted to the body's dimension.
    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn support(&self, u: Vec3) -> f64 {
        norm(mat_t_vec(&self.map, u))
    }

    pub fn radial(&self, u: Vec3) -> f64 {
        1.0 / norm(mat_vec(&self.inv, u))
    }

    /// Boundary point with outer normal `u` (the support-function gradient).
    pub fn boundary_point(&self, u: Vec3) -> Vec3 {
        let atu = mat_t_vec(&self.map, u);
        scale(mat_vec(&self.map, atu), 1.0 / norm(atu))
    }

    /// Curvature function `f(u) = det(A)^2 / |A^T u|^{n+1}`.
    pub fn curvature_function(&self, u: Vec3) -> f64 {
        let h = self.support(u);
        self.det * self.det / h.powi(self.dim as i32 + 1)
    }

    pub fn contains(&self, x: Vec3) -> bool {
        norm(mat_vec(&self.inv, x)) <= 1.0
    }

    pub fn scaled(&self, lambda: f64) -> Result<Ellipsoid> {
        if !(lambda > 0.0) {
            return Err(Error::InvalidArgument("scale factor must be > 0".into()));
        }
        let mut m = self.map;
        for row in &mut m {
            for v in row.iter_mut() {
                *v *= lambda;
            }
        }
        if self.dim == 2 {
            m[2][2] = 1.0;
            m[2][0] = 0.0;
            m[2][1] = 0.0;
            m[0][2] = 0.0;
            m[1][2] = 0.0;
        }
        Ellipsoid::new(self.dim, m)
    }
}

/// Support samples on a grid; the underlying body is the intersection of the
/// half-spaces `{x : x . v <= h(v)}` over the nodes (the Wulff shape of the
/// samples).
#[derive(Debug, Clone)]
pub struct SupportField {
    grid: Arc<SphereGrid>,
    values: Vec<f64>,
}

/// Radial samples on a grid; the underlying star body is
/// `{t u : 0 <= t <= rho(u)}` with off-node queries interpolated.
#[derive(Debug, Clone)]
pub struct RadialField {
    grid: Arc<SphereGrid>,
    values: Vec<f64>,
}

macro_rules! field_common {
    ($T:ident) => {
        impl $T {
            pub fn new(grid: Arc<SphereGrid>, values: Vec<f64>) -> Result<Self> {
                if values.len() != grid.len() {
                    return Err(Error::GridMismatch(format!(
                        "{} values for {} nodes",
                        values.len(),
                        grid.len()
                    )));
                }
                if let Some(k) = values.iter().position(|v| !(*v > 0.0) || !v.is_finite()) {
                    return Err(Error::NumericDegeneracy(format!(
                        "nonpositive field value {} at node {k}",
                        values[k]
                    )));
                }
                Ok($T { grid, values })
            }

            pub fn grid(&self) -> &Arc<SphereGrid> {
                &self.grid
            }

            pub fn values(&self) -> &[f64] {
                &self.values
            }

            pub fn same_grid(&self, other: &$T) -> bool {
                self.grid.same_layout(&other.grid)
            }

            /// Pointwise map preserving the grid.
            pub fn map_values<F: Fn(f64) -> f64>(&self, f: F) -> Result<$T> {
                $T::new(self.grid.clone(), self.values.iter().map(|&v| f(v)).collect())
            }

            /// Field with values permuted through the antipodal map,
            /// i.e. sampled at `-u`.
            pub fn negated(&self) -> Result<$T> {
                if !self.grid.antipodal_closed() {
                    return Err(Error::InvalidArgument(
                        "negation needs an antipodally closed grid".into(),
                    ));
                }
                let vals = (0..self.values.len())
                    .map(|k| self.values[self.grid.neg_index(k)])
                    .collect();
                $T::new(self.grid.clone(), vals)
            }
        }
    };
}

field_common!(SupportField);
field_common!(RadialField);

impl SupportField {
    /// Samples a support evaluator onto a grid.
    pub fn sample<E: SupportEval + ?Sized>(grid: Arc<SphereGrid>, body: &E) -> Result<Self> {
        let values: Vec<f64> = grid.nodes().par_iter().map(|&u| body.support_at(u)).collect();
        Self::new(grid, values)
    }

    /// Interpolated support value at an arbitrary unit direction.
    pub fn support(&self, u: Vec3) -> f64 {
        interpolate_field(&self.grid, &self.values, u)
    }
}

impl RadialField {
    pub fn sample<E: RadialEval + ?Sized>(grid: Arc<SphereGrid>, body: &E) -> Result<Self> {
        let values: Vec<f64> = grid.nodes().par_iter().map(|&u| body.radial_at(u)).collect();
        Self::new(grid, values)
    }

    /// Interpolated radial value at an arbitrary unit direction.
    pub fn radial(&self, u: Vec3) -> f64 {
        interpolate_field(&self.grid, &self.values, u)
    }
}

/// Interpolates node samples at an arbitrary unit direction: linear in angle
/// for n = 2, bilinear in (cos polar, azimuth) on the product grid for n = 3
/// (clamped to the end rings near the poles).
pub fn interpolate_field(grid: &SphereGrid, values: &[f64], u: Vec3) -> f64 {
    use std::f64::consts::PI;
    if grid.dim() == 2 {
        let m = grid.len();
        let theta = u[1].atan2(u[0]).rem_euclid(2.0 * PI);
        let t = theta / (2.0 * PI) * m as f64;
        let k = (t.floor() as usize) % m;
        let frac = t - t.floor();
        values[k] * (1.0 - frac) + values[(k + 1) % m] * frac
    } else {
        let p = grid.resolution();
        let a = 2 * p;
        let theta = u[1].atan2(u[0]).rem_euclid(2.0 * PI);
        let tj = theta / (2.0 * PI) * a as f64;
        let j = (tj.floor() as usize) % a;
        let fj = tj - tj.floor();
        let x = u[2].clamp(-1.0, 1.0);
        // polar rings store ascending cos(polar) = node z at azimuth 0
        let ring_z = |i: usize| grid.node(i * a)[2];
        let (i0, i1, fi) = if x <= ring_z(0) {
            (0, 0, 0.0)
        } else if x >= ring_z(p - 1) {
            (p - 1, p - 1, 0.0)
        } else {
            let mut lo = 0usize;
            let mut hi = p - 1;
            while hi - lo > 1 {
                let mid = (lo + hi) / 2;
                if ring_z(mid) <= x {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let z0 = ring_z(lo);
            let z1 = ring_z(hi);
            (lo, hi, (x - z0) / (z1 - z0))
        };
        let v = |i: usize, j: usize| values[i * a + (j % a)];
        let lo = v(i0, j) * (1.0 - fj) + v(i0, j + 1) * fj;
        let hi = v(i1, j) * (1.0 - fj) + v(i1, j + 1) * fj;
        lo * (1.0 - fi) + hi * fi
    }
}

/// Tagged union of the supported body representations.
#[derive(Debug, Clone)]
pub enum Body {
    Polytope(Polytope),
    Ellipsoid(Ellipsoid),
    Ball { dim: usize, radius: f64 },
    Support(SupportField),
    Radial(RadialField),
}

impl Body {
    pub fn dim(&self) -> usize {
        match self {
            Body::Polytope(p) => p.dim(),
            Body::Ellipsoid(e) => e.dim(),
            Body::Ball { dim, .. } => *dim,
            Body::Support(f) => f.grid().dim(),
            Body::Radial(f) => f.grid().dim(),
        }
    }

    /// Support function. For radial fields this is the support of the convex
    /// hull of the star body (max over nodes of `rho(v) (u . v)`).
    pub fn support(&self, u: Vec3) -> f64 {
        match self {
            Body::Polytope(p) => p.support(u),
            Body::Ellipsoid(e) => e.support(u),
            Body::Ball { radius, .. } => *radius,
            Body::Support(f) => f.support(u),
            Body::Radial(f) => {
                let g = f.grid();
                g.nodes()
                    .iter()
                    .zip(f.values())
                    .map(|(&v, &r)| r * dot(u, v))
                    .fold(f64::NEG_INFINITY, f64::max)
            }
        }
    }

    /// Radial function. Support fields are evaluated through their Wulff
    /// shape (min over nodes of `h(v)/(u . v)`).
    pub fn radial(&self, u: Vec3) -> Result<f64> {
        match self {
            Body::Polytope(p) => p.radial(u),
            Body::Ellipsoid(e) => Ok(e.radial(u)),
            Body::Ball { radius, .. } => Ok(*radius),
            Body::Support(f) => wulff_radial_at(f, u),
            Body::Radial(f) => Ok(f.radial(u)),
        }
    }

    pub fn scaled(&self, lambda: f64) -> Result<Body> {
        if !(lambda > 0.0) {
            return Err(Error::InvalidArgument("scale factor must be > 0".into()));
        }
        Ok(match self {
            Body::Polytope(p) => Body::Polytope(p.scaled(lambda)?),
            Body::Ellipsoid(e) => Body::Ellipsoid(e.scaled(lambda)?),
            Body::Ball { dim, radius } => Body::Ball { dim: *dim, radius: radius * lambda },
            Body::Support(f) => Body::Support(f.map_values(|v| v * lambda)?),
            Body::Radial(f) => Body::Radial(f.map_values(|v| v * lambda)?),
        })
    }

    pub fn negated(&self) -> Result<Body> {
        Ok(match self {
            Body::Polytope(p) => Body::Polytope(p.negated()),
            Body::Ellipsoid(e) => Body::Ellipsoid(e.clone()),
            Body::Ball { dim, radius } => Body::Ball { dim: *dim, radius: *radius },
            Body::Support(f) => Body::Support(f.negated()?),
            Body::Radial(f) => Body::Radial(f.negated()?),
        })
    }
}

impl SupportEval for Body {
    fn support_at(&self, u: Vec3) -> f64 {
        self.support(u)
    }
}

impl RadialEval for Body {
    fn radial_at(&self, u: Vec3) -> f64 {
        self.radial(u).unwrap_or(f64::NAN)
    }
}

impl SupportEval for SupportField {
    fn support_at(&self, u: Vec3) -> f64 {
        self.support(u)
    }
}

impl RadialEval for RadialField {
    fn radial_at(&self, u: Vec3) -> f64 {
        self.radial(u)
    }
}

/// Radial view of the polar body of a support evaluator: `rho^* = 1/h`.
pub struct PolarOf<'a, E: SupportEval + ?Sized>(pub &'a E);

impl<E: SupportEval + ?Sized> RadialEval for PolarOf<'_, E> {
    fn radial_at(&self, u: Vec3) -> f64 {
        1.0 / self.0.support_at(u)
    }
}

/// Polar body at the field level: `rho(K^*, u) = 1/h(K, u)` nodewise.
pub fn polar_field(h: &SupportField) -> RadialField {
    RadialField::new(
        h.grid().clone(),
        h.values().iter().map(|&v| 1.0 / v).collect(),
    )
    .expect("reciprocal of positive field is positive")
}

/// Candidate support field of the polar of a star body: `h^* = 1/rho`
/// nodewise. The reciprocal of a radial function is a genuine support
/// function only when the star body is convex, so the result is flagged with
/// the self-consistency defect instead of being rejected.
pub fn polar_radial(r: &RadialField, tol: f64) -> (SupportField, bool, f64) {
    let h = SupportField::new(
        r.grid().clone(),
        r.values().iter().map(|&v| 1.0 / v).collect(),
    )
    .expect("reciprocal of positive field is positive");
    let (ok, defect) = is_support_consistent(&h, tol);
    (h, ok, defect)
}

/// `h_out^p = alpha h_K^p + beta h_L^p` nodewise.
pub fn lp_minkowski_combine(
    alpha: f64,
    k: &SupportField,
    beta: f64,
    l: &SupportField,
    p: f64,
) -> Result<SupportField> {
    if !k.same_grid(l) {
        return Err(Error::GridMismatch("minkowski combination needs one grid".into()));
    }
    if p < 1.0 {
        return Err(Error::InvalidArgument("minkowski combination needs p >= 1".into()));
    }
    if alpha < 0.0 || beta < 0.0 || alpha + beta <= 0.0 {
        return Err(Error::InvalidArgument("weights must be >= 0, not both zero".into()));
    }
    let values = k
        .values()
        .iter()
        .zip(l.values())
        .map(|(&a, &b)| (alpha * a.powf(p) + beta * b.powf(p)).powf(1.0 / p))
        .collect();
    SupportField::new(k.grid().clone(), values)
}

/// `rho_out^p = alpha rho_K^p + beta rho_L^p` nodewise; negative `p` gives
/// the harmonic combination.
pub fn lp_radial_combine(
    alpha: f64,
    k: &RadialField,
    beta: f64,
    l: &RadialField,
    p: f64,
) -> Result<RadialField> {
    if !k.same_grid(l) {
        return Err(Error::GridMismatch("radial combination needs one grid".into()));
    }
    if p == 0.0 {
        return Err(Error::InvalidArgument("radial combination needs p != 0".into()));
    }
    if alpha < 0.0 || beta < 0.0 || alpha + beta <= 0.0 {
        return Err(Error::InvalidArgument("weights must be >= 0, not both zero".into()));
    }
    let values = k
        .values()
        .iter()
        .zip(l.values())
        .map(|(&a, &b)| (alpha * a.powf(p) + beta * b.powf(p)).powf(1.0 / p))
        .collect();
    RadialField::new(k.grid().clone(), values)
}

/// Radial function of the Wulff shape of support samples at one direction:
/// `rho(u) = min over nodes v with u.v > 0 of h(v)/(u.v)`, computed in the
/// division-free form `1/rho(u) = max over v of (u.v)/h(v)` (nonpositive
/// dots can never attain the maximum).
pub fn wulff_radial_at(h: &SupportField, u: Vec3) -> Result<f64> {
    let m = wulff_inverse_radial(h.grid().nodes(), h.values(), u);
    if m > 0.0 {
        Ok(1.0 / m)
    } else {
        Err(Error::Geometry("no admissible node in wulff query".into()))
    }
}

#[inline]
fn wulff_inverse_radial(nodes: &[Vec3], inv_or_h: &[f64], u: Vec3) -> f64 {
    // caller passes h values; the division happens once per node pair via
    // the reciprocal table in `radial_from_support_field`
    let mut best = f64::NEG_INFINITY;
    for (v, hv) in nodes.iter().zip(inv_or_h) {
        let t = dot(u, *v) / hv;
        if t > best {
            best = t;
        }
    }
    best
}

/// Radial field of the Wulff shape of support samples, on the same grid.
pub fn radial_from_support_field(h: &SupportField) -> Result<RadialField> {
    if !h.grid().antipodal_closed() {
        return Err(Error::InvalidArgument(
            "wulff evaluation needs an antipodally closed grid".into(),
        ));
    }
    let grid = h.grid().clone();
    let inv_h: Vec<f64> = h.values().iter().map(|&v| 1.0 / v).collect();
    let nodes = grid.nodes();
    let values: Vec<f64> = nodes
        .par_iter()
        .map(|&u| {
            let mut best = f64::NEG_INFINITY;
            for (v, iv) in nodes.iter().zip(&inv_h) {
                let t = dot(u, *v) * iv;
                if t > best {
                    best = t;
                }
            }
            if best > 0.0 {
                Ok(1.0 / best)
            } else {
                Err(Error::Geometry("no admissible node in wulff query".into()))
            }
        })
        .collect::<Result<_>>()?;
    RadialField::new(grid, values)
}

/// Checks whether support samples are consistent with a convex body: the
/// samples are pushed through the Wulff shape and back
/// (`h_hat(u) = max_v rho(v) (u . v)`), and the worst relative gap is the
/// defect.
pub fn is_support_consistent(h: &SupportField, tol: f64) -> (bool, f64) {
    let rho = match radial_from_support_field(h) {
        Ok(r) => r,
        Err(_) => return (false, f64::INFINITY),
    };
    let grid = h.grid();
    let defect = grid
        .nodes()
        .par_iter()
        .enumerate()
        .map(|(k, &u)| {
            let mut hh = f64::NEG_INFINITY;
            for (&v, &r) in grid.nodes().iter().zip(rho.values()) {
                let t = r * dot(u, v);
                if t > hh {
                    hh = t;
                }
            }
            (hh - h.values()[k]).abs() / h.values()[k]
        })
        .reduce(|| 0.0, f64::max);
    (defect <= tol, defect)
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn inv3(m: &[[f64; 3]; 3], det: f64) -> [[f64; 3]; 3] {
    let c = 1.0 / det;
    [
        [
            (m[1][1] * m[2][2] - m[1][2] * m[2][1]) * c,
            (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * c,
            (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * c,
        ],
        [
            (m[1][2] * m[2][0] - m[1][0] * m[2][2]) * c,
            (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * c,
            (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * c,
        ],
        [
            (m[1][0] * m[2][1] - m[1][1] * m[2][0]) * c,
            (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * c,
            (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * c,
        ],
    ]
}

pub fn mat_vec(m: &[[f64; 3]; 3], v: Vec3) -> Vec3 {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

pub fn mat_t_vec(m: &[[f64; 3]; 3], v: Vec3) -> Vec3 {
    [
        m[0][0] * v[0] + m[1][0] * v[1] + m[2][0] * v[2],
        m[0][1] * v[0] + m[1][1] * v[1] + m[2][1] * v[2],
        m[0][2] * v[0] + m[1][2] * v[1] + m[2][2] * v[2],
    ]
}

/// JSON schema for bodies.
///
/// ```json
/// {"type": "polytope", "vertices": [[...], ...]}
/// {"type": "ellipsoid", "matrix": [[...], ...]}
/// {"type": "ball", "radius": 1.0, "dim": 2}
/// {"type": "support_field", "resolution": 2048, "values": [...]}
/// {"type": "radial_field", "resolution": 2048, "values": [...]}
/// ```
#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BodyJson {
    Polytope {
        vertices: Vec<Vec<f64>>,
    },
    Ellipsoid {
        matrix: Vec<Vec<f64>>,
    },
    Ball {
        radius: f64,
        #[serde(default = "default_dim")]
        dim: usize,
    },
    SupportField {
        resolution: usize,
        values: Vec<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
    },
    RadialField {
        resolution: usize,
        values: Vec<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
    },
}

fn default_dim() -> usize {
    2
}

impl BodyJson {
    pub fn build(&self) -> Result<Body> {
        match self {
            BodyJson::Polytope { vertices } => {
                if vertices.is_empty() {
                    return Err(Error::Schema("polytope needs vertices".into()));
                }
                let dim = vertices[0].len();
                if dim != 2 && dim != 3 {
                    return Err(Error::Schema("vertices must be 2d or 3d".into()));
                }
                let pts = vertices
                    .iter()
                    .map(|v| crate::density::vec_from_json(v, dim))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Body::Polytope(crate::hull::convex_hull(&pts, dim)?))
            }
            BodyJson::Ellipsoid { matrix } => {
                let dim = matrix.len();
                if dim != 2 && dim != 3 || matrix.iter().any(|r| r.len() != dim) {
                    return Err(Error::Schema("matrix must be square, 2x2 or 3x3".into()));
                }
                let mut m = [[0.0; 3]; 3];
                m[2][2] = 1.0;
                for (i, row) in matrix.iter().enumerate() {
                    for (j, &v) in row.iter().enumerate() {
                        m[i][j] = v;
                    }
                }
                Ok(Body::Ellipsoid(Ellipsoid::new(dim, m)?))
            }
            BodyJson::Ball { radius, dim } => {
                if !(radius > &0.0) {
                    return Err(Error::Schema("ball radius must be > 0".into()));
                }
                if *dim != 2 && *dim != 3 {
                    return Err(Error::Schema("ball dim must be 2 or 3".into()));
                }
                Ok(Body::Ball { dim: *dim, radius: *radius })
            }
            BodyJson::SupportField { resolution, values, dim } => {
                let (grid, vals) = field_grid(*resolution, values, *dim)?;
                Ok(Body::Support(SupportField::new(grid, vals)?))
            }
            BodyJson::RadialField { resolution, values, dim } => {
                let (grid, vals) = field_grid(*resolution, values, *dim)?;
                Ok(Body::Radial(RadialField::new(grid, vals)?))
            }
        }
    }

    pub fn from_body(body: &Body) -> BodyJson {
        match body {
            Body::Polytope(p) => BodyJson::Polytope {
                vertices: p
                    .vertices()
                    .iter()
                    .map(|&v| crate::density::vec_to_json(v, p.dim()))
                    .collect(),
            },
            Body::Ellipsoid(e) => BodyJson::Ellipsoid {
                matrix: (0..e.dim())
                    .map(|i| (0..e.dim()).map(|j| e.map()[i][j]).collect())
                    .collect(),
            },
            Body::Ball { dim, radius } => BodyJson::Ball { radius: *radius, dim: *dim },
            Body::Support(f) => BodyJson::SupportField {
                resolution: f.grid().resolution(),
                values: f.values().to_vec(),
                dim: Some(f.grid().dim()),
            },
            Body::Radial(f) => BodyJson::RadialField {
                resolution: f.grid().resolution(),
                values: f.values().to_vec(),
                dim: Some(f.grid().dim()),
            },
        }
    }
}

fn field_grid(resolution: usize, values: &[f64], dim: Option<usize>) -> Result<(Arc<SphereGrid>, Vec<f64>)> {
    let dim = match dim {
        Some(d) => d,
        None => {
            if values.len() == resolution {
                2
            } else if values.len() == resolution * 2 * resolution {
                3
            } else {
                return Err(Error::Schema(format!(
                    "cannot infer dim: {} values for resolution {resolution}",
                    values.len()
                )));
            }
        }
    };
    let grid = SphereGrid::build(dim, resolution)?;
    if values.len() != grid.len() {
        return Err(Error::Schema(format!(
            "{} values for a grid of {} nodes",
            values.len(),
            grid.len()
        )));
    }
    Ok((grid, values.to_vec()))
}
