//! Surface area measures weighted by a homogeneous density, their L_p
//! reweightings, Blaschke addition and scaling.
//!
//! Polytopes produce atomic measures (one atom per facet, weight the facet
//! integral of the density); ellipsoids and, in the plane, support fields
//! produce continuous densities against the sphere grid.

use crate::body::{Ellipsoid, Polytope, SupportField};
use crate::density::HomogeneousDensity;
use crate::error::{Error, Result};
use crate::grid::SphereGrid;
use crate::vecn::{add, dot, norm, scale, sub, Vec3};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// One atom of a discrete surface measure.
#[derive(Debug, Clone, Copy)]
pub struct Atom {
    pub normal: Vec3,
    pub weight: f64,
}

/// Atomic surface measure. `p == 1` is the raw measure; other exponents
/// carry the `h^{1-p}` reweighting of the raw one.
#[derive(Debug, Clone)]
pub struct DiscreteSurfaceMeasure {
    pub dim: usize,
    pub p: f64,
    pub density_label: String,
    pub atoms: Vec<Atom>,
}

/// Continuous surface measure `g(u) du` sampled on a grid.
#[derive(Debug, Clone)]
pub struct ContinuousSurfaceMeasure {
    pub p: f64,
    pub density_label: String,
    pub grid: Arc<SphereGrid>,
    pub values: Vec<f64>,
}

/// Either representation, accepted uniformly by the body transforms.
#[derive(Debug, Clone)]
pub enum SurfaceMeasure {
    Discrete(DiscreteSurfaceMeasure),
    Continuous(ContinuousSurfaceMeasure),
}

impl DiscreteSurfaceMeasure {
    pub fn new(dim: usize, p: f64, density_label: String, atoms: Vec<Atom>) -> Result<Self> {
        for (i, a) in atoms.iter().enumerate() {
            if (norm(a.normal) - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidArgument(format!("atom {i} normal not unit")));
            }
            if !(a.weight >= 0.0) || !a.weight.is_finite() {
                return Err(Error::InvalidArgument(format!("atom {i} weight invalid")));
            }
        }
        let m = DiscreteSurfaceMeasure { dim, p, density_label, atoms };
        if m.total_mass() > 0.0 && !m.positively_spans_pair() {
            return Err(Error::DegenerateMeasure(
                "positive atoms concentrated on a single line".into(),
            ));
        }
        Ok(m)
    }

    /// True when two positive atoms are not (anti)parallel.
    fn positively_spans_pair(&self) -> bool {
        let pos: Vec<&Atom> = self.atoms.iter().filter(|a| a.weight > 0.0).collect();
        for (i, a) in pos.iter().enumerate() {
            for b in pos.iter().skip(i + 1) {
                if dot(a.normal, b.normal).abs() < 1.0 - 1e-12 {
                    return true;
                }
            }
        }
        false
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }
}

impl ContinuousSurfaceMeasure {
    pub fn new(p: f64, density_label: String, grid: Arc<SphereGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch("surface density length".into()));
        }
        if values.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidArgument("surface density must be >= 0".into()));
        }
        Ok(ContinuousSurfaceMeasure { p, density_label, grid, values })
    }

    pub fn total_mass(&self) -> f64 {
        self.grid.integrate_values(&self.values)
    }
}

impl SurfaceMeasure {
    pub fn p(&self) -> f64 {
        match self {
            SurfaceMeasure::Discrete(m) => m.p,
            SurfaceMeasure::Continuous(m) => m.p,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            SurfaceMeasure::Discrete(m) => m.dim,
            SurfaceMeasure::Continuous(m) => m.grid.dim(),
        }
    }

    pub fn density_label(&self) -> &str {
        match self {
            SurfaceMeasure::Discrete(m) => &m.density_label,
            SurfaceMeasure::Continuous(m) => &m.density_label,
        }
    }

    pub fn total_mass(&self) -> f64 {
        match self {
            SurfaceMeasure::Discrete(m) => m.total_mass(),
            SurfaceMeasure::Continuous(m) => m.total_mass(),
        }
    }

    /// Integral of `f(v)` against the measure.
    pub fn integrate<F: Fn(Vec3) -> f64 + Sync>(&self, f: F) -> f64 {
        match self {
            SurfaceMeasure::Discrete(m) => crate::vecn::pairwise_sum_by(m.atoms.len(), &|i| {
                m.atoms[i].weight * f(m.atoms[i].normal)
            }),
            SurfaceMeasure::Continuous(m) => {
                let vals: Vec<f64> = m
                    .grid
                    .nodes()
                    .iter()
                    .zip(&m.values)
                    .map(|(&v, &g)| g * f(v))
                    .collect();
                m.grid.integrate_values(&vals)
            }
        }
    }
}

/// Raw surface measure of a polytope: one atom per facet, weight the facet
/// integral of the density. Edges use 16-point Gauss-Legendre; 3d facets use
/// fan triangulation refined three levels with centroid evaluation.
pub fn surface_mu_polytope(
    k: &Polytope,
    w: &HomogeneousDensity,
) -> Result<DiscreteSurfaceMeasure> {
    if k.dim() != w.dim() {
        return Err(Error::InvalidArgument("polytope and density dims differ".into()));
    }
    let mut atoms = Vec::with_capacity(k.facets().len());
    for f in k.facets() {
        let weight = if k.dim() == 2 {
            let a = k.vertices()[f.vertices[0]];
            let b = k.vertices()[f.vertices[1]];
            edge_integral(a, b, w)
        } else {
            let pts: Vec<Vec3> = f.vertices.iter().map(|&i| k.vertices()[i]).collect();
            polygon_integral(&pts, w)
        };
        atoms.push(Atom { normal: f.normal, weight });
    }
    DiscreteSurfaceMeasure::new(k.dim(), 1.0, w.label().to_string(), atoms)
}

fn edge_integral(a: Vec3, b: Vec3, w: &HomogeneousDensity) -> f64 {
    let (nodes, weights) = crate::grid::gauss_legendre(16);
    let half = scale(sub(b, a), 0.5);
    let mid = scale(add(a, b), 0.5);
    let len_half = norm(half);
    let mut acc = 0.0;
    for (&x, &gw) in nodes.iter().zip(&weights) {
        let p = add(mid, scale(half, x));
        acc += gw * w.eval(p).unwrap_or(0.0);
    }
    acc * len_half
}

fn polygon_integral(pts: &[Vec3], w: &HomogeneousDensity) -> f64 {
    // fan triangulation from the loop centroid
    let m = pts.len() as f64;
    let centroid = pts.iter().fold([0.0; 3], |acc, &p| add(acc, scale(p, 1.0 / m)));
    let mut acc = 0.0;
    for i in 0..pts.len() {
        let a = pts[i];
        let b = pts[(i + 1) % pts.len()];
        acc += triangle_integral(centroid, a, b, w, 3);
    }
    acc
}

fn triangle_integral(a: Vec3, b: Vec3, c: Vec3, w: &HomogeneousDensity, level: usize) -> f64 {
    if level == 0 {
        let area = 0.5 * norm(crate::vecn::cross(sub(b, a), sub(c, a)));
        let centroid = scale(add(add(a, b), c), 1.0 / 3.0);
        return area * w.eval(centroid).unwrap_or(0.0);
    }
    let ab = scale(add(a, b), 0.5);
    let bc = scale(add(b, c), 0.5);
    let ca = scale(add(c, a), 0.5);
    triangle_integral(a, ab, ca, w, level - 1)
        + triangle_integral(ab, b, bc, w, level - 1)
        + triangle_integral(ca, bc, c, w, level - 1)
        + triangle_integral(ab, bc, ca, w, level - 1)
}

/// Reweights the raw measure of `k` to exponent `p`:
/// each atom picks up `h_K(normal)^{1-p}`.
pub fn lp_surface_from_raw(
    s: &DiscreteSurfaceMeasure,
    k: &Polytope,
    p: f64,
) -> Result<DiscreteSurfaceMeasure> {
    if p < 1.0 {
        return Err(Error::InvalidArgument("surface reweighting needs p >= 1".into()));
    }
    if s.p != 1.0 {
        return Err(Error::InvalidArgument("reweighting starts from the raw measure".into()));
    }
    let atoms = s
        .atoms
        .iter()
        .map(|a| Atom {
            normal: a.normal,
            weight: k.support(a.normal).powf(1.0 - p) * a.weight,
        })
        .collect();
    DiscreteSurfaceMeasure::new(s.dim, p, s.density_label.clone(), atoms)
}

/// Surface measure of a polytope directly at exponent `p`.
pub fn lp_surface_polytope(
    k: &Polytope,
    w: &HomogeneousDensity,
    p: f64,
) -> Result<DiscreteSurfaceMeasure> {
    let raw = surface_mu_polytope(k, w)?;
    if p == 1.0 {
        Ok(raw)
    } else {
        lp_surface_from_raw(&raw, k, p)
    }
}

/// Smooth-body surface measure of an ellipsoid on a grid:
/// `g(u) = h(u)^{1-p} f(u) w(grad h(u))` with the closed-form curvature
/// function of the ellipsoid.
pub fn lp_surface_ellipsoid(
    e: &Ellipsoid,
    w: &HomogeneousDensity,
    p: f64,
    grid: Arc<SphereGrid>,
) -> Result<ContinuousSurfaceMeasure> {
    if e.dim() != w.dim() || grid.dim() != w.dim() {
        return Err(Error::InvalidArgument("dim mismatch in ellipsoid measure".into()));
    }
    let values: Vec<f64> = grid
        .nodes()
        .iter()
        .map(|&u| {
            let h = e.support(u);
            let f = e.curvature_function(u);
            let boundary = e.boundary_point(u);
            h.powf(1.0 - p) * f * w.eval(boundary).unwrap_or(0.0)
        })
        .collect();
    ContinuousSurfaceMeasure::new(p, w.label().to_string(), grid, values)
}

/// Result of the planar support-field route: the measure plus the amount of
/// measure mass clamped away where the discrete curvature went negative
/// (nonzero only for data that is not a genuine support function).
#[derive(Debug, Clone)]
pub struct FieldMeasure {
    pub measure: ContinuousSurfaceMeasure,
    pub clamped_mass: f64,
}

/// Planar surface measure of a support field.
///
/// The curvature density `h'' + h` is discretized by the cosine-corrected
/// second difference `(h_{j-1} + h_{j+1} - 2 cos(d) h_j) / (2 - 2 cos(d))`,
/// which is nonnegative on exact support samples (sublinearity of the
/// support function) and reproduces atom masses of polytopal data by
/// telescoping. Boundary points use the matching centered first difference.
pub fn surface_mu_from_support_field_2d(
    h: &SupportField,
    w: &HomogeneousDensity,
    p: f64,
) -> Result<FieldMeasure> {
    let grid = h.grid().clone();
    if grid.dim() != 2 || w.dim() != 2 {
        return Err(Error::InvalidArgument("field measure route is planar only".into()));
    }
    let (ok, defect) = crate::body::is_support_consistent(h, 1e-2);
    if !ok {
        return Err(Error::NumericDegeneracy(format!(
            "support field inconsistent (defect {defect:.3e} > 1e-2)"
        )));
    }
    let m = grid.len();
    let delta = 2.0 * std::f64::consts::PI / m as f64;
    let denom = 2.0 - 2.0 * delta.cos();
    let two_sin = 2.0 * delta.sin();
    let hv = h.values();
    let mut values = vec![0.0; m];
    let mut clamped = 0.0;
    for j in 0..m {
        let hm = hv[(j + m - 1) % m];
        let hp = hv[(j + 1) % m];
        let kappa = (hm + hp - 2.0 * delta.cos() * hv[j]) / denom;
        let dh = (hp - hm) / two_sin;
        let u = grid.node(j);
        let gamma = [
            hv[j] * u[0] - dh * u[1],
            hv[j] * u[1] + dh * u[0],
            0.0,
        ];
        let omega = w.eval(gamma).unwrap_or(0.0);
        let factor = hv[j].powf(1.0 - p) * omega;
        if kappa < 0.0 {
            clamped += -kappa * factor * delta;
            values[j] = 0.0;
        } else {
            values[j] = kappa * factor;
        }
    }
    Ok(FieldMeasure {
        measure: ContinuousSurfaceMeasure::new(p, w.label().to_string(), grid, values)?,
        clamped_mass: clamped,
    })
}

/// Blaschke addition at the measure level. Discrete measures take the atom
/// union (bit-identical normals merge); continuous measures add nodewise.
pub fn blaschke_add(a: &SurfaceMeasure, b: &SurfaceMeasure) -> Result<SurfaceMeasure> {
    if a.dim() != b.dim() || a.p() != b.p() || a.density_label() != b.density_label() {
        return Err(Error::InvalidArgument(
            "blaschke addition needs matching dim, p and density".into(),
        ));
    }
    match (a, b) {
        (SurfaceMeasure::Discrete(x), SurfaceMeasure::Discrete(y)) => {
            let mut atoms = x.atoms.clone();
            for atom in &y.atoms {
                let key = atom.normal.map(f64::to_bits);
                match atoms.iter_mut().find(|a| a.normal.map(f64::to_bits) == key) {
                    Some(existing) => existing.weight += atom.weight,
                    None => atoms.push(*atom),
                }
            }
            Ok(SurfaceMeasure::Discrete(DiscreteSurfaceMeasure::new(
                x.dim,
                x.p,
                x.density_label.clone(),
                atoms,
            )?))
        }
        (SurfaceMeasure::Continuous(x), SurfaceMeasure::Continuous(y)) => {
            if !x.grid.same_layout(&y.grid) {
                return Err(Error::GridMismatch("blaschke addition on one grid".into()));
            }
            let values = x.values.iter().zip(&y.values).map(|(&a, &b)| a + b).collect();
            Ok(SurfaceMeasure::Continuous(ContinuousSurfaceMeasure::new(
                x.p,
                x.density_label.clone(),
                x.grid.clone(),
                values,
            )?))
        }
        _ => Err(Error::InvalidArgument(
            "blaschke addition needs measures of the same kind".into(),
        )),
    }
}

/// Scaling law for the surface measure of `lambda K`: every weight picks up
/// `lambda^{(1 - s p)/s}`.
pub fn scale_surface_measure(m: &SurfaceMeasure, lambda: f64, s: f64, p: f64) -> Result<SurfaceMeasure> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidArgument("scale factor must be > 0".into()));
    }
    let factor = lambda.powf((1.0 - s * p) / s);
    Ok(match m {
        SurfaceMeasure::Discrete(x) => SurfaceMeasure::Discrete(DiscreteSurfaceMeasure {
            dim: x.dim,
            p: x.p,
            density_label: x.density_label.clone(),
            atoms: x
                .atoms
                .iter()
                .map(|a| Atom { normal: a.normal, weight: a.weight * factor })
                .collect(),
        }),
        SurfaceMeasure::Continuous(x) => SurfaceMeasure::Continuous(ContinuousSurfaceMeasure {
            p: x.p,
            density_label: x.density_label.clone(),
            grid: x.grid.clone(),
            values: x.values.iter().map(|&v| v * factor).collect(),
        }),
    })
}

/// JSON dump of a discrete surface measure:
/// `{"dim":2,"p":1.0,"atoms":[{"normal":[...],"weight":w},...]}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct SurfaceMeasureJson {
    pub dim: usize,
    pub p: f64,
    pub atoms: Vec<AtomJson>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AtomJson {
    pub normal: Vec<f64>,
    pub weight: f64,
}

impl SurfaceMeasureJson {
    pub fn from_measure(m: &DiscreteSurfaceMeasure) -> Self {
        SurfaceMeasureJson {
            dim: m.dim,
            p: m.p,
            atoms: m
                .atoms
                .iter()
                .map(|a| AtomJson {
                    normal: crate::density::vec_to_json(a.normal, m.dim),
                    weight: a.weight,
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hull::convex_hull;
    use approx::assert_relative_eq;

    fn square() -> Polytope {
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

    fn cube() -> Polytope {
        let mut pts = Vec::new();
        for &x in &[-1.0, 1.0] {
            for &y in &[-1.0, 1.0] {
                for &z in &[-1.0, 1.0] {
                    pts.push([x, y, z]);
                }
            }
        }
        convex_hull(&pts, 3).unwrap()
    }

    #[test]
    fn square_lebesgue_atoms() {
        let m = surface_mu_polytope(&square(), &HomogeneousDensity::lebesgue(2)).unwrap();
        assert_eq!(m.atoms.len(), 4);
        for a in &m.atoms {
            assert_relative_eq!(a.weight, 2.0, max_relative = 1e-12);
            let ax = a.normal[0].abs();
            let ay = a.normal[1].abs();
            assert!((ax - 1.0).abs() < 1e-12 || (ay - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn square_norm_density_atoms() {
        let w = HomogeneousDensity::constant_profile(2, 1.0, 1.0).unwrap();
        let m = surface_mu_polytope(&square(), &w).unwrap();
        let expect = 2.0f64.sqrt() + (1.0 + 2.0f64.sqrt()).ln();
        for a in &m.atoms {
            assert_relative_eq!(a.weight, expect, max_relative = 1e-12);
        }
    }

    #[test]
    fn cube_lebesgue_atoms() {
        let m = surface_mu_polytope(&cube(), &HomogeneousDensity::lebesgue(3)).unwrap();
        assert_eq!(m.atoms.len(), 6);
        for a in &m.atoms {
            assert_relative_eq!(a.weight, 4.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn reweighting_examples() {
        let leb = HomogeneousDensity::lebesgue(2);
        let sq = square();
        let raw = surface_mu_polytope(&sq, &leb).unwrap();
        let same = lp_surface_from_raw(&raw, &sq, 1.0).unwrap();
        for (a, b) in raw.atoms.iter().zip(&same.atoms) {
            assert_eq!(a.weight, b.weight);
        }
        let p2 = lp_surface_from_raw(&raw, &sq, 2.0).unwrap();
        for a in &p2.atoms {
            assert_relative_eq!(a.weight, 2.0, max_relative = 1e-12);
        }
        let big = sq.scaled(2.0).unwrap();
        let raw2 = surface_mu_polytope(&big, &leb).unwrap();
        let p2 = lp_surface_from_raw(&raw2, &big, 2.0).unwrap();
        for a in &p2.atoms {
            assert_relative_eq!(a.weight, 2.0, max_relative = 1e-12);
        }
        assert!(lp_surface_from_raw(&raw, &sq, 0.5).is_err());
    }

    #[test]
    fn ellipsoid_measures() {
        let grid = SphereGrid::build(2, 2048).unwrap();
        let ball = Ellipsoid::ball(2, 1.0).unwrap();
        let leb = HomogeneousDensity::lebesgue(2);
        let m = lp_surface_ellipsoid(&ball, &leb, 1.0, grid.clone()).unwrap();
        assert!(m.values.iter().all(|&v| (v - 1.0).abs() < 1e-12));
        let w = HomogeneousDensity::constant_profile(2, 1.0, 2.0).unwrap();
        let m = lp_surface_ellipsoid(&ball, &w, 1.0, grid.clone()).unwrap();
        assert!(m.values.iter().all(|&v| (v - 1.0).abs() < 1e-12));
        // ellipse perimeter through the measure total
        let e = Ellipsoid::planar([[2.0, 0.0], [0.0, 1.0]]).unwrap();
        let m = lp_surface_ellipsoid(&e, &leb, 1.0, grid).unwrap();
        assert_relative_eq!(m.total_mass(), 9.688448220547675, max_relative = 1e-6);
    }

    #[test]
    fn field_route_ball_and_square() {
        let grid = SphereGrid::build(2, 2048).unwrap();
        let leb = HomogeneousDensity::lebesgue(2);
        let r = 2.5;
        let ball = SupportField::new(grid.clone(), vec![r; grid.len()]).unwrap();
        let fm = surface_mu_from_support_field_2d(&ball, &leb, 1.0).unwrap();
        assert!(fm.measure.values.iter().all(|&v| (v - r).abs() < 1e-9));
        assert_eq!(fm.clamped_mass, 0.0);

        let sq = crate::body::Body::Polytope(square());
        let h = SupportField::sample(grid.clone(), &sq).unwrap();
        let fm = surface_mu_from_support_field_2d(&h, &leb, 1.0).unwrap();
        assert!((fm.measure.total_mass() - 8.0).abs() / 8.0 < 1e-2);
        assert!(fm.clamped_mass < 1e-6);
    }

    #[test]
    fn field_route_smooth_matches_arclength() {
        let grid = SphereGrid::build(2, 2048).unwrap();
        let leb = HomogeneousDensity::lebesgue(2);
        let h = SupportField::new(
            grid.clone(),
            grid.nodes()
                .iter()
                .map(|v| {
                    let th = v[1].atan2(v[0]);
                    1.0 + 0.1 * (2.0 * th).cos()
                })
                .collect(),
        )
        .unwrap();
        let fm = surface_mu_from_support_field_2d(&h, &leb, 1.0).unwrap();
        // arclength of the boundary: integral of h'' + h over the period is
        // 2 pi times the mean of h, exactly 2 pi here.
        assert!((fm.measure.total_mass() - 2.0 * std::f64::consts::PI).abs() < 1e-6);
    }

    #[test]
    fn field_route_rejects_bad_data() {
        let grid = SphereGrid::build(2, 512).unwrap();
        let leb = HomogeneousDensity::lebesgue(2);
        let bad = SupportField::new(
            grid.clone(),
            grid.nodes().iter().map(|v| 1.0 + 0.9 * v[0].powi(3)).collect(),
        )
        .unwrap();
        assert!(surface_mu_from_support_field_2d(&bad, &leb, 1.0).is_err());
    }

    #[test]
    fn field_route_clamps_mildly_nonconvex_data() {
        let grid = SphereGrid::build(2, 1024).unwrap();
        let leb = HomogeneousDensity::lebesgue(2);
        // h'' + h = 1 - 1.02 cos(2 theta) dips slightly negative
        let h = SupportField::new(
            grid.clone(),
            grid.nodes()
                .iter()
                .map(|v| {
                    let th = v[1].atan2(v[0]);
                    1.0 + 0.34 * (2.0 * th).cos()
                })
                .collect(),
        )
        .unwrap();
        let fm = surface_mu_from_support_field_2d(&h, &leb, 1.0).unwrap();
        assert!(fm.clamped_mass > 0.0);
    }

    #[test]
    fn blaschke_examples() {
        let leb = HomogeneousDensity::lebesgue(2);
        let sq = surface_mu_polytope(&square(), &leb).unwrap();
        let doubled = blaschke_add(
            &SurfaceMeasure::Discrete(sq.clone()),
            &SurfaceMeasure::Discrete(sq.clone()),
        )
        .unwrap();
        match &doubled {
            SurfaceMeasure::Discrete(m) => {
                assert_eq!(m.atoms.len(), 4);
                for a in &m.atoms {
                    assert_relative_eq!(a.weight, 4.0, max_relative = 1e-14);
                }
            }
            _ => panic!(),
        }

        let cross = convex_hull(
            &[
                [1.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
                [-1.0, 0.0, 0.0],
                [0.0, -1.0, 0.0],
            ],
            2,
        )
        .unwrap();
        let cr = surface_mu_polytope(&cross, &leb).unwrap();
        let sum = blaschke_add(
            &SurfaceMeasure::Discrete(sq.clone()),
            &SurfaceMeasure::Discrete(cr),
        )
        .unwrap();
        match &sum {
            SurfaceMeasure::Discrete(m) => assert_eq!(m.atoms.len(), 8),
            _ => panic!(),
        }

        // zero extension leaves the measure unchanged
        let zero = DiscreteSurfaceMeasure::new(
            2,
            1.0,
            leb.label().to_string(),
            vec![Atom { normal: [0.6, 0.8, 0.0], weight: 0.0 }],
        )
        .unwrap();
        let same = blaschke_add(
            &SurfaceMeasure::Discrete(sq.clone()),
            &SurfaceMeasure::Discrete(zero),
        )
        .unwrap();
        assert_relative_eq!(same.total_mass(), sq.total_mass(), max_relative = 1e-14);

        // mismatched p rejected
        let p2 = lp_surface_from_raw(&sq, &square(), 2.0).unwrap();
        assert!(blaschke_add(
            &SurfaceMeasure::Discrete(sq.clone()),
            &SurfaceMeasure::Discrete(p2)
        )
        .is_err());
    }

    #[test]
    fn blaschke_commutes() {
        let leb = HomogeneousDensity::lebesgue(2);
        let a = SurfaceMeasure::Discrete(surface_mu_polytope(&square(), &leb).unwrap());
        let tri = convex_hull(&[[-0.3, -0.3, 0.0], [1.0, -0.3, 0.0], [-0.3, 1.0, 0.0]], 2).unwrap();
        let b = SurfaceMeasure::Discrete(surface_mu_polytope(&tri, &leb).unwrap());
        let ab = blaschke_add(&a, &b).unwrap();
        let ba = blaschke_add(&b, &a).unwrap();
        assert_relative_eq!(ab.total_mass(), ba.total_mass(), max_relative = 1e-14);
        if let (SurfaceMeasure::Discrete(x), SurfaceMeasure::Discrete(y)) = (&ab, &ba) {
            let mut ax: Vec<(u64, u64, u64)> =
                x.atoms.iter().map(|a| (a.normal[0].to_bits(), a.normal[1].to_bits(), a.weight.to_bits())).collect();
            let mut bx: Vec<(u64, u64, u64)> =
                y.atoms.iter().map(|a| (a.normal[0].to_bits(), a.normal[1].to_bits(), a.weight.to_bits())).collect();
            ax.sort_unstable();
            bx.sort_unstable();
            assert_eq!(ax, bx);
        }
    }

    #[test]
    fn scaling_laws() {
        let leb = HomogeneousDensity::lebesgue(2);
        let s = leb.s_exponent();
        let sq = SurfaceMeasure::Discrete(surface_mu_polytope(&square(), &leb).unwrap());
        let same = scale_surface_measure(&sq, 1.0, s, 1.0).unwrap();
        assert_relative_eq!(same.total_mass(), sq.total_mass(), max_relative = 1e-14);
        // n=2 lebesgue, p=2: invariant under scaling
        let inv = scale_surface_measure(&sq, 2.0, s, 2.0).unwrap();
        assert_relative_eq!(inv.total_mass(), sq.total_mass(), max_relative = 1e-14);
        // p=1: factor 2
        let twice = scale_surface_measure(&sq, 2.0, s, 1.0).unwrap();
        assert_relative_eq!(twice.total_mass(), 2.0 * sq.total_mass(), max_relative = 1e-14);
    }

    #[test]
    fn polytope_scaling_matches_law() {
        for w in [
            HomogeneousDensity::lebesgue(2),
            HomogeneousDensity::constant_profile(2, 1.0, 1.0).unwrap(),
        ] {
            let s = w.s_exponent();
            let base = surface_mu_polytope(&square(), &w).unwrap();
            for lambda in [0.5, 2.0] {
                let scaled_body = surface_mu_polytope(&square().scaled(lambda).unwrap(), &w).unwrap();
                let factor = lambda.powf((1.0 - s) / s);
                for (a, b) in scaled_body.atoms.iter().zip(&base.atoms) {
                    assert!((a.weight - factor * b.weight).abs() <= 1e-9 * a.weight.abs().max(1e-9));
                }
            }
        }
    }

    #[test]
    fn representation_consistency_square() {
        // atomic route vs planar field route, total masses agree
        let leb = HomogeneousDensity::lebesgue(2);
        let atomic = surface_mu_polytope(&square(), &leb).unwrap();
        let grid = SphereGrid::build(2, 2048).unwrap();
        let h = SupportField::sample(grid, &crate::body::Body::Polytope(square())).unwrap();
        let field = surface_mu_from_support_field_2d(&h, &leb, 1.0).unwrap();
        let a = atomic.total_mass();
        let b = field.measure.total_mass();
        assert!((a - b).abs() / a < 1e-2);
    }

    #[test]
    fn ellipsoid_identity_matches_ball() {
        let grid = SphereGrid::build(3, 32).unwrap();
        let leb = HomogeneousDensity::lebesgue(3);
        let ball = Ellipsoid::ball(3, 1.0).unwrap();
        let m = lp_surface_ellipsoid(&ball, &leb, 2.0, grid).unwrap();
        assert!(m.values.iter().all(|&v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn degenerate_measure_rejected() {
        let atoms = vec![
            Atom { normal: [1.0, 0.0, 0.0], weight: 1.0 },
            Atom { normal: [-1.0, 0.0, 0.0], weight: 1.0 },
        ];
        assert!(DiscreteSurfaceMeasure::new(2, 1.0, "lebesgue".into(), atoms).is_err());
    }
}
