//! Seeded random corpora of bodies and the density pool used by the
//! verification suites, plus the fixed bodies shared across tests and
//! examples.

use crate::body::{Body, Polytope, RadialField};
use crate::density::HomogeneousDensity;
use crate::error::Result;
use crate::grid::SphereGrid;
use crate::hull::convex_hull;
use crate::vecn::{normalize, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// What a corpus entry is, for case selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BodyKind {
    Polytope,
    Ellipsoid,
    StarField,
}

#[derive(Clone)]
pub struct CorpusEntry {
    pub label: String,
    pub body: Arc<Body>,
    pub kind: BodyKind,
    pub symmetric: bool,
}

pub struct Corpus {
    pub dim: usize,
    pub entries: Vec<CorpusEntry>,
}

impl Corpus {
    /// Entries of one kind, in corpus order.
    pub fn of_kind(&self, kind: BodyKind) -> Vec<&CorpusEntry> {
        self.entries.iter().filter(|e| e.kind == kind).collect()
    }

    /// Convex entries (polytopes and ellipsoids).
    pub fn convex(&self) -> Vec<&CorpusEntry> {
        self.entries
            .iter()
            .filter(|e| e.kind != BodyKind::StarField)
            .collect()
    }
}

/// The density pool for a dimension: Lebesgue, the radial powers
/// `|x|^q, q in {0.5, 1, 2}`, and a cone density.
pub fn density_pool(dim: usize) -> Vec<Arc<HomogeneousDensity>> {
    let axis = if dim == 2 { [0.0, 1.0, 0.0] } else { [0.0, 0.0, 1.0] };
    vec![
        HomogeneousDensity::lebesgue(dim),
        HomogeneousDensity::constant_profile(dim, 1.0, 0.5).unwrap(),
        HomogeneousDensity::constant_profile(dim, 1.0, 1.0).unwrap(),
        HomogeneousDensity::constant_profile(dim, 1.0, 2.0).unwrap(),
        HomogeneousDensity::cone(dim, axis, 1.0).unwrap(),
    ]
}

pub const P_VALUES: [f64; 4] = [1.0, 1.5, 2.0, 3.0];
pub const TAU_VALUES: [f64; 5] = [-1.0, -0.6, 0.0, 0.3, 1.0];

/// Deterministic corpus of `count` bodies: a rotation of asymmetric
/// polytopes, origin-symmetric polytopes, ellipsoids and perturbed star
/// fields (even and uneven perturbations alternate).
pub fn gen_corpus(seed: u64, dim: usize, count: usize, star_grid: Arc<SphereGrid>) -> Result<Corpus> {
    let mut entries = Vec::with_capacity(count);
    for i in 0..count {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(((dim as u64) << 32) | i as u64);
        let entry = match i % 4 {
            0 => random_polytope(&mut rng, dim, false, i)?,
            1 => {
                if i % 8 == 1 {
                    random_polytope(&mut rng, dim, true, i)?
                } else {
                    random_ellipsoid(&mut rng, dim, i)?
                }
            }
            2 => random_star_field(&mut rng, dim, star_grid.clone(), true, i)?,
            _ => random_star_field(&mut rng, dim, star_grid.clone(), false, i)?,
        };
        entries.push(entry);
    }
    Ok(Corpus { dim, entries })
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec3 {
    loop {
        let v = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            if dim == 3 { rng.gen_range(-1.0..1.0) } else { 0.0 },
        ];
        if let Some(u) = normalize(v) {
            if crate::vecn::norm(v) > 0.2 {
                return u;
            }
        }
    }
}

fn random_polytope(
    rng: &mut ChaCha8Rng,
    dim: usize,
    symmetric: bool,
    index: usize,
) -> Result<CorpusEntry> {
    for _attempt in 0..64 {
        let k = rng.gen_range(5..=20usize);
        let mut pts: Vec<Vec3> = (0..k)
            .map(|_| {
                let u = random_unit(rng, dim);
                let r = rng.gen_range(0.6..1.4);
                [u[0] * r, u[1] * r, u[2] * r]
            })
            .collect();
        if symmetric {
            let negs: Vec<Vec3> = pts.iter().map(|&p| [-p[0], -p[1], -p[2]]).collect();
            pts.extend(negs);
        }
        if let Ok(hull) = convex_hull(&pts, dim) {
            let margin = hull
                .facets()
                .iter()
                .map(|f| f.offset)
                .fold(f64::INFINITY, f64::min);
            if margin >= 0.05 {
                let tag = if symmetric { "sympoly" } else { "poly" };
                return Ok(CorpusEntry {
                    label: format!("{tag}{index:02}"),
                    body: Arc::new(Body::Polytope(hull)),
                    kind: BodyKind::Polytope,
                    symmetric,
                });
            }
        }
    }
    Err(crate::error::Error::Geometry(
        "could not draw a polytope containing the origin".into(),
    ))
}

fn rotation_2d(theta: f64) -> [[f64; 3]; 3] {
    let (s, c) = theta.sin_cos();
    [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
}

fn mat_mul(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for (k, bk) in b.iter().enumerate() {
                out[i][j] += a[i][k] * bk[j];
            }
        }
    }
    out
}

fn random_ellipsoid(rng: &mut ChaCha8Rng, dim: usize, index: usize) -> Result<CorpusEntry> {
    let map = if dim == 2 {
        let rot = rotation_2d(rng.gen_range(0.0..std::f64::consts::PI));
        let d = [
            [rng.gen_range(0.5..2.0), 0.0, 0.0],
            [0.0, rng.gen_range(0.5..2.0), 0.0],
            [0.0, 0.0, 1.0],
        ];
        mat_mul(&rot, &d)
    } else {
        let (s1, c1) = rng.gen_range(0.0..std::f64::consts::PI).sin_cos();
        let (s2, c2) = rng.gen_range(0.0..std::f64::consts::PI).sin_cos();
        let rz = [[c1, -s1, 0.0], [s1, c1, 0.0], [0.0, 0.0, 1.0]];
        let ry = [[c2, 0.0, s2], [0.0, 1.0, 0.0], [-s2, 0.0, c2]];
        let d = [
            [rng.gen_range(0.5..2.0), 0.0, 0.0],
            [0.0, rng.gen_range(0.5..2.0), 0.0],
            [0.0, 0.0, rng.gen_range(0.5..2.0)],
        ];
        mat_mul(&mat_mul(&rz, &ry), &d)
    };
    Ok(CorpusEntry {
        label: format!("ell{index:02}"),
        body: Arc::new(Body::Ellipsoid(crate::body::Ellipsoid::new(dim, map)?)),
        kind: BodyKind::Ellipsoid,
        symmetric: true,
    })
}

/// Star body `rho(v) = 1 + 0.3 q(v)` for a random polynomial `q` in the
/// components, normalized so the perturbation stays below 0.3. Even
/// perturbations use only even-degree terms, which keeps `rho(-v) = rho(v)`
/// bit-exact on antipodally closed grids.
fn random_star_field(
    rng: &mut ChaCha8Rng,
    dim: usize,
    grid: Arc<SphereGrid>,
    even: bool,
    index: usize,
) -> Result<CorpusEntry> {
    let c0: f64 = rng.gen_range(-1.0..1.0);
    let mut quad = [[0.0f64; 3]; 3];
    for i in 0..dim {
        for j in i..dim {
            quad[i][j] = rng.gen_range(-1.0..1.0);
        }
    }
    let mut lin = [0.0f64; 3];
    if !even {
        for l in lin.iter_mut().take(dim) {
            *l = rng.gen_range(-1.0..1.0);
        }
    }
    let mut bound = c0.abs() + lin.iter().map(|v| v.abs()).sum::<f64>();
    for row in &quad {
        for v in row {
            bound += v.abs();
        }
    }
    let scale = 1.0 / bound.max(1e-9);
    let q = move |v: Vec3| {
        let mut acc = c0;
        for i in 0..3 {
            acc += lin[i] * v[i];
            for j in i..3 {
                acc += quad[i][j] * v[i] * v[j];
            }
        }
        acc * scale
    };
    let values: Vec<f64> = grid.nodes().iter().map(|&v| 1.0 + 0.3 * q(v)).collect();
    let field = RadialField::new(grid, values)?;
    let tag = if even { "evenstar" } else { "star" };
    Ok(CorpusEntry {
        label: format!("{tag}{index:02}"),
        body: Arc::new(Body::Radial(field)),
        kind: BodyKind::StarField,
        symmetric: even,
    })
}

/// Fixed bodies used by anchors, examples and the convergence study.
pub mod fixtures {
    use super::*;

    pub fn square() -> Polytope {
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

    pub fn cross_polytope_2d() -> Polytope {
        convex_hull(
            &[
                [1.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
                [-1.0, 0.0, 0.0],
                [0.0, -1.0, 0.0],
            ],
            2,
        )
        .unwrap()
    }

    pub fn simplex_2d() -> Polytope {
        convex_hull(&[[-0.3, -0.3, 0.0], [1.0, -0.3, 0.0], [-0.3, 1.0, 0.0]], 2).unwrap()
    }

    pub fn cube() -> Polytope {
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

    pub fn ellipse_2_1() -> crate::body::Ellipsoid {
        crate::body::Ellipsoid::planar([[2.0, 0.0], [0.0, 1.0]]).unwrap()
    }

    pub fn disk() -> Body {
        Body::Ball { dim: 2, radius: 1.0 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_deterministic() {
        let grid = SphereGrid::build(2, 128).unwrap();
        let a = gen_corpus(42, 2, 12, grid.clone()).unwrap();
        let b = gen_corpus(42, 2, 12, grid.clone()).unwrap();
        assert_eq!(a.entries.len(), 12);
        for (x, y) in a.entries.iter().zip(&b.entries) {
            assert_eq!(x.label, y.label);
            match (x.body.as_ref(), y.body.as_ref()) {
                (Body::Polytope(p), Body::Polytope(q)) => {
                    assert_eq!(p.vertices().len(), q.vertices().len());
                    for (a, b) in p.vertices().iter().zip(q.vertices()) {
                        assert_eq!(a.map(f64::to_bits), b.map(f64::to_bits));
                    }
                }
                (Body::Radial(p), Body::Radial(q)) => {
                    for (a, b) in p.values().iter().zip(q.values()) {
                        assert_eq!(a.to_bits(), b.to_bits());
                    }
                }
                (Body::Ellipsoid(_), Body::Ellipsoid(_)) => {}
                _ => panic!("kind mismatch"),
            }
        }
        let c = gen_corpus(43, 2, 12, grid).unwrap();
        assert_ne!(
            format!("{:?}", a.entries[0].body.support([1.0, 0.0, 0.0])),
            format!("{:?}", c.entries[0].body.support([1.0, 0.0, 0.0]))
        );
    }

    #[test]
    fn polytopes_contain_origin_with_margin() {
        let grid = SphereGrid::build(2, 64).unwrap();
        for dim in [2usize, 3] {
            let g3 = SphereGrid::build(3, 16).unwrap();
            let corpus = gen_corpus(
                7,
                dim,
                16,
                if dim == 2 { grid.clone() } else { g3.clone() },
            )
            .unwrap();
            for e in &corpus.entries {
                if let Body::Polytope(p) = e.body.as_ref() {
                    for f in p.facets() {
                        assert!(f.offset >= 0.05, "{}: margin {}", e.label, f.offset);
                    }
                }
            }
        }
    }

    #[test]
    fn symmetric_entries_are_symmetric() {
        let grid = SphereGrid::build(2, 256).unwrap();
        let corpus = gen_corpus(11, 2, 16, grid.clone()).unwrap();
        for e in &corpus.entries {
            if !e.symmetric {
                continue;
            }
            for &u in grid.nodes().iter().step_by(17) {
                let h = e.body.support(u);
                let hn = e.body.support([-u[0], -u[1], -u[2]]);
                assert!((h - hn).abs() <= 1e-12 * h.abs().max(1.0), "{}", e.label);
            }
        }
    }

    #[test]
    fn star_fields_positive() {
        let grid = SphereGrid::build(3, 16).unwrap();
        let corpus = gen_corpus(3, 3, 12, grid).unwrap();
        for e in &corpus.entries {
            if let Body::Radial(f) = e.body.as_ref() {
                assert!(f.values().iter().all(|&v| v > 0.5 && v < 1.5));
            }
        }
    }
}
