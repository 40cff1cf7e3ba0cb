//! Convex hulls in dimensions 2 and 3.
//!
//! 2d hulls use the monotone chain; 3d hulls are built incrementally
//! (visible-face deletion plus horizon filling) and optionally merge
//! coplanar triangles into polygon facets. The origin must be strictly
//! interior to the result; callers re-center their point sets first.

use crate::body::{Facet, Polytope};
use crate::error::{Error, Result};
use crate::vecn::{cross, dot, norm, normalize, sub, Vec3};

/// Convex hull with coplanar facet merging enabled (the default used by the
/// rest of the crate).
pub fn convex_hull(points: &[Vec3], dim: usize) -> Result<Polytope> {
    convex_hull_opts(points, dim, true)
}

/// Convex hull; `merge_coplanar` controls whether adjacent coplanar 3d
/// triangles are merged into polygon facets.
pub fn convex_hull_opts(points: &[Vec3], dim: usize, merge_coplanar: bool) -> Result<Polytope> {
    match dim {
        2 => hull_2d(points),
        3 => hull_3d(points, merge_coplanar),
        _ => Err(Error::InvalidArgument(format!("dim must be 2 or 3, got {dim}"))),
    }
}

fn hull_2d(points: &[Vec3]) -> Result<Polytope> {
    if points.len() < 3 {
        return Err(Error::Geometry("2d hull needs at least 3 points".into()));
    }
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| {
        points[a][0]
            .partial_cmp(&points[b][0])
            .unwrap()
            .then(points[a][1].partial_cmp(&points[b][1]).unwrap())
    });
    idx.dedup_by(|&mut a, &mut b| {
        (points[a][0] - points[b][0]).abs() < 1e-12 && (points[a][1] - points[b][1]).abs() < 1e-12
    });
    let cross2 = |o: Vec3, a: Vec3, b: Vec3| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2
            && cross2(points[lower[lower.len() - 2]], points[lower[lower.len() - 1]], points[i]) <= 0.0
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2
            && cross2(points[upper[upper.len() - 2]], points[upper[upper.len() - 1]], points[i]) <= 0.0
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        return Err(Error::Geometry("degenerate 2d hull (collinear points)".into()));
    }
    // counter-clockwise hull; re-index vertices
    let vertices: Vec<Vec3> = lower.iter().map(|&i| points[i]).collect();
    let n = vertices.len();
    let mut facets = Vec::with_capacity(n);
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        let e = sub(b, a);
        let normal = normalize([e[1], -e[0], 0.0])
            .ok_or_else(|| Error::Geometry("zero-length edge".into()))?;
        let offset = dot(normal, a);
        if offset <= 0.0 {
            return Err(Error::Geometry("origin not interior to 2d hull".into()));
        }
        facets.push(Facet {
            normal,
            offset,
            vertices: vec![i, (i + 1) % n],
        });
    }
    Polytope::new(2, vertices, facets)
}

#[derive(Clone, Copy)]
struct Tri {
    v: [usize; 3],
    normal: Vec3,
    offset: f64,
}

fn tri_from(points: &[Vec3], a: usize, b: usize, c: usize) -> Option<Tri> {
    let n = cross(sub(points[b], points[a]), sub(points[c], points[a]));
    let n = normalize(n)?;
    Some(Tri {
        v: [a, b, c],
        normal: n,
        offset: dot(n, points[a]),
    })
}

fn hull_3d(points: &[Vec3], merge_coplanar: bool) -> Result<Polytope> {
    if points.len() < 4 {
        return Err(Error::Geometry("3d hull needs at least 4 points".into()));
    }
    let scale = points.iter().map(|p| norm(*p)).fold(0.0, f64::max).max(1.0);
    let eps = 1e-9 * scale;

    // Initial simplex: spread-out quadruple.
    let i0 = (0..points.len())
        .min_by(|&a, &b| points[a][0].partial_cmp(&points[b][0]).unwrap())
        .unwrap();
    let i1 = (0..points.len())
        .max_by(|&a, &b| {
            norm(sub(points[a], points[i0]))
                .partial_cmp(&norm(sub(points[b], points[i0])))
                .unwrap()
        })
        .unwrap();
    if norm(sub(points[i1], points[i0])) < eps {
        return Err(Error::Geometry("degenerate input: all points coincide".into()));
    }
    let line_dir = normalize(sub(points[i1], points[i0])).unwrap();
    let dist_line = |p: Vec3| {
        let d = sub(p, points[i0]);
        norm(cross(d, line_dir))
    };
    let i2 = (0..points.len())
        .max_by(|&a, &b| dist_line(points[a]).partial_cmp(&dist_line(points[b])).unwrap())
        .unwrap();
    if dist_line(points[i2]) < eps {
        return Err(Error::Geometry("degenerate input: points collinear".into()));
    }
    let plane_n = normalize(cross(sub(points[i1], points[i0]), sub(points[i2], points[i0]))).unwrap();
    let dist_plane = |p: Vec3| dot(sub(p, points[i0]), plane_n).abs();
    let i3 = (0..points.len())
        .max_by(|&a, &b| dist_plane(points[a]).partial_cmp(&dist_plane(points[b])).unwrap())
        .unwrap();
    if dist_plane(points[i3]) < eps {
        return Err(Error::Geometry("degenerate input: points coplanar".into()));
    }

    let inner = [
        (points[i0][0] + points[i1][0] + points[i2][0] + points[i3][0]) / 4.0,
        (points[i0][1] + points[i1][1] + points[i2][1] + points[i3][1]) / 4.0,
        (points[i0][2] + points[i1][2] + points[i2][2] + points[i3][2]) / 4.0,
    ];
    let orient = |t: Tri| -> Tri {
        if dot(t.normal, inner) > t.offset {
            Tri {
                v: [t.v[0], t.v[2], t.v[1]],
                normal: neg3(t.normal),
                offset: -t.offset,
            }
        } else {
            t
        }
    };
    let mut faces: Vec<Tri> = [
        (i0, i1, i2),
        (i0, i1, i3),
        (i0, i2, i3),
        (i1, i2, i3),
    ]
    .iter()
    .filter_map(|&(a, b, c)| tri_from(points, a, b, c))
    .map(orient)
    .collect();
    if faces.len() != 4 {
        return Err(Error::Geometry("degenerate initial simplex".into()));
    }

    for pi in 0..points.len() {
        if pi == i0 || pi == i1 || pi == i2 || pi == i3 {
            continue;
        }
        let p = points[pi];
        let visible: Vec<bool> = faces.iter().map(|f| dot(f.normal, p) - f.offset > eps).collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        // Horizon: directed edges of visible faces whose neighbor is hidden.
        let mut edge_count: std::collections::HashMap<(usize, usize), i32> =
            std::collections::HashMap::new();
        for (f, &vis) in faces.iter().zip(&visible) {
            if !vis {
                continue;
            }
            for k in 0..3 {
                let a = f.v[k];
                let b = f.v[(k + 1) % 3];
                *edge_count.entry((a.min(b), a.max(b))).or_insert(0) += if a < b { 1 } else { -1 };
            }
        }
        let mut horizon: Vec<(usize, usize)> = Vec::new();
        for (f, &vis) in faces.iter().zip(&visible) {
            if !vis {
                continue;
            }
            for k in 0..3 {
                let a = f.v[k];
                let b = f.v[(k + 1) % 3];
                if edge_count[&(a.min(b), a.max(b))] != 0 {
                    horizon.push((a, b));
                }
            }
        }
        faces = faces
            .into_iter()
            .zip(visible)
            .filter(|(_, vis)| !vis)
            .map(|(f, _)| f)
            .collect();
        for (a, b) in horizon {
            if let Some(t) = tri_from(points, a, b, pi) {
                faces.push(orient(t));
            }
        }
    }

    // Re-index to the vertices actually on the hull.
    let mut used: Vec<usize> = faces.iter().flat_map(|f| f.v).collect();
    used.sort_unstable();
    used.dedup();
    let remap: std::collections::HashMap<usize, usize> =
        used.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    let vertices: Vec<Vec3> = used.iter().map(|&i| points[i]).collect();
    for f in &mut faces {
        for v in &mut f.v {
            *v = remap[v];
        }
    }

    for f in &faces {
        if f.offset <= eps {
            return Err(Error::Geometry("origin not interior to 3d hull".into()));
        }
    }

    let facets = if merge_coplanar {
        merge_faces(&vertices, &faces)?
    } else {
        faces
            .iter()
            .map(|f| Facet {
                normal: f.normal,
                offset: f.offset,
                vertices: f.v.to_vec(),
            })
            .collect()
    };
    Polytope::new(3, vertices, facets)
}

fn neg3(v: Vec3) -> Vec3 {
    [-v[0], -v[1], -v[2]]
}

/// Merges adjacent coplanar triangles (normal agreement within 1e-9) into
/// polygon facets with a consistent outward loop.
fn merge_faces(vertices: &[Vec3], faces: &[Tri]) -> Result<Vec<Facet>> {
    let n = faces.len();
    let mut group = (0..n).collect::<Vec<usize>>();
    fn find(group: &mut Vec<usize>, i: usize) -> usize {
        let mut root = i;
        while group[root] != root {
            root = group[root];
        }
        let mut cur = i;
        while group[cur] != root {
            let next = group[cur];
            group[cur] = root;
            cur = next;
        }
        root
    }
    // adjacency by shared undirected edge; BTreeMap keeps the union order
    // (and with it the facet order) independent of hashing state
    let mut by_edge: std::collections::BTreeMap<(usize, usize), Vec<usize>> =
        std::collections::BTreeMap::new();
    for (fi, f) in faces.iter().enumerate() {
        for k in 0..3 {
            let a = f.v[k];
            let b = f.v[(k + 1) % 3];
            by_edge.entry((a.min(b), a.max(b))).or_default().push(fi);
        }
    }
    for ids in by_edge.values() {
        if ids.len() == 2 {
            let (a, b) = (ids[0], ids[1]);
            let close = norm(sub(faces[a].normal, faces[b].normal)) < 1e-9;
            if close {
                let (ra, rb) = (find(&mut group, a), find(&mut group, b));
                if ra != rb {
                    group[ra] = rb;
                }
            }
        }
    }
    let mut clusters: std::collections::BTreeMap<usize, Vec<usize>> =
        std::collections::BTreeMap::new();
    for i in 0..n {
        let r = find(&mut group, i);
        clusters.entry(r).or_default().push(i);
    }
    let mut facets = Vec::new();
    for ids in clusters.values() {
        if ids.len() == 1 {
            let f = faces[ids[0]];
            facets.push(Facet {
                normal: f.normal,
                offset: f.offset,
                vertices: f.v.to_vec(),
            });
            continue;
        }
        // boundary = directed edges whose reverse does not appear in the group
        let mut directed: std::collections::BTreeSet<(usize, usize)> =
            std::collections::BTreeSet::new();
        for &fi in ids {
            for k in 0..3 {
                directed.insert((faces[fi].v[k], faces[fi].v[(k + 1) % 3]));
            }
        }
        let boundary: Vec<(usize, usize)> = directed
            .iter()
            .filter(|(a, b)| !directed.contains(&(*b, *a)))
            .copied()
            .collect();
        if boundary.len() < 3 {
            return Err(Error::Geometry("facet merge produced a broken loop".into()));
        }
        let mut next: std::collections::BTreeMap<usize, usize> = std::collections::BTreeMap::new();
        for &(a, b) in &boundary {
            next.insert(a, b);
        }
        let start = boundary.iter().map(|&(a, _)| a).min().unwrap();
        let mut loop_ = vec![start];
        let mut cur = start;
        for _ in 0..boundary.len() {
            cur = *next
                .get(&cur)
                .ok_or_else(|| Error::Geometry("facet merge produced a broken loop".into()))?;
            if cur == start {
                break;
            }
            loop_.push(cur);
        }
        if loop_.len() != boundary.len() {
            return Err(Error::Geometry("facet merge produced multiple loops".into()));
        }
        // averaged plane over member triangles, weighted by nothing fancy
        let mut normal = [0.0; 3];
        for &fi in ids {
            normal = crate::vecn::add(normal, faces[fi].normal);
        }
        let normal = normalize(normal).ok_or_else(|| Error::Geometry("merged facet normal vanished".into()))?;
        let offset = loop_.iter().map(|&vi| dot(normal, vertices[vi])).sum::<f64>() / loop_.len() as f64;
        facets.push(Facet { normal, offset, vertices: loop_ });
    }
    Ok(facets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};

    #[test]
    fn square_hull() {
        let pts = [
            [1.0, 1.0, 0.0],
            [-1.0, 1.0, 0.0],
            [-1.0, -1.0, 0.0],
            [1.0, -1.0, 0.0],
        ];
        let p = convex_hull(&pts, 2).unwrap();
        assert_eq!(p.facets().len(), 4);
        assert_eq!(p.vertices().len(), 4);
    }

    #[test]
    fn interior_points_dropped() {
        let pts = [
            [1.0, 1.0, 0.0],
            [-1.0, 1.0, 0.0],
            [-1.0, -1.0, 0.0],
            [1.0, -1.0, 0.0],
            [0.1, 0.2, 0.0],
            [0.0, 0.0, 0.0],
        ];
        let p = convex_hull(&pts, 2).unwrap();
        assert_eq!(p.vertices().len(), 4);
    }

    #[test]
    fn cube_hull_merged_and_raw() {
        let mut pts = Vec::new();
        for &x in &[-1.0, 1.0] {
            for &y in &[-1.0, 1.0] {
                for &z in &[-1.0, 1.0] {
                    pts.push([x, y, z]);
                }
            }
        }
        let merged = convex_hull_opts(&pts, 3, true).unwrap();
        assert_eq!(merged.facets().len(), 6);
        for f in merged.facets() {
            assert_eq!(f.vertices.len(), 4);
            assert_relative_eq!(f.offset, 1.0, max_relative = 1e-12);
        }
        let raw = convex_hull_opts(&pts, 3, false).unwrap();
        assert_eq!(raw.facets().len(), 12);
    }

    #[test]
    fn random_hull_support_matches_point_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for dim in [2usize, 3] {
            let pts: Vec<Vec3> = (0..50)
                .map(|_| {
                    let mut v = [
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                        if dim == 3 { rng.gen_range(-1.0..1.0) } else { 0.0 },
                    ];
                    let n = norm(v);
                    let r = rng.gen_range(0.5..1.5) / n;
                    v = [v[0] * r, v[1] * r, v[2] * r];
                    v
                })
                .collect();
            let hull = convex_hull(&pts, dim).unwrap();
            for _ in 0..100 {
                let u = normalize([
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    if dim == 3 { rng.gen_range(-1.0..1.0) } else { 0.0 },
                ])
                .unwrap();
                let oracle = pts.iter().map(|&x| dot(u, x)).fold(f64::NEG_INFINITY, f64::max);
                assert!(
                    (hull.support(u) - oracle).abs() <= 1e-10 * oracle.abs().max(1.0),
                    "support mismatch in dim {dim}"
                );
            }
        }
    }

    #[test]
    fn degenerate_inputs_rejected() {
        assert!(convex_hull(&[[1.0, 0.0, 0.0], [2.0, 0.0, 0.0], [3.0, 0.0, 0.0]], 2).is_err());
        assert!(convex_hull(
            &[
                [1.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
                [-1.0, 0.0, 0.0],
                [0.0, -1.0, 0.0]
            ],
            3
        )
        .is_err());
        // origin outside
        assert!(convex_hull(
            &[[1.0, 1.0, 0.0], [2.0, 1.0, 0.0], [1.5, 2.0, 0.0]],
            2
        )
        .is_err());
    }

    #[test]
    fn facet_planes_contain_their_vertices() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let pts: Vec<Vec3> = (0..20)
            .map(|_| {
                normalize([
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                ])
                .map(|u| [u[0] * 1.2, u[1] * 1.2, u[2] * 1.2])
                .unwrap()
            })
            .collect();
        let hull = convex_hull(&pts, 3).unwrap();
        for f in hull.facets() {
            for &vi in &f.vertices {
                let d = dot(f.normal, hull.vertices()[vi]) - f.offset;
                assert!(d.abs() < 1e-9, "vertex off plane by {d:e}");
            }
        }
    }
}
