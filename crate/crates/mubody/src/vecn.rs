//! Small fixed-size vector helpers.
//!
//! All points and directions are stored as `[f64; 3]`; planar (n = 2) data
//! keeps the third component at zero so the same kernels serve both
//! dimensions.

pub type Vec3 = [f64; 3];

#[inline]
pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn scale(a: Vec3, t: f64) -> Vec3 {
    [a[0] * t, a[1] * t, a[2] * t]
}

#[inline]
pub fn neg(a: Vec3) -> Vec3 {
    [-a[0], -a[1], -a[2]]
}

#[inline]
pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Returns `a / |a|`, or `None` for (near-)zero input.
pub fn normalize(a: Vec3) -> Option<Vec3> {
    let n = norm(a);
    if n <= 1e-300 {
        None
    } else {
        Some(scale(a, 1.0 / n))
    }
}

/// Deterministic pairwise summation. The reduction tree depends only on the
/// slice length, so results are reproducible bit-for-bit for a given input
/// order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 32 {
        let mut acc = 0.0;
        for &v in values {
            acc += v;
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Pairwise summation of `f(i)` over `0..len` without materializing the
/// terms; same tree shape as [`pairwise_sum`].
pub fn pairwise_sum_by<F: Fn(usize) -> f64>(len: usize, f: &F) -> f64 {
    fn go<F: Fn(usize) -> f64>(lo: usize, hi: usize, f: &F) -> f64 {
        if hi - lo <= 32 {
            let mut acc = 0.0;
            for i in lo..hi {
                acc += f(i);
            }
            return acc;
        }
        let mid = lo + (hi - lo) / 2;
        go(lo, mid, f) + go(mid, hi, f)
    }
    go(0, len, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_naive() {
        let v: Vec<f64> = (0..1000).map(|i| (i as f64).sin()).collect();
        let naive: f64 = v.iter().sum();
        assert!((pairwise_sum(&v) - naive).abs() < 1e-10);
        assert_eq!(pairwise_sum(&v), pairwise_sum_by(v.len(), &|i| v[i]));
    }

    #[test]
    fn cross_orthogonal() {
        let a = [1.0, 2.0, 3.0];
        let b = [-0.5, 0.25, 1.0];
        let c = cross(a, b);
        assert!(dot(a, c).abs() < 1e-12);
        assert!(dot(b, c).abs() < 1e-12);
    }
}
