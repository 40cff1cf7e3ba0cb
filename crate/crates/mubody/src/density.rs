//! Positively homogeneous densities `w(x) = a(x/|x|) |x|^q` and the scalar
//! constants built from them.
//!
//! The stored homogeneity degree is `q = 1/r`, so the Lebesgue-type case
//! `r = infinity` is simply `q = 0`. The derived exponent is
//! `s = 1/(n + q)`.

use crate::error::{Error, Result};
use crate::grid::SphereGrid;
use crate::vecn::{dot, norm, scale, Vec3};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Angular profile `a(u)` of a homogeneous density.
#[derive(Debug, Clone)]
pub enum AngularProfile {
    /// `a(u) = c` with `c > 0`.
    Constant(f64),
    /// `a(u) = ((u . axis)_+)^q`; vanishes on a half-space.
    Cone { axis: Vec3 },
    /// Positive even profile tabulated on a grid, interpolated off-node.
    Table {
        grid: Arc<SphereGrid>,
        values: Vec<f64>,
    },
}

/// Density `w(x) = a(x/|x|) |x|^q`, together with the hypothesis flags used
/// to gate verification suites. Flags are declared per profile kind, not
/// inferred numerically.
#[derive(Debug, Clone)]
pub struct HomogeneousDensity {
    dim: usize,
    q: f64,
    profile: AngularProfile,
    is_even: bool,
    is_r_concave: bool,
    label: String,
}

impl HomogeneousDensity {
    /// Lebesgue measure: constant profile 1, `q = 0`.
    pub fn lebesgue(dim: usize) -> Arc<Self> {
        Self::constant_profile(dim, 1.0, 0.0).expect("lebesgue is valid")
    }

    /// Constant angular profile `c > 0` with homogeneity degree `q >= 0`,
    /// i.e. `w(x) = c |x|^q`.
    pub fn constant_profile(dim: usize, c: f64, q: f64) -> Result<Arc<Self>> {
        check_dim_q(dim, q)?;
        if !(c > 0.0) {
            return Err(Error::InvalidArgument("profile constant must be > 0".into()));
        }
        let label = if q == 0.0 && c == 1.0 {
            "lebesgue".to_string()
        } else {
            format!("const(c={c},q={q})")
        };
        Ok(Arc::new(HomogeneousDensity {
            dim,
            q,
            profile: AngularProfile::Constant(c),
            is_even: true,
            // w^r = c^r |x| is convex for q > 0; concave only in the
            // Lebesgue-type case q = 0.
            is_r_concave: q == 0.0,
            label,
        }))
    }

    /// Cone density `w(x) = ((x . axis)_+)^q`, supported on a half-space.
    /// `w^r = (x . axis)_+` is linear where positive, so the density is
    /// r-concave but not even.
    pub fn cone(dim: usize, axis: Vec3, q: f64) -> Result<Arc<Self>> {
        check_dim_q(dim, q)?;
        if q <= 0.0 {
            return Err(Error::InvalidArgument("cone profile requires q > 0".into()));
        }
        let axis = crate::vecn::normalize(axis)
            .ok_or_else(|| Error::InvalidArgument("cone axis must be nonzero".into()))?;
        if dim == 2 && axis[2].abs() > 1e-14 {
            return Err(Error::InvalidArgument("2d axis must lie in the plane".into()));
        }
        let label = format!("cone(q={q})");
        Ok(Arc::new(HomogeneousDensity {
            dim,
            q,
            profile: AngularProfile::Cone { axis },
            is_even: false,
            is_r_concave: true,
            label,
        }))
    }

    /// Even positive profile tabulated on `grid`.
    pub fn table(dim: usize, q: f64, grid: Arc<SphereGrid>, values: Vec<f64>) -> Result<Arc<Self>> {
        check_dim_q(dim, q)?;
        if grid.dim() != dim {
            return Err(Error::GridMismatch("table grid dim mismatch".into()));
        }
        if values.len() != grid.len() {
            return Err(Error::GridMismatch("table length != node count".into()));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidArgument("table values must be finite and >= 0".into()));
        }
        if values.iter().all(|v| *v == 0.0) {
            return Err(Error::InvalidArgument("profile identically zero".into()));
        }
        if !grid.antipodal_closed() {
            return Err(Error::InvalidArgument("table grid must be antipodally closed".into()));
        }
        for k in 0..grid.len() {
            if (values[k] - values[grid.neg_index(k)]).abs() > 1e-12 * values[k].abs().max(1.0) {
                return Err(Error::InvalidArgument("table profile must be even".into()));
            }
        }
        let label = format!("table(q={q},res={})", grid.resolution());
        Ok(Arc::new(HomogeneousDensity {
            dim,
            q,
            profile: AngularProfile::Table { grid, values },
            is_even: true,
            is_r_concave: false,
            label,
        }))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `s = 1/(n + q)`.
    pub fn s_exponent(&self) -> f64 {
        1.0 / (self.dim as f64 + self.q)
    }

    pub fn is_even(&self) -> bool {
        self.is_even
    }

    pub fn is_r_concave(&self) -> bool {
        self.is_r_concave
    }

    /// Canonical short name, used to tag surface measures and reports.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Profile value `a(u)` for unit `u`.
    pub fn angular_eval(&self, u: Vec3) -> f64 {
        match &self.profile {
            AngularProfile::Constant(c) => *c,
            AngularProfile::Cone { axis } => {
                let t = dot(u, *axis).max(0.0);
                if t == 0.0 {
                    0.0
                } else {
                    t.powf(self.q)
                }
            }
            AngularProfile::Table { grid, values } => {
                crate::body::interpolate_field(grid, values, u)
            }
        }
    }

    /// Density value `w(x) = a(x/|x|) |x|^q`; rejects the origin.
    pub fn eval(&self, x: Vec3) -> Result<f64> {
        let r = norm(x);
        if r == 0.0 {
            return Err(Error::InvalidArgument("density undefined at the origin".into()));
        }
        let u = scale(x, 1.0 / r);
        Ok(self.angular_eval(u) * r.powf(self.q))
    }
}

fn check_dim_q(dim: usize, q: f64) -> Result<()> {
    if dim != 2 && dim != 3 {
        return Err(Error::InvalidArgument(format!("dim must be 2 or 3, got {dim}")));
    }
    if !(q >= 0.0) || !q.is_finite() {
        return Err(Error::InvalidArgument("q must be a finite value >= 0".into()));
    }
    Ok(())
}

/// `c_{n,p} = Gamma((n+p)/2) / (pi^((n-1)/2) Gamma((1+p)/2))`.
pub fn c_np(n: usize, p: f64) -> f64 {
    assert!(n >= 2, "n must be >= 2");
    assert!(p >= 1.0, "p must be >= 1");
    let nf = n as f64;
    libm::tgamma((nf + p) / 2.0)
        / (std::f64::consts::PI.powf((nf - 1.0) / 2.0) * libm::tgamma((1.0 + p) / 2.0))
}

/// `c_{n,p}(tau) = c_{n,p} / ((1+tau)^p + (1-tau)^p)`.
pub fn c_np_tau(n: usize, p: f64, tau: f64) -> f64 {
    assert!((-1.0..=1.0).contains(&tau), "tau must lie in [-1, 1]");
    c_np(n, p) / tau_denominator(p, tau)
}

/// `alpha_{n,p}(tau) = c_{n,p} ((1+tau)^p + (1-tau)^p)`.
pub fn alpha_np_tau(n: usize, p: f64, tau: f64) -> f64 {
    assert!((-1.0..=1.0).contains(&tau), "tau must lie in [-1, 1]");
    c_np(n, p) * tau_denominator(p, tau)
}

fn tau_denominator(p: f64, tau: f64) -> f64 {
    (1.0 + tau).powf(p) + (1.0 - tau).powf(p)
}

/// The weight pair splitting a tau-body into its plus/minus parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TauWeights {
    pub tau: f64,
    pub p: f64,
    pub g1: f64,
    pub g2: f64,
}

/// `g1 = (1+tau)^p / ((1+tau)^p + (1-tau)^p)` and the mirrored `g2`; both
/// are computed from the same symmetric expression so `g1(-tau) == g2(tau)`
/// bit-exactly.
pub fn g_pair(p: f64, tau: f64) -> TauWeights {
    assert!(p >= 1.0, "p must be >= 1");
    assert!((-1.0..=1.0).contains(&tau), "tau must lie in [-1, 1]");
    let a = (1.0 + tau).powf(p);
    let b = (1.0 - tau).powf(p);
    TauWeights {
        tau,
        p,
        g1: a / (a + b),
        g2: b / (a + b),
    }
}

/// `psi_tau(t) = |t| + tau t`.
#[inline]
pub fn psi_tau(t: f64, tau: f64) -> f64 {
    debug_assert!((-1.0..=1.0).contains(&tau));
    t.abs() + tau * t
}

/// `psi_tau(t)^p` with fast paths for the common exponents.
#[inline]
pub fn psi_tau_pow(t: f64, tau: f64, p: f64) -> f64 {
    let v = psi_tau(t, tau);
    pow_fast(v, p)
}

/// `v^p` for `v >= 0` with fast paths for p in {1, 1.5, 2, 3}.
#[inline]
pub fn pow_fast(v: f64, p: f64) -> f64 {
    if p == 1.0 {
        v
    } else if p == 2.0 {
        v * v
    } else if p == 3.0 {
        v * v * v
    } else if p == 1.5 {
        v * v.sqrt()
    } else {
        v.powf(p)
    }
}

/// JSON schema for densities.
///
/// ```json
/// {"dim": 2, "q": 1.0, "angular": {"kind": "constant", "c": 1.0}}
/// {"dim": 2, "q": 1.0, "angular": {"kind": "cone", "axis": [0, 1]}}
/// {"dim": 2, "q": 0.5, "angular": {"kind": "table", "grid_resolution": 64, "values": [...]}}
/// ```
#[derive(Debug, Serialize, Deserialize)]
pub struct DensityJson {
    pub dim: usize,
    pub q: f64,
    pub angular: AngularJson,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AngularJson {
    Constant { c: f64 },
    Cone { axis: Vec<f64> },
    Table { grid_resolution: usize, values: Vec<f64> },
}

impl DensityJson {
    pub fn build(&self) -> Result<Arc<HomogeneousDensity>> {
        match &self.angular {
            AngularJson::Constant { c } => HomogeneousDensity::constant_profile(self.dim, *c, self.q),
            AngularJson::Cone { axis } => {
                let v = vec_from_json(axis, self.dim)?;
                HomogeneousDensity::cone(self.dim, v, self.q)
            }
            AngularJson::Table { grid_resolution, values } => {
                let grid = SphereGrid::build(self.dim, *grid_resolution)?;
                HomogeneousDensity::table(self.dim, self.q, grid, values.clone())
            }
        }
    }
}

/// Parses `[x, y]` or `[x, y, z]` into a `Vec3`, validating the dimension.
pub fn vec_from_json(v: &[f64], dim: usize) -> Result<Vec3> {
    if v.len() != dim {
        return Err(Error::Schema(format!(
            "vector has {} components, expected {dim}",
            v.len()
        )));
    }
    let mut out = [0.0; 3];
    out[..v.len()].copy_from_slice(v);
    Ok(out)
}

/// Serializes a `Vec3` back to its `dim` components.
pub fn vec_to_json(v: Vec3, dim: usize) -> Vec<f64> {
    v[..dim].to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn density_eval_examples() {
        let leb = HomogeneousDensity::lebesgue(2);
        assert_eq!(leb.eval([5.0, -3.0, 0.0]).unwrap(), 1.0);
        assert!(leb.eval([0.0, 0.0, 0.0]).is_err());

        let norm1 = HomogeneousDensity::constant_profile(2, 1.0, 1.0).unwrap();
        assert_relative_eq!(norm1.eval([3.0, 4.0, 0.0]).unwrap(), 5.0, max_relative = 1e-14);

        let cone = HomogeneousDensity::cone(2, [0.0, 1.0, 0.0], 1.0).unwrap();
        assert_eq!(cone.eval([1.0, -1.0, 0.0]).unwrap(), 0.0);
        assert_relative_eq!(cone.eval([0.0, 2.0, 0.0]).unwrap(), 2.0, max_relative = 1e-14);
    }

    #[test]
    fn s_exponent_examples() {
        assert_eq!(HomogeneousDensity::lebesgue(2).s_exponent(), 0.5);
        let d = HomogeneousDensity::constant_profile(2, 1.0, 1.0).unwrap();
        assert_relative_eq!(d.s_exponent(), 1.0 / 3.0, max_relative = 1e-15);
        let d = HomogeneousDensity::constant_profile(3, 1.0, 2.0).unwrap();
        assert_relative_eq!(d.s_exponent(), 0.2, max_relative = 1e-15);
    }

    #[test]
    fn flags_per_profile_kind() {
        let leb = HomogeneousDensity::lebesgue(2);
        assert!(leb.is_even() && leb.is_r_concave());
        let hom = HomogeneousDensity::constant_profile(2, 1.0, 1.0).unwrap();
        assert!(hom.is_even() && !hom.is_r_concave());
        let cone = HomogeneousDensity::cone(2, [0.0, 1.0, 0.0], 1.0).unwrap();
        assert!(!cone.is_even() && cone.is_r_concave());
    }

    #[test]
    fn homogeneity_pointwise() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let densities = [
            HomogeneousDensity::lebesgue(2),
            HomogeneousDensity::constant_profile(2, 2.0, 1.0).unwrap(),
            HomogeneousDensity::cone(3, [0.2, 0.3, 0.9], 0.5).unwrap(),
        ];
        for d in &densities {
            for _ in 0..200 {
                let x = [
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    if d.dim() == 3 { rng.gen_range(-1.0..1.0) } else { 0.0 },
                ];
                if norm(x) < 1e-3 {
                    continue;
                }
                let base = d.eval(x).unwrap();
                for lam in [0.5, 2.0, 10.0] {
                    let scaled = d.eval(scale(x, lam)).unwrap();
                    let expect = lam.powf(d.q()) * base;
                    assert!((scaled - expect).abs() <= 1e-12 * expect.abs().max(1e-12));
                }
            }
        }
    }

    #[test]
    fn evenness_flag_honesty() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let d = HomogeneousDensity::constant_profile(3, 1.5, 2.0).unwrap();
        assert!(d.is_even());
        for _ in 0..1000 {
            let x = [
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            ];
            if norm(x) < 1e-6 {
                continue;
            }
            let a = d.eval(x).unwrap();
            let b = d.eval([-x[0], -x[1], -x[2]]).unwrap();
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300));
        }
    }

    #[test]
    fn c_np_values() {
        assert_relative_eq!(c_np(2, 1.0), 0.5, max_relative = 1e-13);
        assert_relative_eq!(c_np(3, 1.0), 1.0 / std::f64::consts::PI, max_relative = 1e-13);
        assert_relative_eq!(c_np(2, 2.0), 2.0 / std::f64::consts::PI, max_relative = 1e-13);
    }

    #[test]
    fn tau_constants() {
        assert_relative_eq!(c_np_tau(2, 1.0, 0.0), 0.25, max_relative = 1e-13);
        assert_relative_eq!(c_np_tau(2, 1.0, 1.0), 0.25, max_relative = 1e-13);
        assert_relative_eq!(
            c_np_tau(2, 2.0, 1.0),
            2.0 / std::f64::consts::PI / 4.0,
            max_relative = 1e-13
        );
        assert_relative_eq!(alpha_np_tau(2, 1.0, 0.0), 1.0, max_relative = 1e-13);
        assert_relative_eq!(alpha_np_tau(2, 1.0, 1.0), 1.0, max_relative = 1e-13);
    }

    #[test]
    fn g_pair_examples() {
        for p in [1.0, 2.0, 3.0] {
            let w = g_pair(p, 0.0);
            assert_eq!(w.g1, 0.5);
            assert_eq!(w.g2, 0.5);
            let w = g_pair(p, 1.0);
            assert_eq!(w.g1, 1.0);
            assert_eq!(w.g2, 0.0);
        }
        let w = g_pair(1.0, 0.5);
        assert_relative_eq!(w.g1, 0.75, max_relative = 1e-15);
        assert_relative_eq!(w.g2, 0.25, max_relative = 1e-15);
    }

    #[test]
    fn psi_tau_examples() {
        assert_eq!(psi_tau(-2.0, 0.0), 2.0);
        assert_eq!(psi_tau(-3.0, 1.0), 0.0);
        assert_eq!(psi_tau(2.0, 0.5), 3.0);
    }

    proptest! {
        // psi_tau(t)^p = (1+tau)^p t_+^p + (1-tau)^p t_-^p
        #[test]
        fn psi_split_identity(t in -10.0f64..10.0, tau in -1.0f64..1.0, p in 1.0f64..4.0) {
            let lhs = psi_tau_pow(t, tau, p);
            let rhs = (1.0 + tau).powf(p) * t.max(0.0).powf(p)
                + (1.0 - tau).powf(p) * (-t).max(0.0).powf(p);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1e-12));
        }

        #[test]
        fn g_pair_identities(tau in -1.0f64..1.0, p in 1.0f64..4.0) {
            let w = g_pair(p, tau);
            let m = g_pair(p, -tau);
            // mirrored pair is bit-exact by construction
            prop_assert_eq!(w.g1, m.g2);
            prop_assert_eq!(w.g2, m.g1);
            prop_assert!((w.g1 + w.g2 - 1.0).abs() <= 1e-15);
            prop_assert!(w.g1 >= 0.0 && w.g1 <= 1.0);
        }

        #[test]
        fn alpha_c_product(tau in -1.0f64..1.0, p in 1.0f64..4.0) {
            for n in [2usize, 3] {
                let lhs = alpha_np_tau(n, p, tau) * c_np_tau(n, p, tau);
                let rhs = c_np(n, p) * c_np(n, p);
                prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs);
            }
        }
    }

    #[test]
    fn table_profile_roundtrip() {
        let grid = SphereGrid::build(2, 32).unwrap();
        let values: Vec<f64> = grid
            .nodes()
            .iter()
            .map(|v| 1.0 + 0.5 * (v[0] * v[0] - v[1] * v[1]))
            .collect();
        let d = HomogeneousDensity::table(2, 0.5, grid.clone(), values.clone()).unwrap();
        assert!(d.is_even());
        for (k, &v) in grid.nodes().iter().enumerate() {
            assert_relative_eq!(d.angular_eval(v), values[k], max_relative = 1e-12);
        }
        // odd table rejected
        let odd: Vec<f64> = grid.nodes().iter().map(|v| 1.0 + 0.5 * v[0]).collect();
        assert!(HomogeneousDensity::table(2, 0.5, grid, odd).is_err());
    }

    #[test]
    fn density_json_schema() {
        let j: DensityJson =
            serde_json::from_str(r#"{"dim":2,"q":1.0,"angular":{"kind":"constant","c":1.0}}"#)
                .unwrap();
        let d = j.build().unwrap();
        assert_eq!(d.q(), 1.0);
        let j: DensityJson =
            serde_json::from_str(r#"{"dim":2,"q":1.0,"angular":{"kind":"cone","axis":[0,1]}}"#)
                .unwrap();
        let d = j.build().unwrap();
        assert!(!d.is_even());
    }
}
