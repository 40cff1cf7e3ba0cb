//! Numerical engine and verification harness for L_p projection and
//! centroid bodies of convex/star bodies under positively homogeneous
//! measures.
//!
//! The crate provides, at desk scale (dimensions 2 and 3):
//!
//! * spherical quadrature grids with refinement-based error estimates
//!   ([`grid`]);
//! * homogeneous densities `w(x) = a(x/|x|) |x|^q` and the scalar constants
//!   attached to them ([`density`]);
//! * convex and star body representations with support/radial evaluation,
//!   polarity and L_p combinations ([`body`], [`hull`]);
//! * weighted surface area measures, their L_p reweightings and Blaschke
//!   addition ([`surfmeas`]);
//! * the measure functionals mu(K), mu_p(K, L), V_{mu,p}(K, L) and the dual
//!   mixed form, with Monte Carlo oracles ([`functional`]);
//! * the tau-family of projection and centroid body transforms and their
//!   polars ([`transform`]);
//! * a seeded, hypothesis-gated verification suite over randomized corpora
//!   ([`verify`]) and the thin command-line front end ([`cli`]).
//!
//! See the crate examples for one runnable walkthrough per capability.

pub mod body;
pub mod cli;
pub mod density;
pub mod error;
pub mod functional;
pub mod grid;
pub mod hull;
pub mod surfmeas;
pub mod transform;
pub mod vecn;
pub mod verify;

pub use body::{Body, Ellipsoid, Polytope, RadialField, SupportField};
pub use density::HomogeneousDensity;
pub use error::{Error, Result};
pub use functional::MeasureContext;
pub use grid::SphereGrid;
