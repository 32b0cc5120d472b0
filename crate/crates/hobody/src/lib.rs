//! Higher-order companion bodies of convex bodies at desk scale.
//!
//! Given a convex body `K` in `R^n` and an order `m`, this crate constructs
//! and evaluates the higher-order difference body `D^m K`, the m-covariogram,
//! the projection body `Pi^m K` and its polar, the one-sided centroid body
//! `Gamma^m L`, the radial p-th mean bodies `R_p^m K`, and higher-order
//! Steiner symmetrals, for `n <= 4` and `m <= 3`.  Exact facet arithmetic is
//! used wherever the body is polytopal; everything else is seeded,
//! partition-independent Monte Carlo with reported standard errors.
//!
//! The `harness` module and the `hobody` binary run verification suites that
//! reproduce the sharp constants of the classical and higher-order
//! Rogers-Shephard, Zhang, Petty and Busemann-Petty inequalities on a catalog
//! of bodies.

pub mod bodies;
pub mod centroid;
pub mod covariogram;
pub mod harness;
pub mod projection;
pub mod quadrature;
pub mod radialmean;
pub mod symmetrize;
pub mod vecmat;

pub use bodies::{Body, DirectionTuple, Ellipsoid, Polytope, SegmentHull};
pub use quadrature::{MCEstimate, SphereSampler, StarBodyOracle};
