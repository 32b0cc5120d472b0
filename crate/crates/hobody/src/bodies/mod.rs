//! Convex bodies: polytopes with exact facet data, ellipsoids, direction
//! tuples, and the segment hulls `conv{o, theta_1, .., theta_m}`.

pub mod catalog;
pub mod ellipsoid;
pub mod hull;
pub mod polytope;
pub mod segment;

pub use catalog::{load_catalog, parse_catalog, BodySpec, CatalogError};
pub use ellipsoid::Ellipsoid;
pub use hull::{Facet, EPS};
pub use polytope::Polytope;
pub use segment::SegmentHull;

use crate::quadrature::{self, MCEstimate, QuadratureError, StarBodyOracle};
use crate::vecmat::{self, Matrix};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BodyError {
    #[error("need at least {need} points in R^{dim}, got {got}")]
    TooFewPoints { need: usize, got: usize, dim: usize },
    #[error("degenerate body: affine dimension {found} < {expected}")]
    Degenerate { expected: usize, found: usize },
    #[error("origin is not interior (facet slack {slack:.3e})")]
    OriginNotInterior { slack: f64 },
    #[error("singular linear map (|det| = {det:.3e})")]
    SingularMap { det: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("unsupported dimension {0}; this crate covers 1 <= n <= 4")]
    UnsupportedDimension(usize),
    #[error("facet-subset enumeration needs {subsets} solves, over the {budget} budget")]
    EnumerationBudget { subsets: u128, budget: u128 },
    #[error("linear program for {context} returned no optimum")]
    Program { context: &'static str },
    #[error("radial-mean exponent {p} is outside (-1, +inf]")]
    Exponent { p: f64 },
    #[error("precision failure: {context}")]
    Precision { context: &'static str },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Anything with a support function `h(u) = sup_{y in K} <u, y>`.
pub trait Support {
    fn dim(&self) -> usize;
    fn support(&self, u: &[f64]) -> f64;
}

/// A tuple of `m` vectors in `R^n`, stored flat.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionTuple {
    pub n: usize,
    pub m: usize,
    flat: Vec<f64>,
}

impl DirectionTuple {
    pub fn new(n: usize, m: usize, flat: Vec<f64>) -> Result<Self, BodyError> {
        if flat.len() != n * m {
            return Err(BodyError::Dimension {
                expected: n * m,
                got: flat.len(),
            });
        }
        Ok(DirectionTuple { n, m, flat })
    }

    pub fn from_blocks(blocks: &[Vec<f64>]) -> Result<Self, BodyError> {
        let m = blocks.len();
        let n = blocks.first().map_or(0, Vec::len);
        let mut flat = Vec::with_capacity(n * m);
        for b in blocks {
            if b.len() != n {
                return Err(BodyError::Dimension {
                    expected: n,
                    got: b.len(),
                });
            }
            flat.extend_from_slice(b);
        }
        Ok(DirectionTuple { n, m, flat })
    }

    #[inline]
    pub fn block(&self, i: usize) -> &[f64] {
        &self.flat[i * self.n..(i + 1) * self.n]
    }

    pub fn blocks(&self) -> impl Iterator<Item = &[f64]> {
        self.flat.chunks(self.n)
    }

    pub fn flat(&self) -> &[f64] {
        &self.flat
    }

    pub fn norm(&self) -> f64 {
        vecmat::norm(&self.flat)
    }

    /// Rescaled onto the unit sphere of `R^{nm}`.
    pub fn normalized(&self) -> Option<Self> {
        vecmat::normalized(&self.flat).map(|flat| DirectionTuple { flat, ..*self })
    }

    #[must_use]
    pub fn negated(&self) -> Self {
        DirectionTuple {
            flat: vecmat::scaled(&self.flat, -1.0),
            ..*self
        }
    }

    /// Apply an `n x n` map to every block (the lift `T` bar).
    #[must_use]
    pub fn block_map(&self, t: &Matrix) -> Self {
        let mut flat = Vec::with_capacity(self.flat.len());
        for b in self.blocks() {
            flat.extend(t.mul_vec(b));
        }
        DirectionTuple { flat, ..*self }
    }

    #[must_use]
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.m);
        let mut flat = Vec::with_capacity(self.flat.len());
        for &i in perm {
            flat.extend_from_slice(self.block(i));
        }
        DirectionTuple { flat, ..*self }
    }
}

/// A convex body: a polytope or an ellipsoid.
#[derive(Clone, Debug)]
pub enum Body {
    Polytope(Polytope),
    Ellipsoid(Ellipsoid),
}

impl Body {
    pub fn dim(&self) -> usize {
        match self {
            Body::Polytope(p) => p.dim(),
            Body::Ellipsoid(e) => e.dim(),
        }
    }

    /// Exact volume.
    pub fn volume(&self) -> f64 {
        match self {
            Body::Polytope(p) => p.volume(),
            Body::Ellipsoid(e) => e.volume(),
        }
    }

    /// Surface area; exact for polytopes and balls, Monte Carlo otherwise.
    pub fn surface_area(&self, count: u64, seed: u64) -> Result<MCEstimate, BodyError> {
        match self {
            Body::Polytope(p) => Ok(MCEstimate::exact(p.surface_area())),
            Body::Ellipsoid(e) => e.surface_area(count, seed),
        }
    }

    pub fn translated(&self, v: &[f64]) -> Body {
        match self {
            Body::Polytope(p) => Body::Polytope(p.translated(v)),
            Body::Ellipsoid(e) => Body::Ellipsoid(e.translated(v)),
        }
    }

    pub fn linear_image(&self, t: &Matrix) -> Result<Body, BodyError> {
        match self {
            Body::Polytope(p) => Ok(Body::Polytope(p.linear_image(t)?)),
            Body::Ellipsoid(e) => Ok(Body::Ellipsoid(e.linear_image(t)?)),
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Body::Polytope(p) => p.contains(x, hull::EPS),
            Body::Ellipsoid(e) => e.contains(x),
        }
    }

    /// An interior point (vertex centroid / center).
    pub fn interior_point(&self) -> Vec<f64> {
        match self {
            Body::Polytope(p) => p.interior_point(),
            Body::Ellipsoid(e) => e.center.clone(),
        }
    }

    /// Star-body oracle for `K - c` about its interior point `c`.
    ///
    /// Uniform sampling of `K` draws from this oracle and translates by `c`.
    pub fn centered_star_oracle(&self) -> StarBodyOracle {
        match self {
            Body::Polytope(p) => {
                let c = p.interior_point();
                let shifted = p.translated(&vecmat::scaled(&c, -1.0));
                let bound = shifted.bounding_radius();
                StarBodyOracle::new(p.dim(), bound, move |u| {
                    shifted.radial(u).unwrap_or(f64::NAN)
                })
            }
            Body::Ellipsoid(e) => {
                let centered = e.translated(&vecmat::scaled(&e.center, -1.0));
                let bound = centered.bounding_radius();
                StarBodyOracle::new(centered.dim(), bound, move |u| centered.radial_origin(u))
            }
        }
    }
}

impl Support for Body {
    fn dim(&self) -> usize {
        Body::dim(self)
    }

    fn support(&self, u: &[f64]) -> f64 {
        match self {
            Body::Polytope(p) => p.support(u),
            Body::Ellipsoid(e) => e.support(u),
        }
    }
}

/// Mean width `(1 / (n kappa_n)) int_{S^{n-1}} h dtheta`; 1 for unit balls.
pub fn mean_width<S: Support + Sync>(
    body: &S,
    count: u64,
    seed: u64,
) -> Result<MCEstimate, QuadratureError> {
    let n = body.dim();
    let est = quadrature::mc_sphere_integral(|u| body.support(u), n, count, seed)?;
    Ok(est.scaled(1.0 / (n as f64 * quadrature::kappa(n))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direction_tuple_blocks_roundtrip() {
        let t = DirectionTuple::new(2, 2, vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(t.block(0), &[1.0, 0.0]);
        assert_eq!(t.block(1), &[0.0, 1.0]);
        assert!((t.norm() - 2f64.sqrt()).abs() < 1e-15);
        let u = t.normalized().unwrap();
        assert!((u.norm() - 1.0).abs() < 1e-15);
        let p = t.permuted(&[1, 0]);
        assert_eq!(p.block(0), &[0.0, 1.0]);
        assert!(DirectionTuple::new(2, 2, vec![0.0; 3]).is_err());
    }

    #[test]
    fn mean_width_of_unit_disk_is_one() {
        let ball = Body::Ellipsoid(Ellipsoid::unit_ball(2));
        let w = mean_width(&ball, 20_000, 0).unwrap();
        assert_eq!(w.value, 1.0); // Constant integrand: exact.
    }

    #[test]
    fn mean_width_of_a_segment_in_the_plane() {
        // w_2([o, u]) = 1/pi for unit u.
        let seg = SegmentHull::new(2, vec![vec![1.0, 0.0]]);
        let w = mean_width(&seg, 200_000, 1).unwrap();
        let want = 1.0 / std::f64::consts::PI;
        assert!((w.value - want).abs() < 3.0 * w.std_error + 1e-4);
    }
}
