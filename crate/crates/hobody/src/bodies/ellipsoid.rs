//! Ellipsoids `E = T B^n + c` with an invertible factor `T`.

use super::{BodyError, Support};
use crate::quadrature::{self, MCEstimate};
use crate::vecmat::{self, dot, Matrix};

#[derive(Clone, Debug)]
pub struct Ellipsoid {
    dim: usize,
    pub center: Vec<f64>,
    pub factor: Matrix,
    inv_factor: Matrix,
    det: f64,
}

impl Ellipsoid {
    pub fn new(center: Vec<f64>, factor: Matrix) -> Result<Self, BodyError> {
        let dim = center.len();
        if factor.rows() != dim || factor.cols() != dim {
            return Err(BodyError::Dimension {
                expected: dim,
                got: factor.rows(),
            });
        }
        let det = factor.det();
        if det.abs() < 1e-12 {
            return Err(BodyError::SingularMap { det: det.abs() });
        }
        let inv_factor = factor.inverse().map_err(|_| BodyError::SingularMap {
            det: det.abs(),
        })?;
        Ok(Ellipsoid {
            dim,
            center,
            factor,
            inv_factor,
            det,
        })
    }

    pub fn unit_ball(dim: usize) -> Self {
        Self::ball(dim, 1.0)
    }

    pub fn ball(dim: usize, radius: f64) -> Self {
        let mut t = Matrix::identity(dim);
        for i in 0..dim {
            t.set(i, i, radius);
        }
        Self::new(vec![0.0; dim], t).expect("ball factor is invertible")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn volume(&self) -> f64 {
        self.det.abs() * quadrature::kappa(self.dim)
    }

    pub fn support(&self, u: &[f64]) -> f64 {
        dot(&self.center, u) + vecmat::norm(&self.factor.tr_mul_vec(u))
    }

    /// Radius `r` if this is a centered ball `r B^n`.
    pub fn ball_radius(&self) -> Option<f64> {
        if vecmat::norm(&self.center) > 1e-12 {
            return None;
        }
        let r = self.factor.get(0, 0).abs();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let want = if i == j { r } else { 0.0 };
                if (self.factor.get(i, j) - want).abs() > 1e-12 * r.max(1.0) {
                    return None;
                }
            }
        }
        Some(r)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        let z = self.inv_factor.mul_vec(&vecmat::sub(x, &self.center));
        vecmat::norm(&z) <= 1.0 + 1e-12
    }

    /// Radial function about the origin; requires the origin interior.
    pub fn radial_origin(&self, u: &[f64]) -> f64 {
        let w = self.inv_factor.mul_vec(u);
        let z = self.inv_factor.mul_vec(&self.center);
        let ww = dot(&w, &w);
        let wz = dot(&w, &z);
        let disc = wz * wz - ww * (dot(&z, &z) - 1.0);
        if disc < 0.0 || ww <= 0.0 {
            return f64::NAN;
        }
        (wz + disc.sqrt()) / ww
    }

    pub fn bounding_radius(&self) -> f64 {
        // |T u| <= operator norm <= Frobenius norm; add the center shift.
        let mut frob = 0.0;
        for i in 0..self.dim {
            frob += dot(self.factor.row(i), self.factor.row(i));
        }
        vecmat::norm(&self.center) + frob.sqrt()
    }

    #[must_use]
    pub fn translated(&self, v: &[f64]) -> Self {
        let center = self.center.iter().zip(v).map(|(a, b)| a + b).collect();
        Ellipsoid {
            center,
            ..self.clone()
        }
    }

    pub fn linear_image(&self, s: &Matrix) -> Result<Self, BodyError> {
        Self::new(s.mul_vec(&self.center), s.mat_mul(&self.factor))
    }

    /// Surface area: exact for balls, else `|det T| int_{S^{n-1}} |T^{-t} u| du`
    /// by Monte Carlo.
    pub fn surface_area(&self, count: u64, seed: u64) -> Result<MCEstimate, BodyError> {
        if let Some(r) = self.ball_radius() {
            let n = self.dim;
            return Ok(MCEstimate::exact(
                n as f64 * quadrature::kappa(n) * r.powi(n as i32 - 1),
            ));
        }
        let inv_t = self.inv_factor.transpose();
        let det = self.det.abs();
        let est = quadrature::mc_sphere_integral(
            |u| vecmat::norm(&inv_t.mul_vec(u)),
            self.dim,
            count,
            seed,
        )?;
        Ok(est.scaled(det))
    }
}

impl Support for Ellipsoid {
    fn dim(&self) -> usize {
        self.dim
    }

    fn support(&self, u: &[f64]) -> f64 {
        Ellipsoid::support(self, u)
    }
}
