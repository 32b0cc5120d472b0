//! Full-dimensional polytopes with exact facet data.

use super::hull::{self, Facet, HullData, EPS};
use super::{BodyError, Support};
use crate::quadrature::SphereSampler;
use crate::vecmat::{self, dot, Matrix};

/// A convex polytope in `R^n` (`1 <= n <= 4`) carrying its vertices and the
/// derived facets `(unit outward normal u_F, offset b_F, measure a_F)`.
#[derive(Clone, Debug)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vec<f64>>,
    facets: Vec<Facet>,
    volume: f64,
}

impl Polytope {
    /// Convex hull of `points`; errors if their affine dimension is below `dim`.
    pub fn from_vertices(dim: usize, points: &[Vec<f64>]) -> Result<Self, BodyError> {
        if !(1..=4).contains(&dim) {
            return Err(BodyError::UnsupportedDimension(dim));
        }
        if points.len() < dim + 1 {
            return Err(BodyError::TooFewPoints {
                need: dim + 1,
                got: points.len(),
                dim,
            });
        }
        for p in points {
            if p.len() != dim {
                return Err(BodyError::Dimension {
                    expected: dim,
                    got: p.len(),
                });
            }
        }
        let data = hull::convex_hull(points, dim).map_err(|found| BodyError::Degenerate {
            expected: dim,
            found,
        })?;
        Ok(Self::from_hull(dim, data))
    }

    /// Build a polytope in a higher ambient dimension than 4 is not supported;
    /// internal callers with trusted hull data use this.
    pub(crate) fn from_hull(dim: usize, data: HullData) -> Self {
        let volume = hull::hull_volume(&data, dim);
        Polytope {
            dim,
            vertices: data.vertices,
            facets: data.facets,
            volume,
        }
    }

    /// `conv{o, e_1, .., e_n}`.
    pub fn simplex(dim: usize) -> Self {
        let mut pts = vec![vec![0.0; dim]];
        for j in 0..dim {
            let mut e = vec![0.0; dim];
            e[j] = 1.0;
            pts.push(e);
        }
        Self::from_vertices(dim, &pts).expect("canonical simplex")
    }

    /// `[0, 1]^n`.
    pub fn cube(dim: usize) -> Self {
        let pts: Vec<Vec<f64>> = (0..(1u32 << dim))
            .map(|mask| (0..dim).map(|j| ((mask >> j) & 1) as f64).collect())
            .collect();
        Self::from_vertices(dim, &pts).expect("canonical cube")
    }

    /// `conv{-e_i, e_i}`.
    pub fn cross_polytope(dim: usize) -> Self {
        let mut pts = Vec::new();
        for j in 0..dim {
            for s in [-1.0, 1.0] {
                let mut e = vec![0.0; dim];
                e[j] = s;
                pts.push(e);
            }
        }
        Self::from_vertices(dim, &pts).expect("canonical cross-polytope")
    }

    /// Regular polygon with unit circumradius, a vertex at `(1, 0)`.
    pub fn regular_polygon(sides: usize) -> Self {
        assert!(sides >= 3);
        let pts: Vec<Vec<f64>> = (0..sides)
            .map(|k| {
                let a = 2.0 * std::f64::consts::PI * k as f64 / sides as f64;
                vec![a.cos(), a.sin()]
            })
            .collect();
        Self::from_vertices(2, &pts).expect("regular polygon")
    }

    /// Seeded random polytope: hull of `count` points on spheres of radius
    /// in `[0.6, 1]`, resampled until the origin is interior.
    pub fn random(dim: usize, count: usize, seed: u64) -> Result<Self, BodyError> {
        let count = count.max(dim + 1);
        for attempt in 0..64u64 {
            let sampler = SphereSampler::new(dim, seed.wrapping_add(attempt.wrapping_mul(0x9e37)))?;
            let pts: Vec<Vec<f64>> = (0..count as u64)
                .map(|i| {
                    let dir = sampler.direction(i);
                    let r = 0.6 + 0.4 * ((i * 2654435761 + 97) % 1000) as f64 / 999.0;
                    vecmat::scaled(&dir, r)
                })
                .collect();
            if let Ok(p) = Self::from_vertices(dim, &pts) {
                if p.facets.iter().all(|f| f.offset > 0.05) {
                    return Ok(p);
                }
            }
        }
        Err(BodyError::Degenerate {
            expected: dim,
            found: 0,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Exact volume `(1/n) sum_F dist(c, H_F) a_F`.
    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn surface_area(&self) -> f64 {
        self.facets.iter().map(|f| f.measure).sum()
    }

    pub fn support(&self, u: &[f64]) -> f64 {
        self.vertices
            .iter()
            .map(|v| dot(v, u))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Radial function about the origin; requires the origin interior.
    pub fn radial(&self, u: &[f64]) -> Result<f64, BodyError> {
        let mut worst = f64::INFINITY;
        for f in &self.facets {
            if f.offset <= EPS {
                return Err(BodyError::OriginNotInterior { slack: f.offset });
            }
            let d = dot(&f.normal, u);
            if d > EPS {
                worst = worst.min(f.offset / d);
            }
        }
        Ok(worst)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.facets
            .iter()
            .all(|f| dot(&f.normal, x) <= f.offset + tol)
    }

    /// Vertex centroid; interior for full-dimensional polytopes.
    pub fn interior_point(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.dim];
        let nv = self.vertices.len() as f64;
        for v in &self.vertices {
            vecmat::axpy(&mut c, 1.0 / nv, v);
        }
        c
    }

    pub fn bounding_radius(&self) -> f64 {
        self.vertices
            .iter()
            .map(|v| vecmat::norm(v))
            .fold(0.0, f64::max)
    }

    /// Axis-aligned bounding box as `(lower, upper)`.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for v in &self.vertices {
            for j in 0..self.dim {
                lo[j] = lo[j].min(v[j]);
                hi[j] = hi[j].max(v[j]);
            }
        }
        (lo, hi)
    }

    /// Translate; facet normals and measures are unchanged.
    #[must_use]
    pub fn translated(&self, v: &[f64]) -> Self {
        assert_eq!(v.len(), self.dim);
        let vertices: Vec<Vec<f64>> = self
            .vertices
            .iter()
            .map(|p| p.iter().zip(v).map(|(a, b)| a + b).collect())
            .collect();
        let facets: Vec<Facet> = self
            .facets
            .iter()
            .map(|f| Facet {
                normal: f.normal.clone(),
                offset: f.offset + dot(&f.normal, v),
                measure: f.measure,
                vertices: f.vertices.clone(),
            })
            .collect();
        Polytope {
            dim: self.dim,
            vertices,
            facets,
            volume: self.volume,
        }
    }

    /// Image under an invertible linear map; vertices map, facets re-derive.
    pub fn linear_image(&self, t: &Matrix) -> Result<Self, BodyError> {
        let det = t.det();
        if det.abs() < 1e-12 {
            return Err(BodyError::SingularMap { det: det.abs() });
        }
        let pts: Vec<Vec<f64>> = self.vertices.iter().map(|v| t.mul_vec(v)).collect();
        Self::from_vertices(self.dim, &pts)
    }

    #[must_use]
    pub fn reflected(&self) -> Self {
        let pts: Vec<Vec<f64>> = self
            .vertices
            .iter()
            .map(|v| vecmat::scaled(v, -1.0))
            .collect();
        Self::from_vertices(self.dim, &pts).expect("reflection preserves dimension")
    }

    /// First mixed volume `V(K[n-1], L) = (1/n) sum_F h_L(u_F) a_F`.
    pub fn first_mixed_volume<S: Support + ?Sized>(&self, l: &S) -> f64 {
        debug_assert_eq!(l.dim(), self.dim);
        let s: f64 = self
            .facets
            .iter()
            .map(|f| l.support(&f.normal) * f.measure)
            .sum();
        s / self.dim as f64
    }

    /// Minkowski sum via vertex sums (used as the `m = 1` difference-body oracle).
    pub fn minkowski_sum(&self, other: &Polytope) -> Result<Polytope, BodyError> {
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        Polytope::from_vertices(self.dim, &pts)
    }
}

impl Support for Polytope {
    fn dim(&self) -> usize {
        self.dim
    }

    fn support(&self, u: &[f64]) -> f64 {
        Polytope::support(self, u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::SegmentHull;

    #[test]
    fn canonical_simplex_facets_match_hand_derivation() {
        let s = Polytope::simplex(2);
        assert_eq!(s.facets().len(), 3);
        assert!((s.volume() - 0.5).abs() < 1e-12);
        // Facet (-e2, 0, 1), (-e1, 0, 1), ((1,1)/sqrt2, 1/sqrt2, sqrt2).
        let mut seen_hypotenuse = false;
        for f in s.facets() {
            if f.normal[0] > 0.0 {
                assert!((f.normal[0] - 1.0 / 2f64.sqrt()).abs() < 1e-12);
                assert!((f.offset - 1.0 / 2f64.sqrt()).abs() < 1e-12);
                assert!((f.measure - 2f64.sqrt()).abs() < 1e-12);
                seen_hypotenuse = true;
            } else {
                assert!(f.offset.abs() < 1e-12);
                assert!((f.measure - 1.0).abs() < 1e-12);
            }
        }
        assert!(seen_hypotenuse);
    }

    #[test]
    fn closedness_of_surface_area_measure() {
        for p in [
            Polytope::simplex(3),
            Polytope::cube(3),
            Polytope::cross_polytope(3),
            Polytope::random(3, 12, 7).unwrap(),
        ] {
            let mut s = vec![0.0; 3];
            for f in p.facets() {
                vecmat::axpy(&mut s, f.measure, &f.normal);
            }
            assert!(vecmat::norm(&s) < 1e-9, "sum a_F u_F = {s:?}");
        }
    }

    #[test]
    fn support_and_radial_on_centered_square() {
        let q = Polytope::from_vertices(
            2,
            &[
                vec![-1.0, -1.0],
                vec![1.0, -1.0],
                vec![1.0, 1.0],
                vec![-1.0, 1.0],
            ],
        )
        .unwrap();
        assert!((q.support(&[1.0, 0.0]) - 1.0).abs() < 1e-12);
        assert!((q.support(&[1.0, 1.0]) - 2.0).abs() < 1e-12);
        assert!((q.radial(&[1.0, 0.0]).unwrap() - 1.0).abs() < 1e-12);
        let d = 1.0 / 2f64.sqrt();
        assert!((q.radial(&[d, d]).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        let cross = Polytope::cross_polytope(2);
        assert!((cross.radial(&[d, d]).unwrap() - d).abs() < 1e-12);
    }

    #[test]
    fn radial_requires_interior_origin() {
        let s = Polytope::simplex(2); // origin is a vertex
        assert!(matches!(
            s.radial(&[1.0, 0.0]),
            Err(BodyError::OriginNotInterior { .. })
        ));
    }

    #[test]
    fn hexagon_volume_is_three() {
        // conv{+-e1, +-e2, +-(e1 - e2)} = Delta_2 + (-Delta_2).
        let pts = vec![
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![-1.0, 0.0],
            vec![0.0, -1.0],
            vec![1.0, -1.0],
            vec![-1.0, 1.0],
        ];
        let h = Polytope::from_vertices(2, &pts).unwrap();
        assert!((h.volume() - 3.0).abs() < 1e-12);
        let s = Polytope::simplex(2);
        let sum = s.minkowski_sum(&s.reflected()).unwrap();
        assert!((sum.volume() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn first_mixed_volume_hand_values() {
        let c = Polytope::cube(2);
        // V(K[1], K) = Vol(K).
        assert!((c.first_mixed_volume(&c) - 1.0).abs() < 1e-12);
        // V([0,1]^2 [1], B^2) = half perimeter of the square = 2.
        let ball = super::super::Ellipsoid::unit_ball(2);
        assert!((c.first_mixed_volume(&ball) - 2.0).abs() < 1e-12);
        // n V(Delta_2[1], [o, -e1]) = 1.
        let s = Polytope::simplex(2);
        let seg = SegmentHull::new(2, vec![vec![-1.0, 0.0]]);
        assert!((2.0 * s.first_mixed_volume(&seg) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn linear_image_scales_volume_by_det() {
        let t = Matrix::from_rows(&[vec![2.0, 1.0], vec![0.0, 1.5]]);
        let p = Polytope::simplex(2).linear_image(&t).unwrap();
        assert!((p.volume() - 3.0 * 0.5).abs() < 1e-12);
        let sing = Matrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]);
        assert!(matches!(
            Polytope::simplex(2).linear_image(&sing),
            Err(BodyError::SingularMap { .. })
        ));
    }

    #[test]
    fn translation_is_exact_on_facet_data() {
        let p = Polytope::simplex(3).translated(&[0.2, -0.4, 1.0]);
        assert!((p.volume() - 1.0 / 6.0).abs() < 1e-12);
        for f in p.facets() {
            for &vi in &f.vertices {
                let d = dot(&f.normal, &p.vertices()[vi]) - f.offset;
                assert!(d.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn random_polytopes_contain_origin_and_are_reproducible() {
        for n in 2..=4 {
            let a = Polytope::random(n, 2 * n + 6, 42).unwrap();
            let b = Polytope::random(n, 2 * n + 6, 42).unwrap();
            assert_eq!(a.vertices(), b.vertices());
            assert!(a.facets().iter().all(|f| f.offset > 0.0));
            assert!(a.volume() > 0.0);
        }
    }
}
