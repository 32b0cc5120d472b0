//! Higher-order projection bodies and their polars.
//!
//! For an `n`-dimensional body `K` and an `m`-tuple of directions, `Pi^m K`
//! is the convex body in `R^{nm}` with support function
//! `h(th) = int_{bd K} max_i <th_i, n_K(y)>_- dy`, the first-order loss of
//! covariogram volume along the ray `r -> r*th`.  For a polytope this is the
//! finite facet sum `sum_F a_F max_i <th_i, u_F>_-`; for `E = T B + c` it
//! reduces through `Pi^m(TK) = |det T| lift(T^{-t}) Pi^m K` to
//! `|det T| kappa_{n-1} V_1(conv{o, T^{-1}th_1, .., T^{-1}th_m})`.
//! Both paths are exact, so polar radial functions `1/h` cost one evaluation.

use crate::bodies::{Body, BodyError, DirectionTuple, SegmentHull, Support};
use crate::quadrature::{self, kappa, MCEstimate, StarBodyOracle};
use crate::vecmat::{dot, Matrix};

/// Exact support-function evaluator for `Pi^m K`, reusable across samples.
#[derive(Clone, Debug)]
pub struct ProjectionBody {
    n: usize,
    m: usize,
    kind: Kind,
    min_support: f64,
}

#[derive(Clone, Debug)]
enum Kind {
    /// Unit facet normals with their surface measures.
    Facets(Vec<(Vec<f64>, f64)>),
    /// `|det T|` and `T^{-1}` of the source ellipsoid.
    Map { scale: f64, inv: Matrix },
}

impl ProjectionBody {
    pub fn new(body: &Body, m: usize) -> Result<Self, BodyError> {
        let n = body.dim();
        if m == 0 {
            return Err(BodyError::UnsupportedDimension(0));
        }
        let (kind, inradius) = match body {
            Body::Polytope(p) => {
                let kind = Kind::Facets(
                    p.facets()
                        .iter()
                        .map(|f| (f.normal.clone(), f.measure))
                        .collect(),
                );
                // Distance from the vertex centroid to the nearest facet
                // certifies an inscribed ball.
                let c = p.interior_point();
                let r = p
                    .facets()
                    .iter()
                    .map(|f| f.offset - dot(&f.normal, &c))
                    .fold(f64::INFINITY, f64::min);
                (kind, r)
            }
            Body::Ellipsoid(e) => {
                let inv = e
                    .factor
                    .inverse()
                    .expect("ellipsoid factors are invertible by construction");
                let scale = e.factor.det().abs();
                // E contains a ball of radius 1/|T^{-1}|_2 >= 1/|T^{-1}|_F.
                let r = 1.0 / inv.frobenius_norm();
                (Kind::Map { scale, inv }, r)
            }
        };
        if !(inradius > 0.0) {
            return Err(BodyError::Degenerate {
                expected: n,
                found: 0,
            });
        }
        // Monotonicity of mixed volumes gives, for every unit tuple,
        // h >= r^{n-1} h_{Pi^m B}(th) >= r^{n-1} kappa_{n-1} max_i |th_i|
        //   >= r^{n-1} kappa_{n-1} / sqrt(m).
        let min_support = inradius.powi(n as i32 - 1) * kappa(n - 1) / (m as f64).sqrt();
        Ok(ProjectionBody {
            n,
            m,
            kind,
            min_support,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// A positive lower bound for the support function on unit tuples.
    pub fn min_support(&self) -> f64 {
        self.min_support
    }

    /// `h_{Pi^m K}` on a flat `n*m` vector (any length, 1-homogeneous).
    pub fn support_flat(&self, flat: &[f64]) -> f64 {
        debug_assert_eq!(flat.len(), self.n * self.m);
        match &self.kind {
            Kind::Facets(facets) => {
                let mut h = 0.0;
                for (normal, measure) in facets {
                    let mut worst = 0.0f64;
                    for block in flat.chunks_exact(self.n) {
                        worst = worst.max(-dot(block, normal));
                    }
                    h += measure * worst;
                }
                h
            }
            Kind::Map { scale, inv } => {
                let points: Vec<Vec<f64>> = flat
                    .chunks_exact(self.n)
                    .map(|block| inv.mul_vec(block))
                    .collect();
                let hull = SegmentHull::new(self.n, points);
                scale * kappa(self.n - 1) * hull.intrinsic_v1()
            }
        }
    }

    /// Star-body oracle for the polar body `(Pi^m K)^o` with radial `1/h`.
    pub fn polar_oracle(&self) -> StarBodyOracle {
        let dim = self.n * self.m;
        let bound = 1.0 / self.min_support;
        let body = self.clone();
        StarBodyOracle::new(dim, bound, move |u| {
            let h = body.support_flat(u);
            if h > 0.0 {
                1.0 / h
            } else {
                f64::NAN
            }
        })
    }
}

impl Support for ProjectionBody {
    fn dim(&self) -> usize {
        self.n * self.m
    }

    fn support(&self, u: &[f64]) -> f64 {
        self.support_flat(u)
    }
}

/// `h_{Pi^m K}` at one tuple.
pub fn proj_support(body: &Body, xs: &DirectionTuple) -> Result<f64, BodyError> {
    if xs.n != body.dim() {
        return Err(BodyError::Dimension {
            expected: body.dim(),
            got: xs.n,
        });
    }
    Ok(ProjectionBody::new(body, xs.m)?.support_flat(xs.flat()))
}

/// Monte Carlo volume of the polar projection body `(Pi^m K)^o` in `R^{nm}`.
pub fn polar_proj_volume(
    body: &Body,
    m: usize,
    samples: u64,
    seed: u64,
) -> Result<MCEstimate, BodyError> {
    let oracle = ProjectionBody::new(body, m)?.polar_oracle();
    Ok(quadrature::star_body_volume(&oracle, samples, seed)?)
}

/// The affine-invariant product `Vol_n(K)^{nm-m} Vol_{nm}((Pi^m K)^o)`.
pub fn petty_product(
    body: &Body,
    m: usize,
    samples: u64,
    seed: u64,
) -> Result<MCEstimate, BodyError> {
    let n = body.dim();
    let vol = polar_proj_volume(body, m, samples, seed)?;
    Ok(vol.scaled(body.volume().powi((n * m - m) as i32)))
}

/// Sharp lower bound `binom(nm+n, n) / n^{nm}` for the Petty product,
/// attained exactly by simplices.
pub fn simplex_product_bound(n: usize, m: usize) -> f64 {
    let mut b = 1.0f64;
    for k in 1..=n {
        b *= (n * m + k) as f64 / k as f64;
    }
    b / (n as f64).powi((n * m) as i32)
}

/// The Petty product of the Euclidean ball, the sharp upper bound attained
/// by ellipsoids.  Exact for `m = 1`, Monte Carlo otherwise.
pub fn ball_product(n: usize, m: usize, samples: u64, seed: u64) -> Result<MCEstimate, BodyError> {
    if m == 1 {
        // Pi B^n = kappa_{n-1} B^n, so the product is (kappa_n / kappa_{n-1})^n.
        return Ok(MCEstimate::exact(
            (kappa(n) / kappa(n - 1)).powi(n as i32),
        ));
    }
    let ball = Body::Ellipsoid(crate::bodies::Ellipsoid::unit_ball(n));
    petty_product(&ball, m, samples, seed)
}

/// Mean width of `Pi^m B^n` in `R^{nm}`, a constant of the isoperimetric
/// bound chain.
pub fn ball_proj_mean_width(
    n: usize,
    m: usize,
    samples: u64,
    seed: u64,
) -> Result<MCEstimate, BodyError> {
    let ball = Body::Ellipsoid(crate::bodies::Ellipsoid::unit_ball(n));
    let proj = ProjectionBody::new(&ball, m)?;
    Ok(crate::bodies::mean_width(&proj, samples, seed)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{Ellipsoid, Polytope};
    use crate::covariogram::{neg_derivative_at_zero, CovariogramRay};
    use crate::quadrature::SphereSampler;
    use crate::vecmat;

    fn tuple(blocks: &[&[f64]]) -> DirectionTuple {
        DirectionTuple::from_blocks(&blocks.iter().map(|b| b.to_vec()).collect::<Vec<_>>())
            .unwrap()
    }

    fn unit_tuple(n: usize, m: usize, sampler: &SphereSampler, i: u64) -> DirectionTuple {
        DirectionTuple::new(n, m, sampler.direction(i)).unwrap()
    }

    #[test]
    fn square_projection_support_hand_values() {
        let k = Body::Polytope(Polytope::cube(2));
        // m = 1: Pi K = [-1, 1]^2, so h(u) = |u_1| + |u_2|.
        let h = proj_support(&k, &tuple(&[&[0.6, -0.8]])).unwrap();
        assert!((h - 1.4).abs() < 1e-12);
        // m = 2 anchor: h((e1, e2)) = 2.
        let h2 = proj_support(&k, &tuple(&[&[1.0, 0.0], &[0.0, 1.0]])).unwrap();
        assert!((h2 - 2.0).abs() < 1e-12);
        // Repeating a block changes nothing: max over equal entries.
        let h3 = proj_support(&k, &tuple(&[&[1.0, 0.0], &[1.0, 0.0]])).unwrap();
        assert!((h3 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn first_order_support_is_brightness() {
        let p = Polytope::random(3, 12, 5).unwrap();
        let body = Body::Polytope(p.clone());
        let sampler = SphereSampler::new(3, 77).unwrap();
        for i in 0..40 {
            let u = sampler.direction(i);
            let brightness: f64 = 0.5
                * p.facets()
                    .iter()
                    .map(|f| f.measure * dot(&f.normal, &u).abs())
                    .sum::<f64>();
            let h = proj_support(&body, &DirectionTuple::new(3, 1, u).unwrap()).unwrap();
            assert!((h - brightness).abs() < 1e-10 * brightness.max(1.0));
        }
    }

    #[test]
    fn block_embedding_recovers_first_order() {
        // A tuple with one nonzero block supports like the classical body.
        let p = Body::Polytope(Polytope::random(2, 7, 9).unwrap());
        let u = vec![0.8, -0.6];
        let h1 = proj_support(&p, &DirectionTuple::new(2, 1, u.clone()).unwrap()).unwrap();
        for slot in 0..3 {
            let mut blocks = vec![vec![0.0, 0.0]; 3];
            blocks[slot] = u.clone();
            let h = proj_support(&p, &DirectionTuple::from_blocks(&blocks).unwrap()).unwrap();
            assert!((h - h1).abs() < 1e-12);
        }
    }

    #[test]
    fn disk_projection_is_triangle_perimeter() {
        // h_{Pi^2 B^2}((th1, th2)) = |th1| + |th2| + |th1 - th2|.
        let disk = Body::Ellipsoid(Ellipsoid::unit_ball(2));
        let cases: [(&[f64], &[f64]); 3] = [
            (&[1.0, 0.0], &[0.0, 1.0]),
            (&[0.3, -0.4], &[-0.2, 0.9]),
            (&[0.5, 0.5], &[-0.5, -0.5]),
        ];
        for (a, b) in cases {
            let h = proj_support(&disk, &tuple(&[a, b])).unwrap();
            let d = vecmat::sub(a, b);
            let want = vecmat::norm(a) + vecmat::norm(b) + vecmat::norm(&d);
            assert!((h - want).abs() < 1e-12, "h {h} want {want}");
        }
    }

    #[test]
    fn polygon_approximates_disk_projection() {
        let poly = Body::Polytope(Polytope::regular_polygon(256));
        let disk = Body::Ellipsoid(Ellipsoid::unit_ball(2));
        let sampler = SphereSampler::new(4, 3).unwrap();
        for i in 0..25 {
            let t = unit_tuple(2, 2, &sampler, i);
            let hp = proj_support(&poly, &t).unwrap();
            let hd = proj_support(&disk, &t).unwrap();
            assert!((hp - hd).abs() < 1e-3 * hd, "i {i}: {hp} vs {hd}");
        }
    }

    #[test]
    fn sphere_integral_validates_v1_reduction() {
        // int_{S^{n-1}} max_i <y_i, u>_- du = kappa_{n-1} V_1(conv{o, y_i}).
        for (n, seed) in [(3usize, 4u64), (4, 5)] {
            let pts: Vec<Vec<f64>> = (0..3)
                .map(|i| {
                    SphereSampler::new(n, seed + i)
                        .unwrap()
                        .direction(i as u64)
                        .iter()
                        .map(|c| c * (1.0 + 0.3 * i as f64))
                        .collect()
                })
                .collect();
            let hull = SegmentHull::new(n, pts.clone());
            let exact = kappa(n - 1) * hull.intrinsic_v1();
            let est = quadrature::mc_sphere_integral(
                |u| {
                    pts.iter()
                        .map(|y| (-dot(y, u)).max(0.0))
                        .fold(0.0f64, f64::max)
                },
                n,
                300_000,
                seed,
            )
            .unwrap();
            assert!(
                (est.value - exact).abs() < 4.0 * est.std_error,
                "n {n}: exact {exact} mc {} sigma {}",
                est.value,
                est.std_error
            );
        }
    }

    #[test]
    fn covariance_translation_and_reflection() {
        let p = Polytope::random(3, 10, 21).unwrap();
        let t = Matrix::from_rows(&[
            vec![1.3, 0.4, 0.0],
            vec![0.0, 0.9, -0.2],
            vec![0.1, 0.0, 1.1],
        ]);
        let tp = Body::Polytope(p.linear_image(&t).unwrap());
        let kp = Body::Polytope(p.clone());
        let inv = t.inverse().unwrap();
        let det = t.det().abs();
        let sampler = SphereSampler::new(6, 8).unwrap();
        for i in 0..30 {
            let th = unit_tuple(3, 2, &sampler, i);
            let lhs = proj_support(&tp, &th).unwrap();
            let rhs = det * proj_support(&kp, &th.block_map(&inv)).unwrap();
            assert!((lhs - rhs).abs() < 1e-9 * rhs.max(1.0), "covariance at {i}");
            // Translation invariance is exact.
            let shifted = Body::Polytope(p.translated(&[0.7, -1.1, 0.4]));
            let hs = proj_support(&shifted, &th).unwrap();
            let h0 = proj_support(&kp, &th).unwrap();
            assert!((hs - h0).abs() < 1e-9 * h0.max(1.0));
            // Reflection maps to the negated tuple.
            let refl = Body::Polytope(p.reflected());
            let hr = proj_support(&refl, &th).unwrap();
            let hn = proj_support(&kp, &th.negated()).unwrap();
            assert!((hr - hn).abs() < 1e-9 * hn.max(1.0));
        }
    }

    #[test]
    fn permutation_invariance() {
        let bodies = [
            Body::Polytope(Polytope::random(2, 8, 3).unwrap()),
            Body::Ellipsoid(
                Ellipsoid::new(
                    vec![0.0, 0.0],
                    Matrix::from_rows(&[vec![1.5, 0.3], vec![0.0, 0.8]]),
                )
                .unwrap(),
            ),
        ];
        let sampler = SphereSampler::new(6, 12).unwrap();
        for body in &bodies {
            for i in 0..20 {
                let th = unit_tuple(2, 3, &sampler, i);
                let h = proj_support(body, &th).unwrap();
                for perm in [[1usize, 0, 2], [2, 1, 0], [1, 2, 0]] {
                    let hp = proj_support(body, &th.permuted(&perm)).unwrap();
                    assert!((h - hp).abs() < 1e-12 * h.max(1.0));
                }
            }
        }
    }

    #[test]
    fn support_matches_covariogram_derivative() {
        // The derivative of g along r -> r*th at 0+ equals -h_{Pi^m K}(th).
        let cases = [
            (Polytope::cube(2), 2usize, 6u64),
            (Polytope::simplex(3), 2, 7),
            (Polytope::random(2, 6, 31).unwrap(), 3, 8),
        ];
        for (p, m, seed) in cases {
            let n = p.dim();
            let sampler = SphereSampler::new(n * m, seed).unwrap();
            let body = Body::Polytope(p.clone());
            for i in 0..4 {
                let th = unit_tuple(n, m, &sampler, i);
                let ray = CovariogramRay::new(&p, &th).unwrap();
                let slope = neg_derivative_at_zero(&ray, 1e-3);
                let h = proj_support(&body, &th).unwrap();
                assert!(
                    (slope - h).abs() < 2e-5 * h.max(1.0),
                    "{n},{m} sample {i}: slope {slope} h {h}"
                );
            }
        }
    }

    #[test]
    fn polar_volume_anchors_in_the_plane() {
        // Pi [0,1]^2 = [-1,1]^2, so the polar is the cross-polytope, volume 2.
        let square = Body::Polytope(Polytope::cube(2));
        let v = polar_proj_volume(&square, 1, 200_000, 17).unwrap();
        assert!((v.value - 2.0).abs() < 3.0 * v.std_error);
        assert!(v.relative_std_error() < 0.01);

        // Petty products: triangle 3/2 (the simplex bound), disk pi^2/4.
        let tri = Body::Polytope(Polytope::simplex(2));
        let pt = petty_product(&tri, 1, 200_000, 18).unwrap();
        assert!((pt.value - 1.5).abs() < 3.0 * pt.std_error);
        assert!((simplex_product_bound(2, 1) - 1.5).abs() < 1e-15);

        // The disk's polar radial is constant, so the estimate is exact up
        // to rounding and the band degenerates.
        let disk = Body::Ellipsoid(Ellipsoid::unit_ball(2));
        let pd = petty_product(&disk, 1, 200_000, 19).unwrap();
        let want = std::f64::consts::PI.powi(2) / 4.0;
        assert!((pd.value - want).abs() < 3.0 * pd.std_error + 1e-12);
        let exact = ball_product(2, 1, 0, 0).unwrap();
        assert_eq!(exact.std_error, 0.0);
        assert!((exact.value - want).abs() < 1e-12);
    }

    #[test]
    fn min_support_bound_is_safe() {
        let bodies = [
            Body::Polytope(Polytope::random(3, 9, 41).unwrap()),
            Body::Ellipsoid(
                Ellipsoid::new(
                    vec![0.2, -0.1, 0.3],
                    Matrix::from_rows(&[
                        vec![1.0, 0.5, 0.0],
                        vec![0.0, 0.7, 0.1],
                        vec![0.0, 0.0, 1.4],
                    ]),
                )
                .unwrap(),
            ),
        ];
        for body in &bodies {
            let proj = ProjectionBody::new(body, 2).unwrap();
            let oracle = proj.polar_oracle();
            let sampler = SphereSampler::new(6, 51).unwrap();
            for i in 0..200 {
                let th = sampler.direction(i);
                let h = proj.support_flat(&th);
                assert!(h >= proj.min_support() - 1e-12, "bound violated: {h}");
                assert!(oracle.radial(&th) <= 1.0 / proj.min_support() + 1e-12);
            }
        }
    }

    #[test]
    fn simplex_bound_values() {
        assert!((simplex_product_bound(2, 2) - 15.0 / 16.0).abs() < 1e-14);
        assert!((simplex_product_bound(3, 1) - 20.0 / 27.0).abs() < 1e-14);
        let b = ball_proj_mean_width(2, 1, 50_000, 23).unwrap();
        // Pi B^2 = 2 B^2 has mean width 2.
        assert!((b.value - 2.0).abs() < 1e-9);
    }
}
