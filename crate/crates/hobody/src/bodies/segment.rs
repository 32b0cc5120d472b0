//! Segment hulls `C = conv{o, p_1, .., p_m}` and their first intrinsic volume.
//!
//! `V_1` is dimension-invariant, so it is evaluated inside the span of the
//! points: length for a segment, half the perimeter for a planar hull, and
//! the normalized mean-curvature edge sum for a tetrahedron.  With `m <= 3`
//! the span has dimension at most 3, so every case is exact.

use super::hull::{planar_hull, polygon_perimeter};
use super::{DirectionTuple, Support};
use crate::vecmat::{self, dot, norm, sub};

#[derive(Clone, Debug)]
pub struct SegmentHull {
    pub n: usize,
    pub points: Vec<Vec<f64>>,
}

impl SegmentHull {
    pub fn new(n: usize, points: Vec<Vec<f64>>) -> Self {
        debug_assert!(points.iter().all(|p| p.len() == n));
        SegmentHull { n, points }
    }

    pub fn from_tuple(t: &DirectionTuple) -> Self {
        SegmentHull {
            n: t.n,
            points: t.blocks().map(<[f64]>::to_vec).collect(),
        }
    }

    /// The reflected hull `conv{o, -p_1, .., -p_m}`.
    #[must_use]
    pub fn reflected(&self) -> Self {
        SegmentHull {
            n: self.n,
            points: self.points.iter().map(|p| vecmat::scaled(p, -1.0)).collect(),
        }
    }

    /// First intrinsic volume of the hull; exact for span dimension <= 3.
    pub fn intrinsic_v1(&self) -> f64 {
        let tol = 1e-11
            * self
                .points
                .iter()
                .map(|p| norm(p))
                .fold(1.0f64, f64::max);
        let basis = vecmat::orthonormal_span(&self.points, self.n, tol);
        match basis.len() {
            0 => 0.0,
            1 => {
                let mut lo = 0.0f64;
                let mut hi = 0.0f64;
                for p in &self.points {
                    let t = dot(p, &basis[0]);
                    lo = lo.min(t);
                    hi = hi.max(t);
                }
                hi - lo
            }
            2 => {
                let mut coords = vec![vec![0.0, 0.0]];
                for p in &self.points {
                    coords.push(vec![dot(p, &basis[0]), dot(p, &basis[1])]);
                }
                polygon_perimeter(&planar_hull(&coords)) / 2.0
            }
            3 => {
                let mut coords = vec![vec![0.0; 3]];
                for p in &self.points {
                    coords.push(basis.iter().map(|b| dot(p, b)).collect());
                }
                tetra_v1(&coords)
            }
            k => unreachable!("span dimension {k} exceeds 3 for m <= 3"),
        }
    }
}

/// `V_1` of a nondegenerate tetrahedron: `(1/2pi) sum_e len(e) * ext_angle(e)`.
fn tetra_v1(v: &[Vec<f64>]) -> f64 {
    debug_assert_eq!(v.len(), 4);
    let face_normal = |a: usize, b: usize, c: usize, opp: usize| -> Vec<f64> {
        let u = sub(&v[b], &v[a]);
        let w = sub(&v[c], &v[a]);
        let mut n = vec![
            u[1] * w[2] - u[2] * w[1],
            u[2] * w[0] - u[0] * w[2],
            u[0] * w[1] - u[1] * w[0],
        ];
        let len = norm(&n);
        n = vecmat::scaled(&n, 1.0 / len);
        if dot(&n, &sub(&v[opp], &v[a])) > 0.0 {
            n = vecmat::scaled(&n, -1.0);
        }
        n
    };
    let mut total = 0.0;
    for i in 0..4 {
        for j in i + 1..4 {
            let others: Vec<usize> = (0..4).filter(|&k| k != i && k != j).collect();
            let (c, d) = (others[0], others[1]);
            let n1 = face_normal(i, j, c, d);
            let n2 = face_normal(i, j, d, c);
            let ext = dot(&n1, &n2).clamp(-1.0, 1.0).acos();
            total += norm(&sub(&v[j], &v[i])) * ext;
        }
    }
    total / (2.0 * std::f64::consts::PI)
}

impl Support for SegmentHull {
    fn dim(&self) -> usize {
        self.n
    }

    fn support(&self, u: &[f64]) -> f64 {
        let mut h = 0.0f64;
        for p in &self.points {
            h = h.max(dot(p, u));
        }
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn support_takes_the_origin_into_account() {
        let c = SegmentHull::new(2, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(c.support(&[-1.0, -1.0]), 0.0);
        assert_eq!(c.support(&[1.0, 2.0]), 2.0);
    }

    #[test]
    fn v1_of_segments() {
        let s = SegmentHull::new(3, vec![vec![0.0, 3.0, 4.0]]);
        assert!((s.intrinsic_v1() - 5.0).abs() < 1e-12);
        // Two opposite collinear points span a longer segment.
        let s2 = SegmentHull::new(2, vec![vec![2.0, 0.0], vec![-1.0, 0.0]]);
        assert!((s2.intrinsic_v1() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn v1_of_planar_hulls_is_half_perimeter() {
        let t = SegmentHull::new(2, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert!((t.intrinsic_v1() - (2.0 + 2f64.sqrt()) / 2.0).abs() < 1e-12);
        // Planar triangle embedded in R^3.
        let t3 = SegmentHull::new(3, vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]);
        assert!((t3.intrinsic_v1() - (2.0 + 2f64.sqrt()) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn v1_of_a_box_like_path_matches_flattening_limit() {
        // Nearly flat tetrahedron approaches the planar value.
        let planar = SegmentHull::new(3, vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]);
        let want = planar.intrinsic_v1();
        for eps in [1e-3, 1e-5] {
            let t = SegmentHull::new(
                3,
                vec![
                    vec![1.0, 0.0, 0.0],
                    vec![0.0, 1.0, 0.0],
                    vec![0.3, 0.3, eps],
                ],
            );
            let diff = (t.intrinsic_v1() - want).abs();
            assert!(diff < 10.0 * eps + 1e-9, "eps {eps} diff {diff}");
        }
    }

    #[test]
    fn v1_reflection_invariant() {
        let c = SegmentHull::new(
            3,
            vec![
                vec![0.4, -0.2, 0.6],
                vec![-0.3, 0.8, 0.1],
                vec![0.2, 0.1, -0.7],
            ],
        );
        assert!((c.intrinsic_v1() - c.reflected().intrinsic_v1()).abs() < 1e-12);
    }

    #[test]
    fn v1_of_regular_tetrahedron_matches_quadrature() {
        // Independent oracle: V_1 = (1/kappa_2) int_{S^2} h_C du, by
        // Lebedev-free Monte Carlo with generous tolerance.
        let c = SegmentHull::new(
            3,
            vec![
                vec![1.0, 1.0, 0.0],
                vec![1.0, 0.0, 1.0],
                vec![0.0, 1.0, 1.0],
            ],
        );
        let est = crate::quadrature::mc_sphere_integral(
            |u| c.support(u),
            3,
            400_000,
            13,
        )
        .unwrap();
        let mc_v1 = est.value / std::f64::consts::PI;
        let sigma = est.std_error / std::f64::consts::PI;
        assert!(
            (c.intrinsic_v1() - mc_v1).abs() < 4.0 * sigma,
            "exact {} mc {} sigma {}",
            c.intrinsic_v1(),
            mc_v1,
            sigma
        );
    }
}
