//! Radial `p`-th mean bodies `R_p^m K` and the Berwald profile.
//!
//! The radial function of `R_p^m K` raised to the `p` is the average over
//! `x in K` of `min_i rho_{K-x}(-th_i)^p`, which collapses to a weighted
//! Mellin integral of the covariogram along the ray:
//! `rho^p = (p / Vol K) int_0^{rho_D} g(r) r^{p-1} dr` for `p > 0`, with a
//! subtracted version on `-1 < p < 0` and a multiplicative limit at `p = 0`.
//! The covariogram along a ray is piecewise polynomial with kinks at radii
//! known in closed form, so `RayMellin` splits the ray at the kinks (octave
//! refined toward zero, where `r^{p-1}` is stiff), caches the covariogram at
//! fixed Gauss-Legendre nodes, and reuses the same evaluations for every `p`.

use std::sync::OnceLock;

use crate::bodies::{BodyError, DirectionTuple, Polytope};
use crate::covariogram::CovariogramRay;
use crate::quadrature::StarBodyOracle;
use crate::vecmat::Matrix;

/// Depth cap for adaptive bisection; 2^-40 of the ray is far below any kink
/// spacing that survives floating point.
const MAX_DEPTH: u32 = 40;
/// Fraction of the ray kept for the analytic head of the subtracted
/// integrals; first-order covariogram loss dominates rounding noise there.
const HEAD_FRACTION: f64 = 1e-4;

/// Nodes and weights of `k`-point Gauss-Legendre quadrature on `[-1, 1]`,
/// by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(k: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(k >= 1);
    let mut nodes = vec![0.0; k];
    let mut weights = vec![0.0; k];
    for i in 0..k {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (k as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_eval(k, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_eval(k, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// `(P_k(x), P_k'(x))` by the three-term recurrence.
fn legendre_eval(k: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=k {
        let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
        p0 = p1;
        p1 = p2;
    }
    if k == 0 {
        return (1.0, 0.0);
    }
    let dp = k as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static CACHE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    CACHE.get_or_init(|| gauss_legendre(16))
}

fn gl_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let (nodes, weights) = gl16();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut sum = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        sum += w * f(mid + half * x);
    }
    sum * half
}

/// Adaptive Gauss-Legendre integral of `f` over `[a, b]`.
///
/// Nodes are interior, so integrable endpoint singularities are tolerated;
/// the callers below remove them analytically anyway.
pub fn adaptive_integral<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let whole = gl_panel(f, a, b);
    let tol = rel_tol * whole.abs().max(1e-300);
    bisect(f, a, b, whole, tol, MAX_DEPTH)
}

fn bisect<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let mid = 0.5 * (a + b);
    let left = gl_panel(f, a, mid);
    let right = gl_panel(f, mid, b);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= tol {
        return left + right;
    }
    bisect(f, a, mid, left, 0.5 * tol, depth - 1)
        + bisect(f, mid, b, right, 0.5 * tol, depth - 1)
}

/// `binom(p + n, n) = prod_{k=1..n} (p + k) / k` for real `p`.
pub fn real_binomial(n: usize, p: f64) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * (p + k as f64) / k as f64)
}

/// `H_n = sum_{k=1..n} 1/k`, the `p -> 0` limit of `binom(p+n, n)^{1/p}`'s
/// exponent.
pub fn harmonic(n: usize) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

/// Cached Mellin integrator for one covariogram ray.
///
/// Between breakpoints the covariogram is a polynomial of degree at most
/// `dim`, so fixed 16-point Gauss-Legendre panels that never straddle a kink
/// integrate `g(r) r^{p-1}` to near machine precision, and one set of cached
/// evaluations serves every exponent.  On `[0, delta]` (kept below the first
/// breakpoint) the polynomial is recovered exactly from `dim` samples and the
/// moment integrals are closed forms, which sidesteps the rounding noise that
/// `r^{p-1}` would otherwise amplify as `p -> -1`.
pub struct RayMellin {
    dim: usize,
    v: f64,
    s: f64,
    delta: f64,
    /// `A_k = a_k delta^k` where `g(r) - V = sum_{k=1..dim} a_k r^k` on
    /// `[0, delta]`.
    head: Vec<f64>,
    panels: Vec<Panel>,
}

struct Panel {
    half: f64,
    r: Vec<f64>,
    g: Vec<f64>,
}

impl RayMellin {
    pub fn new(ray: &CovariogramRay) -> Self {
        let n = ray.dim();
        let v = ray.volume();
        let s = ray.support_radius();
        if s <= 0.0 {
            return RayMellin {
                dim: n,
                v,
                s: 0.0,
                delta: 0.0,
                head: Vec::new(),
                panels: Vec::new(),
            };
        }
        let bps = ray.breakpoints();
        let mut delta = HEAD_FRACTION * s;
        if let Some(&first) = bps.first() {
            if first < 2.0 * delta {
                delta = 0.5 * first;
            }
        }
        let head = if n == 1 {
            vec![ray.eval(delta) - v]
        } else {
            let taus: Vec<f64> = (1..=n).map(|j| j as f64 / n as f64).collect();
            let rows: Vec<Vec<f64>> = taus
                .iter()
                .map(|&t| (1..=n).map(|k| t.powi(k as i32)).collect())
                .collect();
            let rhs: Vec<f64> = taus.iter().map(|&t| ray.eval(t * delta) - v).collect();
            Matrix::from_rows(&rows)
                .solve(&rhs)
                .expect("vandermonde with distinct nodes is nonsingular")
        };
        let mut cuts = Vec::new();
        let mut c = delta;
        while c < s * (1.0 - 1e-9) {
            cuts.push(c);
            c *= 2.0;
        }
        cuts.extend(
            bps.iter()
                .copied()
                .filter(|&b| b > delta * (1.0 + 1e-9) && b < s * (1.0 - 1e-9)),
        );
        cuts.sort_by(|a, b| a.total_cmp(b));
        cuts.dedup_by(|a, b| *a - *b <= 1e-9 * s);
        cuts.push(s);
        let (nodes, _) = gl16();
        let panels = cuts
            .windows(2)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                let half = 0.5 * (w[1] - w[0]);
                let r: Vec<f64> = nodes.iter().map(|&x| mid + half * x).collect();
                let g: Vec<f64> = r.iter().map(|&ri| ray.eval(ri)).collect();
                Panel { half, r, g }
            })
            .collect();
        RayMellin {
            dim: n,
            v,
            s,
            delta,
            head,
            panels,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn volume(&self) -> f64 {
        self.v
    }

    pub fn support_radius(&self) -> f64 {
        self.s
    }

    fn tail_sum<F: Fn(f64, f64) -> f64>(&self, f: F) -> f64 {
        let (_, weights) = gl16();
        self.panels
            .iter()
            .map(|p| {
                let sum: f64 = p
                    .r
                    .iter()
                    .zip(&p.g)
                    .zip(weights)
                    .map(|((&r, &g), w)| w * f(r, g))
                    .sum();
                sum * p.half
            })
            .sum()
    }

    /// `rho_{R_p^m K}` at the ray direction; `p = +inf` gives the
    /// difference-body radial.
    pub fn radial_mean(&self, p: f64) -> Result<f64, BodyError> {
        if p.is_nan() || p <= -1.0 {
            return Err(BodyError::Exponent { p });
        }
        if self.s <= 0.0 {
            return Ok(0.0);
        }
        let (v, s, delta) = (self.v, self.s, self.delta);
        if p.is_infinite() {
            return Ok(s);
        }
        if p >= 1.0 {
            // Direct all-positive form; the subtracted variant would cancel
            // catastrophically for large p.
            let moments: f64 = self
                .head
                .iter()
                .enumerate()
                .map(|(i, &a)| a / (i as f64 + 1.0 + p))
                .sum();
            let head = delta.powf(p) * (v / p + moments);
            let tail = self.tail_sum(|r, g| g * r.powf(p - 1.0));
            Ok((p / v * (head + tail)).powf(1.0 / p))
        } else if p == 0.0 {
            // rho_0 = rho_D exp(int_0^{rho_D} (g/V - 1) / r dr).
            let head: f64 = self
                .head
                .iter()
                .enumerate()
                .map(|(i, &a)| a / v / (i as f64 + 1.0))
                .sum();
            let tail = self.tail_sum(|r, g| (g / v - 1.0) / r);
            Ok(s * (head + tail).exp())
        } else {
            // Subtracted form, valid on all of (-1, 1):
            //   rho^p = rho_D^p + p int_0^{rho_D} (g/V - 1) r^{p-1} dr.
            // It avoids both the r^{p-1} singularity and any 1/p error
            // blowup near p = 0.
            let head: f64 = delta.powf(p)
                * self
                    .head
                    .iter()
                    .enumerate()
                    .map(|(i, &a)| a / v / (i as f64 + 1.0 + p))
                    .sum::<f64>();
            let tail = self.tail_sum(|r, g| (g / v - 1.0) * r.powf(p - 1.0));
            Ok((s.powf(p) + p * (head + tail)).powf(1.0 / p))
        }
    }

    /// The Berwald profile `G(p) = binom(p+n, n)^{1/p} rho_{R_p^m K}(th)`,
    /// non-increasing on `(-1, inf]` and constant exactly for simplices.
    pub fn berwald(&self, p: f64) -> Result<f64, BodyError> {
        let rho = self.radial_mean(p)?;
        if p.is_infinite() {
            Ok(rho)
        } else if p == 0.0 {
            Ok(harmonic(self.dim).exp() * rho)
        } else {
            Ok(real_binomial(self.dim, p).powf(1.0 / p) * rho)
        }
    }
}

/// `rho_{R_p^m K}(th)` for the ray's direction tuple; `p = +inf` gives the
/// difference-body radial.  Sweeping many `p` over one ray is cheaper through
/// a shared [`RayMellin`].
pub fn radial_mean(ray: &CovariogramRay, p: f64) -> Result<f64, BodyError> {
    RayMellin::new(ray).radial_mean(p)
}

/// The Berwald profile `G(p) = binom(p+n, n)^{1/p} rho_{R_p^m K}(th)`,
/// non-increasing on `(-1, inf]` and constant exactly for simplices.
pub fn berwald_functional(ray: &CovariogramRay, p: f64) -> Result<f64, BodyError> {
    RayMellin::new(ray).berwald(p)
}

/// Star-body oracle for `R_p^m K`; each radial evaluation runs a ray
/// quadrature, so keep sample budgets modest.
pub fn rmb_oracle(poly: &Polytope, m: usize, p: f64) -> Result<StarBodyOracle, BodyError> {
    if p.is_nan() || p <= -1.0 {
        return Err(BodyError::Exponent { p });
    }
    let n = poly.dim();
    if m == 0 {
        return Err(BodyError::UnsupportedDimension(0));
    }
    // R_p^m K sits inside D^m K, whose radial is at most the diameter bound.
    let bound = 2.0 * poly.bounding_radius() * (m as f64).sqrt();
    let body = poly.clone();
    Ok(StarBodyOracle::new(n * m, bound, move |u| {
        let tuple = match DirectionTuple::new(n, m, u.to_vec()) {
            Ok(t) => t,
            Err(_) => return f64::NAN,
        };
        match CovariogramRay::new(&body, &tuple).and_then(|ray| radial_mean(&ray, p)) {
            Ok(rho) => rho,
            Err(_) => f64::NAN,
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::Body;
    use crate::projection::proj_support;
    use crate::quadrature::{self, SphereSampler};

    fn ray_for(poly: &Polytope, blocks: &[Vec<f64>]) -> CovariogramRay {
        let tuple = DirectionTuple::from_blocks(blocks).unwrap();
        CovariogramRay::new(poly, &tuple).unwrap()
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (nodes, weights) = gauss_legendre(5);
        assert_eq!(nodes.len(), 5);
        assert!((weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // Degree 9 is exact for 5 nodes: int_{-1}^1 x^8 = 2/9.
        let i8: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(x, w)| w * x.powi(8))
            .sum();
        assert!((i8 - 2.0 / 9.0).abs() < 1e-14);
        // Nodes are symmetric and sorted away from the endpoints.
        for x in &nodes {
            assert!(x.abs() < 1.0);
        }
    }

    #[test]
    fn adaptive_integral_handles_kinks_and_soft_singularities() {
        let kink = adaptive_integral(&|x: f64| (x - 0.3).abs(), 0.0, 1.0, 1e-12);
        assert!((kink - (0.09 + 0.49) / 2.0).abs() < 1e-10);
        let root = adaptive_integral(&|x: f64| x.sqrt(), 0.0, 1.0, 1e-12);
        assert!((root - 2.0 / 3.0).abs() < 1e-9);
        let sin = adaptive_integral(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12);
        assert!((sin - 2.0).abs() < 1e-12);
    }

    #[test]
    fn interval_radial_means_match_closed_form() {
        // K = [0, 1], th = 1: g(r) = 1 - r, so rho_p = (p+1)^{-1/p},
        // rho_0 = 1/e, and rho_inf = 1.
        let k = Polytope::cube(1);
        let ray = ray_for(&k, &[vec![1.0]]);
        for p in [3.0, 2.0, 1.0, 0.7, 0.25, -0.25, -0.5, -0.9] {
            let got = radial_mean(&ray, p).unwrap();
            let want = (p + 1.0).powf(-1.0 / p);
            assert!(
                (got - want).abs() < 1e-9,
                "p {p}: got {got} want {want}"
            );
        }
        assert!((radial_mean(&ray, 0.0).unwrap() - (-1.0f64).exp()).abs() < 1e-9);
        assert_eq!(radial_mean(&ray, f64::INFINITY).unwrap(), 1.0);
        assert!(radial_mean(&ray, -1.0).is_err());
        assert!(radial_mean(&ray, f64::NAN).is_err());
    }

    #[test]
    fn square_axis_ray_reproduces_the_interval_family() {
        // g((r, 0)) = 1 - r for the unit square, so the same closed form.
        let k = Polytope::cube(2);
        let ray = ray_for(&k, &[vec![1.0, 0.0]]);
        for p in [2.0, 0.5, -0.5] {
            let got = radial_mean(&ray, p).unwrap();
            assert!((got - (p + 1.0).powf(-1.0 / p)).abs() < 1e-9);
        }
    }

    #[test]
    fn branch_seams_are_continuous() {
        let k = Polytope::simplex(2);
        let ray = ray_for(&k, &[vec![0.6, 0.8], vec![-0.8, 0.6]]);
        let at = |p: f64| radial_mean(&ray, p).unwrap();
        assert!((at(1.0 - 1e-9) - at(1.0 + 1e-9)).abs() < 1e-7);
        // Near p = 0 the quadrature error is amplified by 1/p, so probe at
        // 1e-4 with a band covering the genuine O(p) drift.
        assert!((at(-1e-4) - at(0.0)).abs() < 1e-3);
        assert!((at(1e-4) - at(0.0)).abs() < 1e-3);
        let g0 = berwald_functional(&ray, 0.0).unwrap();
        let g_eps = berwald_functional(&ray, 1e-4).unwrap();
        assert!((g0 - g_eps).abs() < 1e-3 * g0);
    }

    #[test]
    fn simplex_profile_is_constant() {
        // For a simplex g^{1/n} is affine on every ray, which forces
        // G(p) = rho_D for all p.
        for (k, m, seed) in [
            (Polytope::simplex(2), 2usize, 3u64),
            (Polytope::simplex(3), 1, 4),
            (Polytope::simplex(3), 2, 5),
        ] {
            let n = k.dim();
            let sampler = SphereSampler::new(n * m, seed).unwrap();
            for i in 0..3 {
                let tuple = DirectionTuple::new(n, m, sampler.direction(i)).unwrap();
                let ray = CovariogramRay::new(&k, &tuple).unwrap();
                let s = ray.support_radius();
                for p in [4.0, 1.5, 0.5, 0.0, -0.5, -0.9] {
                    let g = berwald_functional(&ray, p).unwrap();
                    assert!(
                        (g - s).abs() < 1e-7 * s,
                        "n {n} m {m} p {p}: G {g} vs rho_D {s}"
                    );
                }
            }
        }
    }

    #[test]
    fn profile_is_monotone_with_projection_endpoint() {
        // Non-simplex bodies: G decreases strictly somewhere, stays within
        // [rho_D, n Vol(K) / h_{Pi^m K}], and approaches the upper end as
        // p -> -1.
        let cases = [
            (Polytope::cube(2), 2usize, 11u64),
            (Polytope::random(2, 7, 19).unwrap(), 1, 12),
            (Polytope::random(3, 8, 2).unwrap(), 2, 13),
        ];
        for (k, m, seed) in cases {
            let n = k.dim();
            let body = Body::Polytope(k.clone());
            let sampler = SphereSampler::new(n * m, seed).unwrap();
            for i in 0..2 {
                let tuple = DirectionTuple::new(n, m, sampler.direction(i)).unwrap();
                let ray = CovariogramRay::new(&k, &tuple).unwrap();
                let upper = n as f64 * k.volume() / proj_support(&body, &tuple).unwrap();
                let lower = ray.support_radius();
                let grid = [-0.99, -0.9, -0.6, -0.3, 0.0, 0.5, 1.0, 3.0, 8.0];
                let mut prev = f64::INFINITY;
                for p in grid {
                    let g = berwald_functional(&ray, p).unwrap();
                    assert!(g <= prev * (1.0 + 1e-8), "not monotone at p {p}");
                    assert!(g >= lower * (1.0 - 1e-8), "below rho_D at p {p}");
                    assert!(g <= upper * (1.0 + 1e-8), "above polar bound at p {p}");
                    prev = g;
                }
                // The p -> -1 limit is the polar projection radial.
                let near = berwald_functional(&ray, -0.999).unwrap();
                assert!(
                    (near - upper).abs() < 2e-2 * upper,
                    "G(-0.999) {near} vs nV/h {upper}"
                );
                assert!(
                    (berwald_functional(&ray, f64::INFINITY).unwrap() - lower).abs()
                        < 1e-12 * lower
                );
            }
        }
    }

    #[test]
    fn interval_rmb_volume_is_exact() {
        // R_1^1 [0,1] has radial 1/2 in both directions, so volume 1 = Vol K.
        let oracle = rmb_oracle(&Polytope::cube(1), 1, 1.0).unwrap();
        let v = quadrature::star_body_volume(&oracle, 2_000, 7).unwrap();
        assert!((v.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn triangle_rmb_volume_matches_identity() {
        // Vol_{nm}(R_{nm}^m K) = Vol(K)^m with nm = 2, m = 1.
        let tri = Polytope::simplex(2);
        let oracle = rmb_oracle(&tri, 1, 2.0).unwrap();
        let v = quadrature::star_body_volume(&oracle, 4_000, 9).unwrap();
        let want = tri.volume();
        assert!(
            (v.value - want).abs() < 3.0 * v.std_error + 1e-6,
            "got {} want {want} sigma {}",
            v.value,
            v.std_error
        );
    }

    #[test]
    fn definition_cross_check_by_monte_carlo() {
        // rho^p = E_{x ~ K} min_i rho_{K-x}(-th_i)^p, sampled directly.
        let tri = Polytope::from_vertices(
            2,
            &[vec![0.0, 0.0], vec![1.3, 0.2], vec![0.3, 1.1]],
        )
        .unwrap();
        let tuple = DirectionTuple::from_blocks(&[vec![0.6, 0.8], vec![-1.0, 0.0]]).unwrap();
        let scaled = tuple.normalized().unwrap();
        let ray = CovariogramRay::new(&tri, &scaled).unwrap();
        let body = Body::Polytope(tri.clone());
        let oracle = body.centered_star_oracle();
        let shift = body.interior_point();
        // p = -1/4 keeps the sampled powers square-integrable.
        for p in [2.0, -0.25] {
            let exact = radial_mean(&ray, p).unwrap();
            let est = quadrature::star_body_mean(
                &oracle,
                |y| {
                    let x: Vec<f64> = y.iter().zip(&shift).map(|(a, c)| a + c).collect();
                    let moved = tri.translated(&crate::vecmat::scaled(&x, -1.0));
                    scaled
                        .blocks()
                        .map(|th| {
                            let neg: Vec<f64> = th.iter().map(|t| -t).collect();
                            moved.radial(&neg).unwrap_or(f64::NAN)
                        })
                        .fold(f64::INFINITY, f64::min)
                        .powf(p)
                },
                40_000,
                31,
            )
            .unwrap();
            let got = est.value.powf(1.0 / p);
            // Delta-method error band for the root.
            let sigma = est.std_error * (got / (p.abs() * est.value)).abs();
            assert!(
                (got - exact).abs() < 4.0 * sigma + 1e-4,
                "p {p}: mc {got} exact {exact} sigma {sigma}"
            );
        }
    }
}
