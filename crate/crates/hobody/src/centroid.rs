//! Higher-order centroid bodies.
//!
//! A star body `L` in `R^{nm}` with positive volume determines a convex body
//! `Gamma^m L` in `R^n` through the support function
//! `h(th) = mean_{x in L} max_i <x_i, th>_-`, the Minkowski average over `L`
//! of the simplices `conv{o, -x_1, .., -x_m}`.  The module estimates that
//! support by Monte Carlo, evaluates the dual mixed volume `V~_{-1}` that
//! ties `Gamma^m` to the polar projection body, and averages mixed volumes
//! of random simplices, whose per-sample values are closed forms.

use crate::bodies::{Body, BodyError, Support};
use crate::projection::ProjectionBody;
use crate::quadrature::{
    kappa, mc_sphere_integral, sample_star_body, star_body_mean, star_body_volume, MCEstimate,
    StarBodyOracle,
};
use crate::vecmat::{dot, Matrix};

/// Radial evaluations below this are treated as a degenerate polar factor.
const MIN_RADIAL: f64 = 1e-12;
/// Seed offset decorrelating the auxiliary volume estimate from the main
/// sample cloud.
const VOLUME_SEED_OFFSET: u64 = 0x9e37_79b9_7f4a_7c15;

/// `h_{conv{o, s x_1, .., s x_m}}(th) = max_i (s <x_i, th>)_+` for a flat
/// point of `R^{nm}`; `s = -1` gives the reflected simplex used by the
/// centroid body.
fn simplex_support(n: usize, flat: &[f64], theta: &[f64], sign: f64) -> f64 {
    flat.chunks_exact(n)
        .map(|block| sign * dot(block, theta))
        .fold(0.0f64, f64::max)
}

fn block_structure(l_dim: usize, n: usize) -> Result<usize, BodyError> {
    if n == 0 || l_dim % n != 0 || l_dim == 0 {
        return Err(BodyError::Dimension {
            expected: n.max(1),
            got: l_dim,
        });
    }
    Ok(l_dim / n)
}

fn nonzero_direction(theta: &[f64]) -> Result<(), BodyError> {
    if theta.iter().all(|&t| t == 0.0) {
        return Err(BodyError::Program {
            context: "support direction is the zero vector".into(),
        });
    }
    Ok(())
}

/// `h_{Gamma^m L}(th)`: the mean of `max_i <x_i, th>_-` over uniform samples
/// of `L`; the `1/Vol(L)` normalization cancels against uniform sampling.
pub fn centroid_support(
    l: &StarBodyOracle,
    n: usize,
    theta: &[f64],
    count: u64,
    seed: u64,
) -> Result<MCEstimate, BodyError> {
    block_structure(l.dim, n)?;
    if theta.len() != n {
        return Err(BodyError::Dimension {
            expected: n,
            got: theta.len(),
        });
    }
    nonzero_direction(theta)?;
    Ok(star_body_mean(
        l,
        |x| simplex_support(n, x, theta, -1.0),
        count,
        seed,
    )?)
}

/// `h_{M^m L}(th) = Vol_{nm}(L) h_{Gamma^m L}(th)`, the unnormalized moment
/// variant; the volume factor is estimated from a decorrelated stream.
pub fn moment_support(
    l: &StarBodyOracle,
    n: usize,
    theta: &[f64],
    count: u64,
    seed: u64,
) -> Result<MCEstimate, BodyError> {
    let h = centroid_support(l, n, theta, count, seed)?;
    let vol = star_body_volume(l, count, seed.wrapping_add(VOLUME_SEED_OFFSET))?;
    Ok(h.product(&vol))
}

/// `Gamma^m L` backed by one fixed sample cloud, so its support evaluator is
/// exactly the support function of a convex body: the Minkowski average of
/// the reflected simplices of the cloud.
pub struct CentroidBody {
    n: usize,
    m: usize,
    cloud: Vec<Vec<f64>>,
    seed: u64,
}

impl CentroidBody {
    pub fn new(l: &StarBodyOracle, n: usize, count: u64, seed: u64) -> Result<Self, BodyError> {
        let m = block_structure(l.dim, n)?;
        let cloud = sample_star_body(l, count, seed)?;
        Ok(CentroidBody { n, m, cloud, seed })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Support value with the cloud's standard error.
    pub fn support_estimate(&self, theta: &[f64]) -> MCEstimate {
        let count = self.cloud.len() as u64;
        let (mut sum, mut sumsq) = (0.0, 0.0);
        for x in &self.cloud {
            let v = simplex_support(self.n, x, theta, -1.0);
            sum += v;
            sumsq += v * v;
        }
        let mean = sum / count as f64;
        let var = (sumsq / count as f64 - mean * mean).max(0.0);
        MCEstimate {
            value: mean,
            std_error: (var / count as f64).sqrt(),
            samples: count,
            seed: self.seed,
        }
    }
}

impl Support for CentroidBody {
    fn dim(&self) -> usize {
        self.n
    }

    fn support(&self, u: &[f64]) -> f64 {
        self.support_estimate(u).value
    }
}

/// `V~_{-1}(L[d+1], M) = (1/d) int_{S^{d-1}} rho_L^{d+1} rho_M^{-1}` for star
/// bodies of the same dimension `d`.
pub fn dual_mixed_vol_neg1(
    l: &StarBodyOracle,
    m: &StarBodyOracle,
    count: u64,
    seed: u64,
) -> Result<MCEstimate, BodyError> {
    let d = l.dim;
    if m.dim != d {
        return Err(BodyError::Dimension {
            expected: d,
            got: m.dim,
        });
    }
    let integral = mc_sphere_integral(
        |u| {
            let rm = m.radial(u);
            if !(rm > MIN_RADIAL) {
                return f64::NAN;
            }
            l.radial(u).powi(d as i32 + 1) / rm
        },
        d,
        count,
        seed,
    )?;
    Ok(integral.scaled(1.0 / d as f64))
}

/// Exact `V(K[n-1], conv{o, s x_1, .., s x_m})` evaluator with the per-body
/// preprocessing (facet data or ellipsoid factor inverse) hoisted out of the
/// sampling loop.  Mixed volumes are translation invariant in each argument,
/// so ellipsoid centers are ignored.
fn simplex_mixed_volume_fn(
    k: &Body,
    sign: f64,
) -> Result<Box<dyn Fn(&[f64]) -> f64 + Sync + Send>, BodyError> {
    let n = k.dim();
    match k {
        Body::Polytope(p) => {
            let facets: Vec<(Vec<f64>, f64)> = p
                .facets()
                .iter()
                .map(|f| (f.normal.clone(), f.measure))
                .collect();
            Ok(Box::new(move |flat| {
                let mut acc = 0.0;
                for (normal, measure) in &facets {
                    acc += measure * simplex_support(n, flat, normal, sign);
                }
                acc / n as f64
            }))
        }
        Body::Ellipsoid(e) => {
            let inv = e.factor.inverse().map_err(|_| BodyError::SingularMap {
                det: e.factor.det(),
            })?;
            let det = e.factor.det().abs();
            // V(TB[n-1], C) = |det T| (kappa_{n-1}/n) V_1(T^{-1} C).
            let scale = det * kappa(n - 1) / n as f64;
            Ok(Box::new(move |flat| {
                let points: Vec<Vec<f64>> = flat
                    .chunks_exact(n)
                    .map(|b| {
                        let mut y = inv.mul_vec(b);
                        y.iter_mut().for_each(|c| *c *= sign);
                        y
                    })
                    .collect();
                scale * crate::bodies::SegmentHull::new(n, points).intrinsic_v1()
            }))
        }
    }
}

fn expected_mixed_volume(
    k: &Body,
    l: &StarBodyOracle,
    sign: f64,
    count: u64,
    seed: u64,
) -> Result<MCEstimate, BodyError> {
    block_structure(l.dim, k.dim())?;
    let f = simplex_mixed_volume_fn(k, sign)?;
    Ok(star_body_mean(l, |x| f(x), count, seed)?)
}

/// `V(K[n-1], Gamma^m L) = E_L V(K[n-1], conv{o, -X_1, .., -X_m})`, averaged
/// with exact per-sample mixed volumes.
pub fn mixed_vol_centroid(
    k: &Body,
    l: &StarBodyOracle,
    count: u64,
    seed: u64,
) -> Result<MCEstimate, BodyError> {
    expected_mixed_volume(k, l, -1.0, count, seed)
}

/// `E_L V(K[n-1], conv{o, X_1, .., X_m})` for uniform `X` in `L` (no sign
/// flip; the two agree for origin-symmetric `L`).
pub fn random_simplex_expectation(
    k: &Body,
    l: &StarBodyOracle,
    count: u64,
    seed: u64,
) -> Result<MCEstimate, BodyError> {
    expected_mixed_volume(k, l, 1.0, count, seed)
}

/// Both sides of the duality identity
/// `V~_{-1}(L[nm+1], (Pi^m K)^o) = Vol(L) ((nm+1)/m) V(K[n-1], Gamma^m L)`.
pub struct DualityCheck {
    pub lhs: MCEstimate,
    pub rhs: MCEstimate,
}

impl DualityCheck {
    pub fn discrepancy(&self) -> f64 {
        (self.lhs.value - self.rhs.value).abs()
    }

    pub fn combined_std_error(&self) -> f64 {
        self.lhs.std_error.hypot(self.rhs.std_error)
    }
}

/// Evaluates the duality identity with independent streams for the three
/// estimates (sphere integral, simplex average, volume of `L`).
pub fn duality_check(
    k: &Body,
    l: &StarBodyOracle,
    count: u64,
    seed: u64,
) -> Result<DualityCheck, BodyError> {
    let n = k.dim();
    let m = block_structure(l.dim, n)?;
    let proj = ProjectionBody::new(k, m)?;
    let lhs = dual_mixed_vol_neg1(l, &proj.polar_oracle(), count, seed)?;
    let mixed = mixed_vol_centroid(k, l, count, seed.wrapping_add(1))?;
    let vol = star_body_volume(l, count, seed.wrapping_add(VOLUME_SEED_OFFSET))?;
    let factor = (n * m + 1) as f64 / m as f64;
    let rhs = vol.product(&mixed).scaled(factor);
    Ok(DualityCheck { lhs, rhs })
}

/// Radius of the centroid body of the polar projection body of the unit
/// ball: `Gamma^m (Pi^m B)^o = m / ((nm+1) kappa_n) B`.
pub fn ball_centroid_radius(n: usize, m: usize) -> f64 {
    m as f64 / ((n * m + 1) as f64 * kappa(n))
}

/// Support of the image body `Gamma^m (T-bar L)` at `th`, sampled from `L`
/// and pushed through the block lift of `t`; with the seed shared against
/// `centroid_support(l, t^t th)` the two estimates agree sample by sample.
pub fn centroid_support_mapped(
    l: &StarBodyOracle,
    n: usize,
    t: &Matrix,
    theta: &[f64],
    count: u64,
    seed: u64,
) -> Result<MCEstimate, BodyError> {
    block_structure(l.dim, n)?;
    nonzero_direction(theta)?;
    if t.rows() != n || t.cols() != n || theta.len() != n {
        return Err(BodyError::Dimension {
            expected: n,
            got: t.rows().max(theta.len()),
        });
    }
    let t = t.clone();
    Ok(star_body_mean(
        l,
        |x| {
            x.chunks_exact(n)
                .map(|block| -dot(&t.mul_vec(block), theta))
                .fold(0.0f64, f64::max)
        },
        count,
        seed,
    )?)
}

/// Area of `Gamma^m L` for planar targets (`n = 2`) from a uniform support
/// scan: the polygon cut out by `dirs` support half-planes (an outer body
/// whose relative excess is below `sec^2(pi/dirs) - 1`), with the standard
/// error taken over 16 sub-cloud replicas.
pub fn centroid_area_2d(
    l: &StarBodyOracle,
    dirs: usize,
    count: u64,
    seed: u64,
) -> Result<MCEstimate, BodyError> {
    block_structure(l.dim, 2)?;
    if dirs < 8 {
        return Err(BodyError::Program {
            context: "support scan needs at least 8 directions",
        });
    }
    let cloud = sample_star_body(l, count, seed)?;
    let normals: Vec<[f64; 2]> = (0..dirs)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * k as f64 / dirs as f64;
            [a.cos(), a.sin()]
        })
        .collect();
    let area_of = |points: &[Vec<f64>]| -> f64 {
        let offsets: Vec<f64> = normals
            .iter()
            .map(|u| {
                let sum: f64 = points
                    .iter()
                    .map(|x| simplex_support(2, x, u, -1.0))
                    .sum();
                sum / points.len() as f64
            })
            .collect();
        halfplane_area(&normals, &offsets)
    };
    let value = area_of(&cloud);
    let blocks = 16usize.min(cloud.len());
    let block_areas: Vec<f64> = (0..blocks)
        .map(|b| {
            let part: Vec<Vec<f64>> = cloud
                .iter()
                .skip(b)
                .step_by(blocks)
                .cloned()
                .collect();
            area_of(&part)
        })
        .collect();
    let mean = block_areas.iter().sum::<f64>() / blocks as f64;
    let var = block_areas
        .iter()
        .map(|a| (a - mean).powi(2))
        .sum::<f64>()
        / blocks as f64;
    Ok(MCEstimate {
        value,
        std_error: (var / blocks as f64).sqrt(),
        samples: count,
        seed,
    })
}

/// Intersection area of `{y : <y, u_k> <= h_k}` by successive polygon
/// clipping from a bounding square.
fn halfplane_area(normals: &[[f64; 2]], offsets: &[f64]) -> f64 {
    let bound = 2.0 * offsets.iter().fold(1e-300f64, |a, &b| a.max(b.abs()));
    let mut poly = vec![
        [-bound, -bound],
        [bound, -bound],
        [bound, bound],
        [-bound, bound],
    ];
    for (u, &h) in normals.iter().zip(offsets) {
        let mut next = Vec::with_capacity(poly.len() + 1);
        for i in 0..poly.len() {
            let a = poly[i];
            let b = poly[(i + 1) % poly.len()];
            let da = a[0] * u[0] + a[1] * u[1] - h;
            let db = b[0] * u[0] + b[1] * u[1] - h;
            if da <= 0.0 {
                next.push(a);
            }
            if (da < 0.0) != (db < 0.0) && da != db {
                let t = da / (da - db);
                next.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
            }
        }
        poly = next;
        if poly.len() < 3 {
            return 0.0;
        }
    }
    let mut twice = 0.0;
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        twice += a[0] * b[1] - a[1] * b[0];
    }
    0.5 * twice.abs()
}

/// The scale-invariant centroid functional `Vol_2(Gamma^m L) / Vol(L)^{1/m}`,
/// minimized exactly at polar projection bodies of ellipses.
pub fn bpch_functional_2d(
    l: &StarBodyOracle,
    dirs: usize,
    count: u64,
    seed: u64,
) -> Result<MCEstimate, BodyError> {
    let m = block_structure(l.dim, 2)?;
    let area = centroid_area_2d(l, dirs, count, seed)?;
    let vol = star_body_volume(l, count, seed.wrapping_add(VOLUME_SEED_OFFSET))?;
    let scale = vol.value.powf(-1.0 / m as f64);
    let scale_err = scale * vol.relative_std_error() / m as f64;
    let value = area.value * scale;
    let std_error = ((area.std_error * scale).powi(2) + (area.value * scale_err).powi(2)).sqrt();
    Ok(MCEstimate {
        value,
        std_error,
        samples: area.samples.min(vol.samples),
        seed,
    })
}

/// The random-simplex functional
/// `Vol(L)^{-1/(nm)} Vol(K)^{-(n-1)/n} E_L V(K[n-1], C_X)`, minimized at
/// `K` an ellipsoid with `L` a dilate of `(Pi^m K)^o`.
pub fn random_simplex_functional(
    k: &Body,
    l: &StarBodyOracle,
    count: u64,
    seed: u64,
) -> Result<MCEstimate, BodyError> {
    let n = k.dim();
    let m = block_structure(l.dim, n)?;
    let expect = random_simplex_expectation(k, l, count, seed)?;
    let vol_l = star_body_volume(l, count, seed.wrapping_add(VOLUME_SEED_OFFSET))?;
    let d = (n * m) as f64;
    let scale_l = vol_l.value.powf(-1.0 / d);
    let scale_l_err = scale_l * vol_l.relative_std_error() / d;
    let scale_k = k.volume().powf(-((n as f64 - 1.0) / n as f64));
    let value = expect.value * scale_l * scale_k;
    let std_error = scale_k
        * ((expect.std_error * scale_l).powi(2) + (expect.value * scale_l_err).powi(2)).sqrt();
    Ok(MCEstimate {
        value,
        std_error,
        samples: expect.samples.min(vol_l.samples),
        seed,
    })
}
