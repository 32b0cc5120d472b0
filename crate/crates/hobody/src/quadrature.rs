//! Seeded Monte Carlo quadrature over spheres and star bodies.
//!
//! Every sample is a pure function of `(seed, sample index)`, so estimates are
//! bit-identical no matter how the index range is partitioned across worker
//! threads.  Estimates carry their standard error.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use thiserror::Error;

/// Samples evaluated sequentially per reduction block; estimates do not depend
/// on this value, it only bounds per-task work.
const BLOCK: u64 = 8192;

#[derive(Debug, Error)]
pub enum QuadratureError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("sample count must be positive")]
    NoSamples,
    #[error("integrand returned {value} at direction {direction:?} (sample {index})")]
    NonFiniteIntegrand {
        index: u64,
        value: f64,
        direction: Vec<f64>,
    },
    #[error(
        "radial oracle returned {value} at direction {direction:?} (sample {index}); \
         not a valid star body"
    )]
    InvalidRadial {
        index: u64,
        value: f64,
        direction: Vec<f64>,
    },
    #[error(
        "radial value {value} exceeds the declared bounding radius {bound} \
         (sample {index}); rejection sampling would miss part of the body"
    )]
    RadialExceedsBound { index: u64, value: f64, bound: f64 },
    #[error(
        "no point accepted after {rounds} rejection rounds (sample {index}); \
         the bounding radius is far too loose for this dimension"
    )]
    RejectionExhausted { index: u64, rounds: u32 },
}

/// Volume of the unit ball in `R^d`.
pub fn kappa(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => kappa(d - 2) * 2.0 * std::f64::consts::PI / d as f64,
    }
}

/// Default sample budget by ambient dimension.
pub fn default_samples(dim: usize) -> u64 {
    if dim <= 4 {
        200_000
    } else if dim <= 8 {
        1_000_000
    } else {
        4_000_000
    }
}

/// A Monte Carlo estimate with its one-sigma standard error.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MCEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

impl MCEstimate {
    pub fn exact(value: f64) -> Self {
        MCEstimate {
            value,
            std_error: 0.0,
            samples: 0,
            seed: 0,
        }
    }

    /// Multiply by an exactly known factor.
    #[must_use]
    pub fn scaled(&self, factor: f64) -> Self {
        MCEstimate {
            value: self.value * factor,
            std_error: self.std_error * factor.abs(),
            ..*self
        }
    }

    /// Product with an independent estimate, first-order error propagation.
    #[must_use]
    pub fn product(&self, other: &MCEstimate) -> Self {
        let value = self.value * other.value;
        let std_error = ((self.value * other.std_error).powi(2)
            + (other.value * self.std_error).powi(2))
        .sqrt();
        MCEstimate {
            value,
            std_error,
            samples: self.samples.min(other.samples),
            seed: self.seed,
        }
    }

    pub fn relative_std_error(&self) -> f64 {
        if self.value == 0.0 {
            f64::INFINITY
        } else {
            (self.std_error / self.value).abs()
        }
    }
}

/// Uniform directions on `S^{dim-1}`, one independent stream per sample index.
#[derive(Clone, Copy, Debug)]
pub struct SphereSampler {
    pub dim: usize,
    pub seed: u64,
}

impl SphereSampler {
    pub fn new(dim: usize, seed: u64) -> Result<Self, QuadratureError> {
        if dim == 0 {
            return Err(QuadratureError::ZeroDimension);
        }
        Ok(SphereSampler { dim, seed })
    }

    fn rng(&self, index: u64) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.seed.to_le_bytes());
        key[8..16].copy_from_slice(&index.to_le_bytes());
        // Domain tag keeps these streams disjoint from any other keyed use.
        key[16..24].copy_from_slice(&0x9e37_79b9_7f4a_7c15u64.to_le_bytes());
        ChaCha8Rng::from_seed(key)
    }

    /// The `index`-th direction; a pure function of `(seed, index)`.
    pub fn direction(&self, index: u64) -> Vec<f64> {
        let (dir, _) = self.direction_with_rng(index);
        dir
    }

    fn direction_with_rng(&self, index: u64) -> (Vec<f64>, ChaCha8Rng) {
        let mut rng = self.rng(index);
        let dir = gaussian_direction(self.dim, &mut rng);
        (dir, rng)
    }
}

/// One uniform direction drawn from an already-keyed stream.
fn gaussian_direction(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim)
            .map(|_| rng.sample::<f64, _>(StandardNormal))
            .collect();
        let n = crate::vecmat::norm(&v);
        if n > 1e-12 {
            // Divide component-wise so 1-dimensional draws are exactly +-1.
            return v.iter().map(|x| x / n).collect();
        }
    }
}

/// Deterministic blockwise parallel reduction of `eval` over `0..count`.
///
/// Returns `(sum, sum_of_squares)` accumulated in index order per block and
/// block order across blocks, so the result is independent of thread count.
pub(crate) fn par_block_sums<E, F>(count: u64, eval: F) -> Result<(f64, f64), E>
where
    E: Send,
    F: Fn(u64) -> Result<f64, E> + Sync,
{
    let blocks = count.div_ceil(BLOCK);
    let partial: Vec<Result<(f64, f64), E>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let lo = b * BLOCK;
            let hi = ((b + 1) * BLOCK).min(count);
            let mut sum = 0.0;
            let mut sumsq = 0.0;
            for i in lo..hi {
                let v = eval(i)?;
                sum += v;
                sumsq += v * v;
            }
            Ok((sum, sumsq))
        })
        .collect();
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for r in partial {
        let (s, q) = r?;
        sum += s;
        sumsq += q;
    }
    Ok((sum, sumsq))
}

fn estimate_from_sums(
    sum: f64,
    sumsq: f64,
    count: u64,
    scale: f64,
    seed: u64,
) -> MCEstimate {
    let nf = count as f64;
    let mean = sum / nf;
    let var = (sumsq / nf - mean * mean).max(0.0);
    MCEstimate {
        value: scale * mean,
        std_error: scale.abs() * (var / nf).sqrt(),
        samples: count,
        seed,
    }
}

/// Integral of `f` over `S^{dim-1}` with the unnormalized spherical Lebesgue
/// measure (total mass `dim * kappa(dim)`).
pub fn mc_sphere_integral<F>(
    f: F,
    dim: usize,
    count: u64,
    seed: u64,
) -> Result<MCEstimate, QuadratureError>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if count == 0 {
        return Err(QuadratureError::NoSamples);
    }
    let sampler = SphereSampler::new(dim, seed)?;
    let (sum, sumsq) = par_block_sums(count, |i| {
        let dir = sampler.direction(i);
        let v = f(&dir);
        if !v.is_finite() {
            return Err(QuadratureError::NonFiniteIntegrand {
                index: i,
                value: v,
                direction: dir,
            });
        }
        Ok(v)
    })?;
    let total_measure = dim as f64 * kappa(dim);
    Ok(estimate_from_sums(sum, sumsq, count, total_measure, seed))
}

/// A star body about the origin in `R^dim`, given by its radial function.
#[derive(Clone)]
pub struct StarBodyOracle {
    pub dim: usize,
    pub bounding_radius: f64,
    radial: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for StarBodyOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("StarBodyOracle")
            .field("dim", &self.dim)
            .field("bounding_radius", &self.bounding_radius)
            .finish_non_exhaustive()
    }
}

impl StarBodyOracle {
    pub fn new<F>(dim: usize, bounding_radius: f64, radial: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        StarBodyOracle {
            dim,
            bounding_radius,
            radial: Arc::new(radial),
        }
    }

    pub fn unit_ball(dim: usize) -> Self {
        StarBodyOracle::new(dim, 1.0, |_| 1.0)
    }

    /// Radial function at a unit direction.
    pub fn radial(&self, direction: &[f64]) -> f64 {
        (self.radial)(direction)
    }

    /// Membership test via the radial function.
    pub fn contains(&self, point: &[f64]) -> bool {
        let r = crate::vecmat::norm(point);
        if r == 0.0 {
            return true;
        }
        let dir = crate::vecmat::scaled(point, 1.0 / r);
        r <= self.radial(&dir)
    }
}

fn checked_radial(
    oracle: &StarBodyOracle,
    dir: Vec<f64>,
    index: u64,
) -> Result<(f64, Vec<f64>), QuadratureError> {
    let rho = oracle.radial(&dir);
    if !rho.is_finite() || rho <= 0.0 {
        return Err(QuadratureError::InvalidRadial {
            index,
            value: rho,
            direction: dir,
        });
    }
    Ok((rho, dir))
}

/// Rejection rounds per sample index before giving up.  At acceptance rate
/// `a` the failure probability is `(1-a)^ROUNDS`, negligible for `a >= 1%`.
const REJECTION_ROUNDS: u32 = 8192;

/// The `index`-th uniform sample from a star body; pure in `(seed, index)`.
///
/// Uniformity needs the angular marginal proportional to `rho(u)^dim`, so
/// candidates are drawn uniformly from the bounding ball and accepted iff they
/// land inside the body.  Drawing the radius as `rho(u) * U^{1/dim}` for a
/// sphere-uniform `u` would leave the angular marginal flat and oversample
/// directions where the body is thin.
pub fn star_body_sample(
    oracle: &StarBodyOracle,
    seed: u64,
    index: u64,
) -> Result<Vec<f64>, QuadratureError> {
    let sampler = SphereSampler::new(oracle.dim, seed)?;
    let bound = oracle.bounding_radius;
    if !bound.is_finite() || bound <= 0.0 {
        return Err(QuadratureError::RadialExceedsBound {
            index,
            value: f64::INFINITY,
            bound,
        });
    }
    let mut rng = sampler.rng(index);
    for _ in 0..REJECTION_ROUNDS {
        let dir = gaussian_direction(oracle.dim, &mut rng);
        let (rho, dir) = checked_radial(oracle, dir, index)?;
        if rho > bound * (1.0 + 1e-9) {
            return Err(QuadratureError::RadialExceedsBound {
                index,
                value: rho,
                bound,
            });
        }
        let u: f64 = rng.gen();
        let r = bound * u.powf(1.0 / oracle.dim as f64);
        if r <= rho {
            return Ok(crate::vecmat::scaled(&dir, r));
        }
    }
    Err(QuadratureError::RejectionExhausted {
        index,
        rounds: REJECTION_ROUNDS,
    })
}

/// `count` uniform samples from a star body.
pub fn sample_star_body(
    oracle: &StarBodyOracle,
    count: u64,
    seed: u64,
) -> Result<Vec<Vec<f64>>, QuadratureError> {
    if count == 0 {
        return Err(QuadratureError::NoSamples);
    }
    (0..count)
        .into_par_iter()
        .map(|i| star_body_sample(oracle, seed, i))
        .collect()
}

/// Mean of `g` over uniform samples of `oracle`, as an estimate.
pub fn star_body_mean<G>(
    oracle: &StarBodyOracle,
    g: G,
    count: u64,
    seed: u64,
) -> Result<MCEstimate, QuadratureError>
where
    G: Fn(&[f64]) -> f64 + Sync,
{
    if count == 0 {
        return Err(QuadratureError::NoSamples);
    }
    let (sum, sumsq) = par_block_sums(count, |i| {
        let x = star_body_sample(oracle, seed, i)?;
        let v = g(&x);
        if !v.is_finite() {
            return Err(QuadratureError::NonFiniteIntegrand {
                index: i,
                value: v,
                direction: x,
            });
        }
        Ok(v)
    })?;
    Ok(estimate_from_sums(sum, sumsq, count, 1.0, seed))
}

/// Volume of a star body from `kappa_d * mean(rho^d)` over sphere directions.
pub fn star_body_volume(
    oracle: &StarBodyOracle,
    count: u64,
    seed: u64,
) -> Result<MCEstimate, QuadratureError> {
    if count == 0 {
        return Err(QuadratureError::NoSamples);
    }
    let d = oracle.dim;
    let sampler = SphereSampler::new(d, seed)?;
    let (sum, sumsq) = par_block_sums(count, |i| {
        let dir = sampler.direction(i);
        let (rho, _) = checked_radial(oracle, dir, i)?;
        Ok(rho.powi(d as i32))
    })?;
    Ok(estimate_from_sums(sum, sumsq, count, kappa(d), seed))
}
