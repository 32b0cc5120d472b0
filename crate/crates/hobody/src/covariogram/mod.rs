//! The m-point covariogram of a polytope and the higher-order difference body
//! built from it.
//!
//! For `K = {x : a_j . x <= b_j}` the intersection `K ∩ (x_1 + K) ∩ ... ∩
//! (x_m + K)` keeps `K`'s facet normals and only tightens the offsets to
//! `b_j + min(0, min_i <a_j, x_i>)`.  Every evaluation therefore reduces to
//! enumerating candidate vertices over n-subsets of a fixed row system, and
//! along a ray `x̄ = r θ̄` those candidates move affinely in `r`.

pub mod lp;

use crate::bodies::hull::{self, binomial, for_each_combination};
use crate::bodies::{BodyError, DirectionTuple, Polytope};
use crate::quadrature::{star_body_volume, MCEstimate, StarBodyOracle};
use crate::vecmat::{dot, Matrix};
use lp::LpOutcome;

const FEAS_EPS: f64 = 1e-9;
/// Cap on per-evaluation facet-subset solves; generous for every catalog body.
pub const MAX_SUBSETS: u128 = 400_000;

fn check_tuple(p: &Polytope, tuple: &DirectionTuple) -> Result<(), BodyError> {
    if tuple.n != p.dim() {
        return Err(BodyError::Dimension {
            expected: p.dim(),
            got: tuple.n,
        });
    }
    Ok(())
}

fn check_budget(facets: usize, dim: usize) -> Result<(), BodyError> {
    let subsets = binomial(facets, dim);
    if subsets > MAX_SUBSETS {
        return Err(BodyError::EnumerationBudget {
            subsets,
            budget: MAX_SUBSETS,
        });
    }
    Ok(())
}

/// `g_K^m(x̄) = Vol(K ∩ (x_1 + K) ∩ ... ∩ (x_m + K))` for the translation
/// tuple `x̄ = (x_1, ..., x_m)`.
pub fn m_covariogram(p: &Polytope, xs: &DirectionTuple) -> Result<f64, BodyError> {
    check_tuple(p, xs)?;
    let n = p.dim();
    let facets = p.facets();
    check_budget(facets.len(), n)?;
    let offsets: Vec<f64> = facets
        .iter()
        .map(|f| {
            let shift = xs
                .blocks()
                .map(|x| dot(&f.normal, x))
                .fold(0.0f64, f64::min);
            f.offset + shift
        })
        .collect();
    let scale = 1.0 + offsets.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let mut verts = Vec::new();
    for_each_combination(facets.len(), n, |idx| {
        let rows: Vec<Vec<f64>> = idx.iter().map(|&i| facets[i].normal.clone()).collect();
        let rhs: Vec<f64> = idx.iter().map(|&i| offsets[i]).collect();
        if let Ok(v) = Matrix::from_rows(&rows).solve(&rhs) {
            let feasible = facets
                .iter()
                .zip(&offsets)
                .all(|(f, &b)| dot(&f.normal, &v) <= b + FEAS_EPS * scale);
            if feasible {
                verts.push(v);
            }
        }
    });
    Ok(hull::volume_of_points(&verts, n, hull::EPS))
}

/// `r -> g_K^m(r θ̄)` for a fixed direction tuple, with the per-subset solves
/// hoisted out of the evaluation loop.
pub struct CovariogramRay {
    dim: usize,
    normals: Vec<Vec<f64>>,
    base: Vec<f64>,
    /// Offsets at parameter `r` are `base - r * drop`, valid for `r >= 0`.
    drop: Vec<f64>,
    /// Candidate vertex generators: `v(r) = x0 + r * x1`.
    lines: Vec<(Vec<f64>, Vec<f64>)>,
    tol: f64,
    volume: f64,
    support: f64,
}

impl CovariogramRay {
    pub fn new(p: &Polytope, theta: &DirectionTuple) -> Result<Self, BodyError> {
        check_tuple(p, theta)?;
        let n = p.dim();
        let facets = p.facets();
        check_budget(facets.len(), n)?;
        let normals: Vec<Vec<f64>> = facets.iter().map(|f| f.normal.clone()).collect();
        let base: Vec<f64> = facets.iter().map(|f| f.offset).collect();
        let drop: Vec<f64> = normals
            .iter()
            .map(|a| theta.blocks().map(|t| -dot(a, t)).fold(0.0f64, f64::max))
            .collect();
        let mut lines = Vec::new();
        for_each_combination(normals.len(), n, |idx| {
            let rows: Vec<Vec<f64>> = idx.iter().map(|&i| normals[i].clone()).collect();
            let m = Matrix::from_rows(&rows);
            let b0: Vec<f64> = idx.iter().map(|&i| base[i]).collect();
            let b1: Vec<f64> = idx.iter().map(|&i| -drop[i]).collect();
            if let (Ok(x0), Ok(x1)) = (m.solve(&b0), m.solve(&b1)) {
                lines.push((x0, x1));
            }
        });
        let tol = FEAS_EPS * (1.0 + base.iter().fold(0.0f64, |a, &b| a.max(b.abs())));
        let support = diff_body_radial(p, theta)?;
        Ok(CovariogramRay {
            dim: n,
            normals,
            base,
            drop,
            lines,
            tol,
            volume: p.volume(),
            support,
        })
    }

    /// `g(0) = Vol K`.
    /// Ambient dimension of the source body.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// Radial function of `D^m K` at the ray direction: the last `r` with a
    /// nonempty intersection.
    pub fn support_radius(&self) -> f64 {
        self.support
    }

    /// Covariogram value at parameter `r >= 0`.
    pub fn eval(&self, r: f64) -> f64 {
        debug_assert!(r >= 0.0);
        if r <= 0.0 {
            return self.volume;
        }
        let mut pts = Vec::with_capacity(self.lines.len());
        for (x0, x1) in &self.lines {
            let v: Vec<f64> = x0.iter().zip(x1).map(|(a, b)| a + r * b).collect();
            let feasible = self
                .normals
                .iter()
                .zip(self.base.iter().zip(&self.drop))
                .all(|(a, (&b, &w))| dot(a, &v) <= b - r * w + self.tol);
            if feasible {
                pts.push(v);
            }
        }
        hull::volume_of_points(&pts, self.dim, hull::EPS)
    }

    /// Radii in `(0, support_radius)` where the vertex set of the intersection
    /// can change. Between consecutive breakpoints `eval` is a polynomial of
    /// degree at most `dim`: every candidate vertex moves affinely in `r` and
    /// its feasibility margins are affine in `r`, so kinks can only occur at
    /// margin roots.
    pub fn breakpoints(&self) -> Vec<f64> {
        let s = self.support;
        if s <= 0.0 {
            return Vec::new();
        }
        let lo = 1e-9 * s;
        let hi = s * (1.0 - 1e-9);
        let mut roots = Vec::new();
        for (x0, x1) in &self.lines {
            for (a, (&b, &w)) in self.normals.iter().zip(self.base.iter().zip(&self.drop)) {
                let num = b - dot(a, x0);
                let den = w + dot(a, x1);
                if den.abs() > 1e-14 {
                    let r = num / den;
                    if r > lo && r < hi {
                        roots.push(r);
                    }
                }
            }
        }
        roots.sort_by(|a, b| a.total_cmp(b));
        // Cluster near-duplicates; distinct kinks this close are integrated as one.
        let mut out: Vec<f64> = Vec::new();
        for r in roots {
            match out.last() {
                Some(&last) if r - last <= 1e-9 * s => {}
                _ => out.push(r),
            }
        }
        out
    }
}

/// Radial function of the m-th difference body `D^m K` at `theta`: the largest
/// `r` such that `K ∩ ⋂_i (r θ_i + K)` is nonempty, found by maximizing `r`
/// over witness points `y`.
pub fn diff_body_radial(p: &Polytope, theta: &DirectionTuple) -> Result<f64, BodyError> {
    check_tuple(p, theta)?;
    let n = p.dim();
    let mut rows = Vec::with_capacity(p.facets().len() + 1);
    let mut rhs = Vec::with_capacity(p.facets().len() + 1);
    for f in p.facets() {
        let w = theta
            .blocks()
            .map(|t| -dot(&f.normal, t))
            .fold(0.0f64, f64::max);
        let mut row = f.normal.clone();
        row.push(w);
        rows.push(row);
        rhs.push(f.offset);
    }
    let mut nonneg = vec![0.0; n + 1];
    nonneg[n] = -1.0;
    rows.push(nonneg);
    rhs.push(0.0);
    let mut objective = vec![0.0; n + 1];
    objective[n] = 1.0;
    match lp::solve_lp_max(&objective, &rows, &rhs) {
        Ok(LpOutcome::Optimal { value, .. }) => Ok(value.max(0.0)),
        _ => Err(BodyError::Program {
            context: "difference-body radial",
        }),
    }
}

/// Star-body oracle for `D^m K ⊂ R^{nm}`.
pub fn diff_body_oracle(p: &Polytope, m: usize) -> Result<StarBodyOracle, BodyError> {
    if m == 0 {
        return Err(BodyError::Dimension { expected: 1, got: 0 });
    }
    let n = p.dim();
    // For a unit tuple max_i |θ_i| >= 1/sqrt(m), and each witness shift is a
    // chord of K, so the radial never exceeds 2 R sqrt(m).
    let bound = 2.0 * p.bounding_radius() * (m as f64).sqrt();
    let body = p.clone();
    Ok(StarBodyOracle::new(n * m, bound, move |u: &[f64]| {
        match DirectionTuple::new(n, m, u.to_vec()) {
            Ok(theta) => diff_body_radial(&body, &theta).unwrap_or(f64::NAN),
            Err(_) => f64::NAN,
        }
    }))
}

/// Monte Carlo volume of `D^m K`.
pub fn diff_body_volume(
    p: &Polytope,
    m: usize,
    samples: u64,
    seed: u64,
) -> Result<MCEstimate, BodyError> {
    let oracle = diff_body_oracle(p, m)?;
    Ok(star_body_volume(&oracle, samples, seed)?)
}

/// `-(d/dr) g(r θ̄)` at `r = 0+` from one-sided differences at steps
/// `h, h/2, h/4` with two Richardson sweeps.  Covariogram evaluations are
/// exact, so the remaining error is `O(h^3)`.
pub fn neg_derivative_at_zero(ray: &CovariogramRay, h: f64) -> f64 {
    let g0 = ray.volume();
    let d = |h: f64| (g0 - ray.eval(h)) / h;
    let d1 = d(h);
    let d2 = d(0.5 * h);
    let d3 = d(0.25 * h);
    let r1 = 2.0 * d2 - d1;
    let r2 = 2.0 * d3 - d2;
    (4.0 * r2 - r1) / 3.0
}
