//! Steiner symmetrization: the classical chordwise symmetral of a polytope
//! about a hyperplane through the origin, and the fibre symmetral that
//! recenters block slices of a convex body in `R^{nm}` by half their
//! difference body.
//!
//! Symmetrals are kept as oracles (membership, radial) rather than vertex
//! polytopes: exact fibre combinations explode combinatorially, and every
//! consumer here needs only membership tests, radial bisection, or Monte
//! Carlo volume.  The classical symmetral of a polygon is additionally
//! polytopalized exactly; in `R^3` an inner vertex hull with a quantified
//! volume gap stands in for it.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bodies::{Body, BodyError, Polytope};
use crate::projection::ProjectionBody;
use crate::quadrature::{par_block_sums, MCEstimate, QuadratureError, SphereSampler};
use crate::vecmat::{dot, norm, scaled, sub, Matrix};

/// Slack for chord emptiness and classical membership, relative to body scale.
const CHORD_TOL: f64 = 1e-9;
/// Gauge values within this of 1 count as members on the oracle path.
const MEMBER_SLACK: f64 = 1e-7;
/// Golden-section interval shrink target, relative to the initial width.
const GOLDEN_SHRINK: f64 = 1e-6;
/// Iteration cap per golden-section line search; convex objectives converge
/// in ~30, so hitting the cap means the objective returned garbage.
const GOLDEN_MAX: usize = 1000;
/// Coefficients below this (after row normalization) count as zero.
const ZERO_COEF: f64 = 1e-12;
/// Feasibility slack after row normalization.
const FEAS_TOL: f64 = 1e-9;
/// Row cap for Fourier-Motzkin elimination.
const FM_ROW_BUDGET: usize = 250_000;
/// Radial bisection iterations.
const BISECT_ITERS: usize = 80;

fn unit_direction(dim: usize, xi: &[f64]) -> Result<Vec<f64>, BodyError> {
    if xi.len() != dim {
        return Err(BodyError::Dimension {
            expected: dim,
            got: xi.len(),
        });
    }
    let n = norm(xi);
    if !n.is_finite() || n <= 1e-12 {
        return Err(BodyError::Program {
            context: "symmetrization direction must be a nonzero vector",
        });
    }
    Ok(scaled(xi, 1.0 / n))
}

/// Classical Steiner symmetral `S_xi P` of a polytope: every chord of `P`
/// parallel to `xi` is recentered onto the hyperplane through the origin
/// orthogonal to `xi`.
pub struct SteinerSymmetral {
    poly: Polytope,
    xi: Vec<f64>,
    scale: f64,
}

impl SteinerSymmetral {
    pub fn new(p: &Polytope, xi: &[f64]) -> Result<Self, BodyError> {
        let xi = unit_direction(p.dim(), xi)?;
        let scale = 1.0 + p.bounding_radius();
        Ok(SteinerSymmetral {
            poly: p.clone(),
            xi,
            scale,
        })
    }

    pub fn dim(&self) -> usize {
        self.poly.dim()
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    /// Parameter interval of the chord `{t : base + t xi in P}`, or `None`
    /// when the line misses `P`.  Each facet row is a one-variable bound.
    pub fn chord(&self, base: &[f64]) -> Option<(f64, f64)> {
        let tol = CHORD_TOL * self.scale;
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for f in self.poly.facets() {
            let c = dot(&f.normal, &self.xi);
            let rhs = f.offset - dot(&f.normal, base);
            if c > ZERO_COEF {
                hi = hi.min(rhs / c);
            } else if c < -ZERO_COEF {
                lo = lo.max(rhs / c);
            } else if rhs < -tol {
                return None;
            }
        }
        if lo <= hi + tol {
            Some((lo, hi))
        } else {
            None
        }
    }

    /// Membership in the symmetral: `z = x + t xi` with `x` in the mirror
    /// hyperplane belongs iff `2|t|` is at most the chord length at `x`.
    pub fn member(&self, z: &[f64]) -> bool {
        if z.len() != self.poly.dim() {
            return false;
        }
        let t = dot(z, &self.xi);
        let x = sub(z, &scaled(&self.xi, t));
        match self.chord(&x) {
            Some((lo, hi)) => 2.0 * t.abs() <= (hi - lo).max(0.0) + CHORD_TOL * self.scale,
            None => false,
        }
    }

    /// Chords are rearranged, never created or destroyed, so the volume is
    /// the polytope's own volume exactly.
    pub fn volume(&self) -> f64 {
        self.poly.volume()
    }

    /// A vertex polytope for the symmetral.  In the plane the chord-length
    /// profile is piecewise linear with breakpoints only at projected
    /// vertices, so the hull is exact.  In `R^3` projected vertices and
    /// convex combinations of their pairs give an inner hull; compare its
    /// volume with `volume()` for the gap.
    pub fn polytopalize(&self) -> Result<Polytope, BodyError> {
        let n = self.poly.dim();
        let mut bases: Vec<Vec<f64>> = Vec::new();
        let project = |v: &[f64]| -> Vec<f64> { sub(v, &scaled(&self.xi, dot(v, &self.xi))) };
        match n {
            2 => {
                for v in self.poly.vertices() {
                    bases.push(project(v));
                }
            }
            3 => {
                let shadows: Vec<Vec<f64>> =
                    self.poly.vertices().iter().map(|v| project(v)).collect();
                bases.extend(shadows.iter().cloned());
                for i in 0..shadows.len() {
                    for j in (i + 1)..shadows.len() {
                        for lambda in [0.25, 0.5, 0.75] {
                            let p: Vec<f64> = shadows[i]
                                .iter()
                                .zip(&shadows[j])
                                .map(|(a, b)| lambda * a + (1.0 - lambda) * b)
                                .collect();
                            bases.push(p);
                        }
                    }
                }
            }
            d => return Err(BodyError::UnsupportedDimension(d)),
        }
        let mut pts = Vec::with_capacity(2 * bases.len());
        for x in bases {
            if let Some((lo, hi)) = self.chord(&x) {
                let half = 0.5 * (hi - lo).max(0.0);
                pts.push(
                    x.iter()
                        .zip(&self.xi)
                        .map(|(a, b)| a + half * b)
                        .collect::<Vec<f64>>(),
                );
                pts.push(
                    x.iter()
                        .zip(&self.xi)
                        .map(|(a, b)| a - half * b)
                        .collect::<Vec<f64>>(),
                );
            }
        }
        Polytope::from_vertices(n, &pts)
    }
}

/// Source body `L` in `R^{nm}` for the fibre symmetral.
#[derive(Clone)]
pub enum FibreSource {
    /// Halfspace rows `<a, z> <= b`, plus a Euclidean radius bound for `L`.
    Halfspaces {
        rows: Vec<(Vec<f64>, f64)>,
        bound: f64,
    },
    /// Convex gauge: `z` belongs to `L` iff `gauge(z) <= 1`; `bound` again
    /// dominates the Euclidean radius of `L`.
    Gauge {
        gauge: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
        bound: f64,
    },
}

impl FibreSource {
    /// The cube `[-half, half]^dim`.
    pub fn cube(dim: usize, half: f64) -> Self {
        let mut rows = Vec::with_capacity(2 * dim);
        for k in 0..dim {
            for s in [1.0, -1.0] {
                let mut a = vec![0.0; dim];
                a[k] = s;
                rows.push((a, half));
            }
        }
        FibreSource::Halfspaces {
            rows,
            bound: half * (dim as f64).sqrt(),
        }
    }

    /// A polytope used verbatim as the source body (its own ambient
    /// dimension must equal `n*m` of the symmetral).
    pub fn polytope(p: &Polytope) -> Self {
        let rows = p
            .facets()
            .iter()
            .map(|f| (f.normal.clone(), f.offset))
            .collect();
        let bound = p
            .vertices()
            .iter()
            .map(|v| norm(v))
            .fold(0.0f64, f64::max);
        FibreSource::Halfspaces { rows, bound }
    }

    /// The image `T L`.  Rows transform by the inverse transpose; gauges
    /// compose with the inverse.  The radius bound inflates by `|T|_F`.
    pub fn mapped(&self, t: &Matrix) -> Result<FibreSource, BodyError> {
        let inv = t.inverse().map_err(|_| BodyError::SingularMap { det: t.det() })?;
        let grow = t.frobenius_norm();
        Ok(match self {
            FibreSource::Halfspaces { rows, bound } => FibreSource::Halfspaces {
                rows: rows
                    .iter()
                    .map(|(a, b)| (inv.tr_mul_vec(a), *b))
                    .collect(),
                bound: bound * grow,
            },
            FibreSource::Gauge { gauge, bound } => {
                let g = Arc::clone(gauge);
                FibreSource::Gauge {
                    gauge: Arc::new(move |z: &[f64]| g(&inv.mul_vec(z))),
                    bound: bound * grow,
                }
            }
        })
    }

    pub fn bound(&self) -> f64 {
        match self {
            FibreSource::Halfspaces { bound, .. } => *bound,
            FibreSource::Gauge { bound, .. } => *bound,
        }
    }

    /// Membership in the source body itself.
    pub fn member(&self, z: &[f64]) -> bool {
        match self {
            FibreSource::Halfspaces { rows, .. } => rows.iter().all(|(a, b)| {
                let s = 1.0f64.max(b.abs()).max(a.iter().fold(0.0f64, |m, x| m.max(x.abs())));
                dot(a, z) <= b + FEAS_TOL * s
            }),
            FibreSource::Gauge { gauge, .. } => gauge(z) <= 1.0 + MEMBER_SLACK,
        }
    }
}

/// Fibre symmetral of a convex `L` in `R^{nm}`: over each base point of the
/// hyperplane power `V^m` (`V` the mirror hyperplane of `xi`), the slice of
/// `L` parallel to the `xi`-blocks is replaced by half its difference body,
/// centered on the base.
pub struct FibreSymmetral {
    n: usize,
    m: usize,
    xi: Vec<f64>,
    source: FibreSource,
}

impl FibreSymmetral {
    pub fn new(n: usize, m: usize, xi: &[f64], source: FibreSource) -> Result<Self, BodyError> {
        if n == 0 || m == 0 {
            return Err(BodyError::UnsupportedDimension(0));
        }
        let xi = unit_direction(n, xi)?;
        if let FibreSource::Halfspaces { rows, .. } = &source {
            for (a, _) in rows {
                if a.len() != n * m {
                    return Err(BodyError::Dimension {
                        expected: n * m,
                        got: a.len(),
                    });
                }
            }
        }
        Ok(FibreSymmetral { n, m, xi, source })
    }

    pub fn dim(&self) -> usize {
        self.n * self.m
    }

    /// Blockwise split of `z` into mirror components and `xi`-coordinates.
    fn decompose(&self, z: &[f64]) -> (Vec<Vec<f64>>, Vec<f64>) {
        let mut xs = Vec::with_capacity(self.m);
        let mut rs = Vec::with_capacity(self.m);
        for i in 0..self.m {
            let zi = &z[i * self.n..(i + 1) * self.n];
            let r = dot(zi, &self.xi);
            xs.push(sub(zi, &scaled(&self.xi, r)));
            rs.push(r);
        }
        (xs, rs)
    }

    /// Decides whether shifts `t_1..t_m` exist with both blockwise lifts
    /// `(x_i + t_i xi)_i` and `(x_i + (t_i - 2 r_i) xi)_i` inside `L`.
    pub fn member(&self, z: &[f64]) -> Result<bool, BodyError> {
        if z.len() != self.dim() {
            return Err(BodyError::Dimension {
                expected: self.dim(),
                got: z.len(),
            });
        }
        let (xs, rs) = self.decompose(z);
        match &self.source {
            FibreSource::Halfspaces { rows, .. } => {
                let mut feas = Vec::with_capacity(rows.len());
                for (a, b) in rows {
                    let mut c = vec![0.0; self.m];
                    let mut ax = 0.0;
                    let mut cr = 0.0;
                    for i in 0..self.m {
                        let ai = &a[i * self.n..(i + 1) * self.n];
                        c[i] = dot(ai, &self.xi);
                        ax += dot(ai, &xs[i]);
                        cr += c[i] * rs[i];
                    }
                    // Both lift systems share the coefficient row, so the
                    // tighter right-hand side carries all the information.
                    let d1 = b - ax;
                    let d2 = d1 + 2.0 * cr;
                    feas.push((c, d1.min(d2)));
                }
                fm_feasible(feas)
            }
            FibreSource::Gauge { gauge, bound } => {
                let mut ivs = Vec::with_capacity(self.m);
                for i in 0..self.m {
                    let w2 = bound * bound - dot(&xs[i], &xs[i]);
                    if w2 <= 0.0 {
                        return Ok(false);
                    }
                    let w = w2.sqrt();
                    let lo = (-w).max(2.0 * rs[i] - w);
                    let hi = w.min(2.0 * rs[i] + w);
                    if lo > hi {
                        return Ok(false);
                    }
                    ivs.push((lo, hi));
                }
                let objective = |t: &[f64]| -> f64 {
                    let mut zt = Vec::with_capacity(self.dim());
                    let mut zs = Vec::with_capacity(self.dim());
                    for i in 0..self.m {
                        for k in 0..self.n {
                            zt.push(xs[i][k] + t[i] * self.xi[k]);
                            zs.push(xs[i][k] + (t[i] - 2.0 * rs[i]) * self.xi[k]);
                        }
                    }
                    gauge(&zt).max(gauge(&zs))
                };
                let mut t = vec![0.0; self.m];
                let best = nested_min(&objective, &ivs, 0, &mut t)?;
                Ok(best <= 1.0 + MEMBER_SLACK)
            }
        }
    }

    /// Radial function along `theta` by bisection over membership; the
    /// origin must be interior (it is for symmetrals of bodies with the
    /// origin interior).
    pub fn radial(&self, theta: &[f64]) -> Result<f64, BodyError> {
        let len = norm(theta);
        if len <= 1e-12 || theta.len() != self.dim() {
            return Err(BodyError::Dimension {
                expected: self.dim(),
                got: theta.len(),
            });
        }
        let u = scaled(theta, 1.0 / len);
        if !self.member(&vec![0.0; self.dim()])? {
            return Err(BodyError::Program {
                context: "fibre radial needs the origin inside the symmetral",
            });
        }
        // Mirror components stay inside L's radius and fibre components are
        // half-differences of xi-coordinates, so sqrt(2) * bound dominates.
        let mut hi = self.source.bound() * 2.0f64.sqrt() * 1.000001 + 1e-12;
        if self.member(&scaled(&u, hi))? {
            return Err(BodyError::Program {
                context: "fibre symmetral exceeds its radius bound",
            });
        }
        let mut lo = 0.0;
        for _ in 0..BISECT_ITERS {
            let mid = 0.5 * (lo + hi);
            if self.member(&scaled(&u, mid))? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Monte Carlo volume over the bounding box, pure in `(seed, index)`.
    pub fn volume(&self, count: u64, seed: u64) -> Result<MCEstimate, BodyError> {
        if count == 0 {
            return Err(BodyError::Quadrature(QuadratureError::NoSamples));
        }
        let d = self.dim();
        let half = self.source.bound() * 2.0f64.sqrt();
        let boxvol = (2.0 * half).powi(d as i32);
        let (sum, _) = par_block_sums(count, |i| {
            let mut key = [0u8; 32];
            key[..8].copy_from_slice(&seed.to_le_bytes());
            key[8..16].copy_from_slice(&i.to_le_bytes());
            // Domain tag keeps box streams disjoint from sphere streams.
            key[16..24].copy_from_slice(&0x51ed_270b_13b2_c1f5u64.to_le_bytes());
            let mut rng = ChaCha8Rng::from_seed(key);
            let z: Vec<f64> = (0..d)
                .map(|_| (2.0 * rng.gen::<f64>() - 1.0) * half)
                .collect();
            Ok::<f64, BodyError>(if self.member(&z)? { 1.0 } else { 0.0 })
        })?;
        let p = sum / count as f64;
        Ok(MCEstimate {
            value: boxvol * p,
            std_error: boxvol * (p * (1.0 - p) / count as f64).sqrt(),
            samples: count,
            seed,
        })
    }
}

/// Feasibility of `C t <= e` by Fourier-Motzkin elimination; rows are
/// normalized so the tolerances are scale-free.  Intended for up to three
/// variables and modest row counts.
fn fm_feasible(rows: Vec<(Vec<f64>, f64)>) -> Result<bool, BodyError> {
    fn normalize(rows: Vec<(Vec<f64>, f64)>) -> Result<Vec<(Vec<f64>, f64)>, bool> {
        let mut out = Vec::with_capacity(rows.len());
        for (c, e) in rows {
            let s = c
                .iter()
                .fold(e.abs(), |m, x| m.max(x.abs()));
            if s < 1e-300 {
                continue; // 0 <= 0, vacuous
            }
            let c: Vec<f64> = c.iter().map(|x| x / s).collect();
            let e = e / s;
            if c.iter().all(|x| x.abs() <= ZERO_COEF) {
                if e < -FEAS_TOL {
                    return Err(false); // 0 <= negative: infeasible
                }
                continue;
            }
            out.push((c, e));
        }
        Ok(out)
    }

    let mut rows = match normalize(rows) {
        Ok(r) => r,
        Err(f) => return Ok(f),
    };
    let mut vars = rows.first().map_or(0, |(c, _)| c.len());
    while vars > 1 {
        let mut zeros = Vec::new();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (c, e) in rows {
            let last = c[vars - 1];
            let head = c[..vars - 1].to_vec();
            if last > ZERO_COEF {
                let inv = 1.0 / last;
                pos.push((scaled(&head, inv), e * inv));
            } else if last < -ZERO_COEF {
                let inv = 1.0 / -last;
                neg.push((scaled(&head, inv), e * inv));
            } else {
                zeros.push((head, e));
            }
        }
        if zeros.len() + pos.len() * neg.len() > FM_ROW_BUDGET {
            return Err(BodyError::Program {
                context: "fourier-motzkin elimination over the row budget",
            });
        }
        let mut next = zeros;
        for (cp, ep) in &pos {
            for (cn, en) in &neg {
                let c: Vec<f64> = cp.iter().zip(cn).map(|(a, b)| a + b).collect();
                next.push((c, ep + en));
            }
        }
        rows = match normalize(next) {
            Ok(r) => r,
            Err(f) => return Ok(f),
        };
        vars -= 1;
    }
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for (c, e) in rows {
        let coef = c[0];
        if coef > ZERO_COEF {
            hi = hi.min(e / coef);
        } else if coef < -ZERO_COEF {
            lo = lo.max(e / coef);
        } else if e < -FEAS_TOL {
            return Ok(false);
        }
    }
    Ok(lo <= hi + FEAS_TOL)
}

/// Minimum of a convex objective over a box by nested golden-section: each
/// level line-searches one coordinate of the partial minimum, which is again
/// convex, so unimodal line searches stay valid.
fn nested_min<F>(
    f: &F,
    ivs: &[(f64, f64)],
    level: usize,
    t: &mut Vec<f64>,
) -> Result<f64, BodyError>
where
    F: Fn(&[f64]) -> f64,
{
    let (a, b) = ivs[level];
    let eval = |x: f64, t: &mut Vec<f64>| -> Result<f64, BodyError> {
        t[level] = x;
        let v = if level + 1 == ivs.len() {
            f(t)
        } else {
            nested_min(f, ivs, level + 1, t)?
        };
        if !v.is_finite() {
            return Err(BodyError::Precision {
                context: "fibre membership objective returned a non-finite value",
            });
        }
        Ok(v)
    };
    let width = b - a;
    if width <= 0.0 {
        return eval(a, t);
    }
    let inv_phi = 0.618_033_988_749_894_9;
    let mut lo = a;
    let mut hi = b;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = eval(x1, t)?;
    let mut f2 = eval(x2, t)?;
    let mut best = f1.min(f2);
    let mut iters = 0usize;
    while hi - lo > GOLDEN_SHRINK * width {
        iters += 1;
        if iters > GOLDEN_MAX {
            return Err(BodyError::Precision {
                context: "fibre membership line search failed to converge",
            });
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = eval(x1, t)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = eval(x2, t)?;
        }
        best = best.min(f1).min(f2);
    }
    Ok(best)
}

/// Fibre symmetral of the polar projection body of `k`, as a gauge oracle:
/// the gauge of the polar body is the support function of the primal.
pub fn polar_projection_fibre(
    k: &Body,
    m: usize,
    xi: &[f64],
) -> Result<FibreSymmetral, BodyError> {
    let n = k.dim();
    let proj = ProjectionBody::new(k, m)?;
    let bound = 1.0 / proj.min_support();
    let gauge = Arc::new(move |z: &[f64]| proj.support_flat(z));
    FibreSymmetral::new(n, m, xi, FibreSource::Gauge { gauge, bound })
}

/// One direction of the inclusion check: the fibre symmetral of the polar
/// projection body against the polar projection body of the symmetral.
#[derive(Clone, Debug)]
pub struct InclusionRow {
    pub direction: Vec<f64>,
    /// Radial of the symmetrized polar projection body.
    pub left: f64,
    /// Radial of the polar projection body of the symmetrized polytope.
    pub right: f64,
}

impl InclusionRow {
    /// Relative slack of `left <= right`; negative means violation.
    pub fn margin(&self) -> f64 {
        (self.right - self.left) / self.right
    }
}

#[derive(Clone, Debug)]
pub struct InclusionReport {
    pub rows: Vec<InclusionRow>,
    /// Relative volume lost by polytopalizing the classical symmetral
    /// (zero in the plane, where the hull is exact).
    pub hull_gap: f64,
}

impl InclusionReport {
    pub fn min_margin(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.margin())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Checks the symmetrized polar projection body of `k` against the polar
/// projection body of the symmetrized `k` on `count` seeded directions:
/// containment means every row has `left <= right`.
pub fn steiner_inclusion_check(
    k: &Polytope,
    m: usize,
    xi: &[f64],
    count: u64,
    seed: u64,
) -> Result<InclusionReport, BodyError> {
    let body = Body::Polytope(k.clone());
    let fibre = polar_projection_fibre(&body, m, xi)?;
    let classical = SteinerSymmetral::new(k, xi)?;
    let sym_poly = classical.polytopalize()?;
    let hull_gap = 1.0 - sym_poly.volume() / classical.volume();
    let sym_proj = ProjectionBody::new(&Body::Polytope(sym_poly), m)?;
    let d = fibre.dim();
    let sampler = SphereSampler::new(d, seed)?;
    let rows: Result<Vec<InclusionRow>, BodyError> = (0..count)
        .into_par_iter()
        .map(|i| {
            let theta = sampler.direction(i);
            let left = fibre.radial(&theta)?;
            let right = 1.0 / sym_proj.support_flat(&theta);
            Ok(InclusionRow {
                direction: theta,
                left,
                right,
            })
        })
        .collect();
    Ok(InclusionReport {
        rows: rows?,
        hull_gap,
    })
}

/// Convenience: the classical symmetral of `k` as a polytope.
pub fn symmetrized_polytope(k: &Polytope, xi: &[f64]) -> Result<Polytope, BodyError> {
    SteinerSymmetral::new(k, xi)?.polytopalize()
}
