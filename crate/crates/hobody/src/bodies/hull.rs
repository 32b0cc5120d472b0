//! Exact convex hull facet data in dimension at most four.
//!
//! Facets are found by supporting-hyperplane enumeration: every affinely
//! independent `n`-subset of points spans a candidate hyperplane, kept when
//! all points lie on one side.  Coplanar supports merge into a single facet,
//! so degenerate configurations (cubes, products) need no special casing.
//! Cost is O(V^(n+1)), which is microseconds at catalog scale.

use crate::vecmat::{self, dot, norm, sub};

/// Geometric tolerance on coordinates of order one.
pub const EPS: f64 = 1e-9;

/// A facet of a full-dimensional polytope: outward unit normal `u`, offset
/// `b` with the facet on `{x : <u, x> = b}`, and its `(n-1)`-measure.
#[derive(Clone, Debug)]
pub struct Facet {
    pub normal: Vec<f64>,
    pub offset: f64,
    pub measure: f64,
    /// Indices of hull vertices lying on this facet.
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct HullData {
    /// Extreme points, deduplicated.
    pub vertices: Vec<Vec<f64>>,
    pub facets: Vec<Facet>,
}

/// Iterate over all `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k == 0 || k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        // Advance odometer.
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num: u128 = 1;
    for i in 0..k {
        num = num * (n - i) as u128 / (i + 1) as u128;
    }
    num
}

fn dedup_points(points: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(points.len());
    'outer: for p in points {
        for q in &out {
            if p.iter().zip(q).all(|(a, b)| (a - b).abs() <= tol) {
                continue 'outer;
            }
        }
        out.push(p.clone());
    }
    out
}

/// Affine dimension of a point set.
pub fn affine_dim(points: &[Vec<f64>], dim: usize, tol: f64) -> usize {
    if points.is_empty() {
        return 0;
    }
    let diffs: Vec<Vec<f64>> = points[1..].iter().map(|p| sub(p, &points[0])).collect();
    vecmat::orthonormal_span(&diffs, dim, tol).len()
}

/// Convex hull of full-dimensional point sets in `R^dim`, `1 <= dim <= 4`.
///
/// Returns `Err(found_affine_dim)` when the points are not full-dimensional.
pub fn convex_hull(points: &[Vec<f64>], dim: usize) -> Result<HullData, usize> {
    assert!((1..=12).contains(&dim), "hull dimension out of range");
    let scale = points
        .iter()
        .flat_map(|p| p.iter().map(|x| x.abs()))
        .fold(1.0f64, f64::max);
    let tol = EPS * scale;
    let pts = dedup_points(points, tol);
    let found = affine_dim(&pts, dim, tol);
    if found < dim {
        return Err(found);
    }
    if dim == 1 {
        return Ok(hull_1d(&pts));
    }

    // Enumerate supporting hyperplanes.
    let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
    for_each_combination(pts.len(), dim, |subset| {
        let base = &pts[subset[0]];
        let diffs: Vec<Vec<f64>> = subset[1..].iter().map(|&i| sub(&pts[i], base)).collect();
        if vecmat::orthonormal_span(&diffs, dim, tol).len() != dim - 1 {
            return;
        }
        let Some(mut normal) = vecmat::unit_normal_to_span(&diffs, dim, tol) else {
            return;
        };
        let mut offset = dot(&normal, base);
        let mut above = false;
        let mut below = false;
        for p in &pts {
            let d = dot(&normal, p) - offset;
            if d > tol {
                above = true;
            } else if d < -tol {
                below = true;
            }
            if above && below {
                return;
            }
        }
        if above {
            // Flip so all points satisfy <u, x> <= b.
            normal = vecmat::scaled(&normal, -1.0);
            offset = -offset;
        }
        let dup = planes.iter().any(|(n, b)| {
            dot(n, &normal) > 1.0 - 1e-7 && (b - offset).abs() <= 10.0 * tol
        });
        if !dup {
            planes.push((normal, offset));
        }
    });

    // Incidence, facet measures, and extreme points.
    let mut facets: Vec<Facet> = Vec::with_capacity(planes.len());
    let mut incident_normals: Vec<Vec<usize>> = vec![Vec::new(); pts.len()];
    for (fi, (normal, offset)) in planes.iter().enumerate() {
        let on: Vec<usize> = (0..pts.len())
            .filter(|&k| (dot(normal, &pts[k]) - offset).abs() <= 10.0 * tol)
            .collect();
        for &k in &on {
            incident_normals[k].push(fi);
        }
        let face_pts: Vec<Vec<f64>> = on.iter().map(|&k| pts[k].clone()).collect();
        let measure = face_measure(&face_pts, normal, dim, tol);
        facets.push(Facet {
            normal: normal.clone(),
            offset: *offset,
            measure,
            vertices: on,
        });
    }

    let mut is_vertex = vec![false; pts.len()];
    for (k, fids) in incident_normals.iter().enumerate() {
        let normals: Vec<Vec<f64>> = fids.iter().map(|&fi| facets[fi].normal.clone()).collect();
        if vecmat::orthonormal_span(&normals, dim, 1e-7).len() == dim {
            is_vertex[k] = true;
        }
    }
    let mut remap = vec![usize::MAX; pts.len()];
    let mut vertices = Vec::new();
    for (k, p) in pts.iter().enumerate() {
        if is_vertex[k] {
            remap[k] = vertices.len();
            vertices.push(p.clone());
        }
    }
    for f in &mut facets {
        f.vertices = f
            .vertices
            .iter()
            .filter(|&&k| is_vertex[k])
            .map(|&k| remap[k])
            .collect();
        f.vertices.sort_unstable();
    }
    facets.retain(|f| f.measure > tol.powi(dim as i32 - 1).max(1e-30) && f.vertices.len() >= dim);

    Ok(HullData { vertices, facets })
}

fn hull_1d(pts: &[Vec<f64>]) -> HullData {
    let lo = pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
    let hi = pts.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
    HullData {
        vertices: vec![vec![lo], vec![hi]],
        facets: vec![
            Facet {
                normal: vec![-1.0],
                offset: -lo,
                measure: 1.0,
                vertices: vec![0],
            },
            Facet {
                normal: vec![1.0],
                offset: hi,
                measure: 1.0,
                vertices: vec![1],
            },
        ],
    }
}

/// `(dim-1)`-measure of the convex hull of `face_pts` lying on a hyperplane
/// with the given normal.
fn face_measure(face_pts: &[Vec<f64>], normal: &[f64], dim: usize, tol: f64) -> f64 {
    if face_pts.len() < dim {
        return 0.0;
    }
    if dim == 1 {
        return 1.0; // A facet of an interval is a point; counting measure.
    }
    let basis = hyperplane_basis(normal, dim);
    let base = &face_pts[0];
    let coords: Vec<Vec<f64>> = face_pts
        .iter()
        .map(|p| {
            let d = sub(p, base);
            basis.iter().map(|b| dot(b, &d)).collect()
        })
        .collect();
    volume_of_points(&coords, dim - 1, tol)
}

/// Orthonormal basis of the hyperplane orthogonal to `normal`.
pub fn hyperplane_basis(normal: &[f64], dim: usize) -> Vec<Vec<f64>> {
    let mut candidates = Vec::with_capacity(dim + 1);
    candidates.push(normal.to_vec());
    for j in 0..dim {
        let mut e = vec![0.0; dim];
        e[j] = 1.0;
        candidates.push(e);
    }
    let full = vecmat::orthonormal_span(&candidates, dim, 1e-12);
    full[1..].to_vec()
}

/// Volume of the convex hull of a point set; 0 for degenerate sets.
pub fn volume_of_points(points: &[Vec<f64>], dim: usize, tol: f64) -> f64 {
    match dim {
        0 => 1.0,
        1 => {
            let lo = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
            let hi = points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
            (hi - lo).max(0.0)
        }
        2 => {
            let hull = planar_hull(points);
            polygon_area(&hull)
        }
        _ => {
            if affine_dim(points, dim, tol) < dim {
                return 0.0;
            }
            match convex_hull(points, dim) {
                Ok(h) => hull_volume(&h, dim),
                Err(_) => 0.0,
            }
        }
    }
}

/// Exact volume from facet data: `(1/n) sum_F dist(c, H_F) * a_F`.
pub fn hull_volume(hull: &HullData, dim: usize) -> f64 {
    let nv = hull.vertices.len() as f64;
    let mut c = vec![0.0; dim];
    for v in &hull.vertices {
        vecmat::axpy(&mut c, 1.0 / nv, v);
    }
    let mut vol = 0.0;
    for f in &hull.facets {
        vol += (f.offset - dot(&f.normal, &c)) * f.measure;
    }
    vol / dim as f64
}

/// Convex hull of planar points, counter-clockwise, via monotone chain.
pub fn planar_hull(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut pts: Vec<(f64, f64)> = points.iter().map(|p| (p[0], p[1])).collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12);
    if pts.len() < 3 {
        return pts.iter().map(|&(x, y)| vec![x, y]).collect();
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut lower: Vec<(f64, f64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(f64, f64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower.iter().map(|&(x, y)| vec![x, y]).collect()
}

/// Area of a counter-clockwise simple polygon.
pub fn polygon_area(hull: &[Vec<f64>]) -> f64 {
    if hull.len() < 3 {
        return 0.0;
    }
    let mut s = 0.0;
    for i in 0..hull.len() {
        let j = (i + 1) % hull.len();
        s += hull[i][0] * hull[j][1] - hull[j][0] * hull[i][1];
    }
    s.abs() / 2.0
}

pub fn polygon_perimeter(hull: &[Vec<f64>]) -> f64 {
    if hull.len() < 2 {
        return 0.0;
    }
    let mut s = 0.0;
    for i in 0..hull.len() {
        let j = (i + 1) % hull.len();
        s += norm(&sub(&hull[j], &hull[i]));
    }
    if hull.len() == 2 {
        s / 2.0 // The closing edge double-counts a segment.
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_enumerate_all_subsets() {
        let mut seen = Vec::new();
        for_each_combination(4, 2, |s| seen.push(s.to_vec()));
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[0], vec![0, 1]);
        assert_eq!(seen[5], vec![2, 3]);
        assert_eq!(binomial(64, 2), 2016);
        assert_eq!(binomial(16, 4), 1820);
    }

    #[test]
    fn unit_square_hull_has_expected_facets() {
        let pts = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
            vec![0.5, 0.5], // interior point must be dropped
        ];
        let h = convex_hull(&pts, 2).unwrap();
        assert_eq!(h.vertices.len(), 4);
        assert_eq!(h.facets.len(), 4);
        for f in &h.facets {
            assert!((f.measure - 1.0).abs() < 1e-9);
            let ax = f.normal[0].abs().max(f.normal[1].abs());
            assert!((ax - 1.0).abs() < 1e-9, "axis normal expected");
        }
        assert!((hull_volume(&h, 2) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn triangle_facets_close_up() {
        // conv{o, e1, e2}: two legs of measure 1 and hypotenuse sqrt(2).
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        let h = convex_hull(&pts, 2).unwrap();
        assert_eq!(h.facets.len(), 3);
        let mut measures: Vec<f64> = h.facets.iter().map(|f| f.measure).collect();
        measures.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((measures[0] - 1.0).abs() < 1e-9);
        assert!((measures[1] - 1.0).abs() < 1e-9);
        assert!((measures[2] - 2f64.sqrt()).abs() < 1e-9);
        // Surface-area-measure closedness: sum a_F u_F = 0.
        let mut s = vec![0.0, 0.0];
        for f in &h.facets {
            crate::vecmat::axpy(&mut s, f.measure, &f.normal);
        }
        assert!(norm(&s) < 1e-9);
    }

    #[test]
    fn cube_hulls_in_three_and_four_dimensions() {
        for dim in [3usize, 4] {
            let mut pts = Vec::new();
            for mask in 0..(1u32 << dim) {
                pts.push((0..dim).map(|j| ((mask >> j) & 1) as f64).collect());
            }
            let h = convex_hull(&pts, dim).unwrap();
            assert_eq!(h.vertices.len(), 1 << dim);
            assert_eq!(h.facets.len(), 2 * dim);
            for f in &h.facets {
                assert!((f.measure - 1.0).abs() < 1e-8, "facet measure {}", f.measure);
                assert_eq!(f.vertices.len(), 1 << (dim - 1));
            }
            assert!((hull_volume(&h, dim) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn simplex_hull_in_4d() {
        let mut pts = vec![vec![0.0; 4]];
        for j in 0..4 {
            let mut e = vec![0.0; 4];
            e[j] = 1.0;
            pts.push(e);
        }
        let h = convex_hull(&pts, 4).unwrap();
        assert_eq!(h.vertices.len(), 5);
        assert_eq!(h.facets.len(), 5);
        assert!((hull_volume(&h, 4) - 1.0 / 24.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_input_reports_affine_dim() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]];
        assert_eq!(convex_hull(&pts, 2).err(), Some(1));
        let pts1 = vec![vec![3.0, 3.0]];
        assert_eq!(convex_hull(&pts1, 2).err(), Some(0));
    }

    #[test]
    fn cross_polytope_volume_3d() {
        let mut pts = Vec::new();
        for j in 0..3 {
            for s in [-1.0, 1.0] {
                let mut e = vec![0.0; 3];
                e[j] = s;
                pts.push(e);
            }
        }
        let h = convex_hull(&pts, 3).unwrap();
        assert_eq!(h.facets.len(), 8);
        assert!((hull_volume(&h, 3) - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn planar_hull_orders_and_measures() {
        let pts = vec![
            vec![0.0, 0.0],
            vec![2.0, 0.0],
            vec![2.0, 1.0],
            vec![0.0, 1.0],
            vec![1.0, 0.5],
            vec![1.0, 0.0], // collinear on an edge
        ];
        let h = planar_hull(&pts);
        assert_eq!(h.len(), 4);
        assert!((polygon_area(&h) - 2.0).abs() < 1e-12);
        assert!((polygon_perimeter(&h) - 6.0).abs() < 1e-12);
    }
}
