//! Dense linear algebra sized for geometry in dimension at most a dozen.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinAlgError {
    #[error("matrix is singular to working precision (|pivot| = {pivot:.3e})")]
    Singular { pivot: f64 },
    #[error("shape mismatch: {0}")]
    Shape(String),
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scaled(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// `a += s * b` in place.
pub fn axpy(a: &mut [f64], s: f64, b: &[f64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += s * y;
    }
}

pub fn normalized(a: &[f64]) -> Option<Vec<f64>> {
    let n = norm(a);
    if n <= 0.0 || !n.is_finite() {
        None
    } else {
        Some(scaled(a, 1.0 / n))
    }
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix data length");
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::new(rows, cols, vec![0.0; rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Matrix::new(r, c, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Frobenius norm, an upper bound for the spectral norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|r| dot(self.row(r), v)).collect()
    }

    /// `A^T v`.
    pub fn tr_mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for r in 0..self.rows {
            axpy(&mut out, v[r], self.row(r));
        }
        out
    }

    pub fn mat_mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a != 0.0 {
                    for j in 0..other.cols {
                        out.data[i * out.cols + j] += a * other.get(k, j);
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    /// Determinant via LU with partial pivoting; square matrices only.
    pub fn det(&self) -> f64 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut lu = self.data.clone();
        let mut sign = 1.0;
        for col in 0..n {
            let mut piv = col;
            let mut best = lu[col * n + col].abs();
            for r in col + 1..n {
                let v = lu[r * n + col].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best == 0.0 {
                return 0.0;
            }
            if piv != col {
                for c in 0..n {
                    lu.swap(col * n + c, piv * n + c);
                }
                sign = -sign;
            }
            let d = lu[col * n + col];
            for r in col + 1..n {
                let f = lu[r * n + col] / d;
                if f != 0.0 {
                    for c in col..n {
                        lu[r * n + c] -= f * lu[col * n + c];
                    }
                }
            }
        }
        let mut det = sign;
        for i in 0..n {
            det *= lu[i * n + i];
        }
        det
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>, LinAlgError> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(rhs.len(), self.rows);
        let n = self.rows;
        let mut a = self.data.clone();
        let mut b = rhs.to_vec();
        for col in 0..n {
            let mut piv = col;
            let mut best = a[col * n + col].abs();
            for r in col + 1..n {
                let v = a[r * n + col].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best < 1e-13 {
                return Err(LinAlgError::Singular { pivot: best });
            }
            if piv != col {
                for c in 0..n {
                    a.swap(col * n + c, piv * n + c);
                }
                b.swap(col, piv);
            }
            let d = a[col * n + col];
            for r in col + 1..n {
                let f = a[r * n + col] / d;
                if f != 0.0 {
                    for c in col..n {
                        a[r * n + c] -= f * a[col * n + c];
                    }
                    b[r] -= f * b[col];
                }
            }
        }
        for col in (0..n).rev() {
            let mut v = b[col];
            for c in col + 1..n {
                v -= a[col * n + c] * b[c];
            }
            b[col] = v / a[col * n + col];
        }
        Ok(b)
    }

    pub fn inverse(&self) -> Result<Matrix, LinAlgError> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut out = Matrix::zeros(n, n);
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            let col = self.solve(&e)?;
            for i in 0..n {
                out.set(i, j, col[i]);
            }
        }
        Ok(out)
    }

    /// Block-diagonal lift acting copy-wise on `(R^n)^m` flattened block by block.
    pub fn block_lift(&self, m: usize) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut out = Matrix::zeros(n * m, n * m);
        for blk in 0..m {
            for r in 0..n {
                for c in 0..n {
                    out.set(blk * n + r, blk * n + c, self.get(r, c));
                }
            }
        }
        out
    }
}

/// Gram-Schmidt orthonormal basis of the span of `vectors` in `R^dim`.
pub fn orthonormal_span(vectors: &[Vec<f64>], dim: usize, tol: f64) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        debug_assert_eq!(v.len(), dim);
        let mut w = v.clone();
        for b in &basis {
            let p = dot(&w, b);
            axpy(&mut w, -p, b);
        }
        let n = norm(&w);
        if n > tol {
            basis.push(scaled(&w, 1.0 / n));
        }
        if basis.len() == dim {
            break;
        }
    }
    basis
}

/// Unit vector orthogonal to all `vectors`; `None` when they already span `R^dim`.
pub fn unit_normal_to_span(vectors: &[Vec<f64>], dim: usize, tol: f64) -> Option<Vec<f64>> {
    let basis = orthonormal_span(vectors, dim, tol);
    if basis.len() >= dim {
        return None;
    }
    // Start from the coordinate direction least represented in the span.
    let mut best = (0, f64::INFINITY);
    for j in 0..dim {
        let p: f64 = basis.iter().map(|b| b[j] * b[j]).sum();
        if p < best.1 {
            best = (j, p);
        }
    }
    let mut w = vec![0.0; dim];
    w[best.0] = 1.0;
    for b in &basis {
        let p = dot(&w, b);
        axpy(&mut w, -p, b);
    }
    normalized(&w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_and_det_agree_with_hand_values() {
        let m = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]);
        assert!((m.det() - 5.0).abs() < 1e-12);
        let x = m.solve(&[5.0, 10.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12);
        assert!((x[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::from_rows(&[
            vec![1.0, 2.0, 0.0],
            vec![0.0, 1.0, 4.0],
            vec![5.0, 6.0, 1.0],
        ]);
        let inv = m.inverse().unwrap();
        let id = m.mat_mul(&inv);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((id.get(i, j) - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn block_lift_acts_blockwise() {
        let t = Matrix::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]);
        let lift = t.block_lift(2);
        let v = lift.mul_vec(&[1.0, 0.0, 0.0, 2.0]);
        assert_eq!(v, vec![0.0, 1.0, -2.0, 0.0]);
    }

    #[test]
    fn normal_to_span_is_orthogonal_unit() {
        let vs = vec![vec![1.0, 1.0, 0.0], vec![0.0, 1.0, 1.0]];
        let n = unit_normal_to_span(&vs, 3, 1e-12).unwrap();
        assert!((norm(&n) - 1.0).abs() < 1e-12);
        for v in &vs {
            assert!(dot(&n, v).abs() < 1e-12);
        }
        assert!(unit_normal_to_span(
            &[vec![1.0, 0.0], vec![0.0, 1.0]],
            2,
            1e-12
        )
        .is_none());
    }

    #[test]
    fn singular_solve_reports_error() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert!(matches!(
            m.solve(&[1.0, 2.0]),
            Err(LinAlgError::Singular { .. })
        ));
    }
}
