//! Dense two-phase simplex for the small linear programs behind difference
//! bodies and symmetral membership tests.
//!
//! Problems are stated over free variables `x` with constraints
//! `rows[k] . x <= rhs[k]`; the solver splits each variable into a
//! positive/negative pair internally.  Bland's rule keeps the pivot sequence
//! finite even on degenerate tableaus.

use thiserror::Error;

const LP_EPS: f64 = 1e-9;
const FEAS_EPS: f64 = 1e-7;
const MAX_PIVOTS: usize = 50_000;

#[derive(Debug, Error)]
pub enum LpError {
    #[error("row {row} has length {got}, expected {expected}")]
    Shape {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("simplex hit the {0}-pivot safety cap")]
    IterationLimit(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { value: f64, point: Vec<f64> },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// Column count excluding the trailing rhs entry.
    cols: usize,
    /// `m x (cols + 1)` rows; the last entry of each row is the rhs.
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    /// Artificial columns occupy `art_from..cols`.
    art_from: usize,
}

impl Tableau {
    fn build(rows_in: &[Vec<f64>], rhs: &[f64], nvars: usize) -> Result<Self, LpError> {
        let m = rows_in.len();
        let split = 2 * nvars;
        let n_art = rhs.iter().filter(|&&b| b < 0.0).count();
        let cols = split + m + n_art;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut art = split + m;
        for (k, row) in rows_in.iter().enumerate() {
            if row.len() != nvars {
                return Err(LpError::Shape {
                    row: k,
                    got: row.len(),
                    expected: nvars,
                });
            }
            let sign = if rhs[k] < 0.0 { -1.0 } else { 1.0 };
            let mut r = vec![0.0; cols + 1];
            for (j, &a) in row.iter().enumerate() {
                r[2 * j] = sign * a;
                r[2 * j + 1] = -sign * a;
            }
            r[split + k] = sign;
            r[cols] = sign * rhs[k];
            if sign < 0.0 {
                r[art] = 1.0;
                basis.push(art);
                art += 1;
            } else {
                basis.push(split + k);
            }
            rows.push(r);
        }
        Ok(Tableau {
            cols,
            rows,
            basis,
            art_from: split + m,
        })
    }

    fn pivot(&mut self, pr: usize, pc: usize, cost: &mut [f64]) {
        let inv = 1.0 / self.rows[pr][pc];
        for v in self.rows[pr].iter_mut() {
            *v *= inv;
        }
        self.rows[pr][pc] = 1.0;
        let prow = self.rows[pr].clone();
        for (r, row) in self.rows.iter_mut().enumerate() {
            if r == pr {
                continue;
            }
            let f = row[pc];
            if f != 0.0 {
                for (v, &p) in row.iter_mut().zip(&prow) {
                    *v -= f * p;
                }
                row[pc] = 0.0;
            }
        }
        let f = cost[pc];
        if f != 0.0 {
            for (v, &p) in cost.iter_mut().zip(&prow) {
                *v -= f * p;
            }
            cost[pc] = 0.0;
        }
        self.basis[pr] = pc;
    }

    /// Minimize `cost . x`; returns `Ok(true)` at an optimum, `Ok(false)` when
    /// unbounded below.  `cost` has `cols + 1` entries and is reduced in place.
    fn simplex_min(&mut self, cost: &mut Vec<f64>) -> Result<bool, LpError> {
        for r in 0..self.rows.len() {
            let k = self.basis[r];
            let f = cost[k];
            if f != 0.0 {
                let row = self.rows[r].clone();
                for (v, &p) in cost.iter_mut().zip(&row) {
                    *v -= f * p;
                }
                cost[k] = 0.0;
            }
        }
        for _ in 0..MAX_PIVOTS {
            let Some(pc) = (0..self.cols).find(|&j| cost[j] < -LP_EPS) else {
                return Ok(true);
            };
            let mut best: Option<(usize, f64)> = None;
            for r in 0..self.rows.len() {
                let a = self.rows[r][pc];
                if a > LP_EPS {
                    let ratio = (self.rows[r][self.cols] / a).max(0.0);
                    let better = match best {
                        None => true,
                        Some((br, bratio)) => {
                            ratio < bratio - LP_EPS
                                || (ratio < bratio + LP_EPS && self.basis[r] < self.basis[br])
                        }
                    };
                    if better {
                        best = Some((r, ratio));
                    }
                }
            }
            let Some((pr, _)) = best else {
                return Ok(false);
            };
            self.pivot(pr, pc, cost);
        }
        Err(LpError::IterationLimit(MAX_PIVOTS))
    }

    /// Sum of basic artificial values; ~0 exactly when the system is feasible.
    fn artificial_residual(&self) -> f64 {
        self.basis
            .iter()
            .enumerate()
            .filter(|&(_, &k)| k >= self.art_from)
            .map(|(r, _)| self.rows[r][self.cols])
            .sum()
    }

    /// Pivot leftover artificials out of the basis (dropping redundant rows)
    /// and delete the artificial columns, so phase 2 cannot re-enter them.
    fn purge_artificials(&mut self) {
        let art_from = self.art_from;
        let mut scratch = vec![0.0; self.cols + 1];
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] >= art_from {
                match (0..art_from).find(|&j| self.rows[r][j].abs() > LP_EPS) {
                    Some(pc) => self.pivot(r, pc, &mut scratch),
                    None => {
                        self.rows.remove(r);
                        self.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        for row in &mut self.rows {
            row.drain(art_from..self.cols);
        }
        self.cols = art_from;
    }

    fn point(&self, nvars: usize) -> Vec<f64> {
        let mut x = vec![0.0; nvars];
        for (r, &k) in self.basis.iter().enumerate() {
            if k < 2 * nvars {
                let v = self.rows[r][self.cols];
                if k % 2 == 0 {
                    x[k / 2] += v;
                } else {
                    x[k / 2] -= v;
                }
            }
        }
        x
    }

    fn rhs_scale(rhs: &[f64]) -> f64 {
        1.0 + rhs.iter().fold(0.0f64, |a, &b| a.max(b.abs()))
    }

    /// Run phase 1 if any artificials exist; `Ok(false)` means infeasible.
    fn phase_one(&mut self, rhs: &[f64]) -> Result<bool, LpError> {
        if self.art_from == self.cols {
            return Ok(true);
        }
        let mut cost = vec![0.0; self.cols + 1];
        for c in cost[self.art_from..self.cols].iter_mut() {
            *c = 1.0;
        }
        self.simplex_min(&mut cost)?;
        if self.artificial_residual() > FEAS_EPS * Tableau::rhs_scale(rhs) {
            return Ok(false);
        }
        self.purge_artificials();
        Ok(true)
    }
}

/// Maximize `objective . x` subject to `rows[k] . x <= rhs[k]`, `x` free.
pub fn solve_lp_max(
    objective: &[f64],
    rows: &[Vec<f64>],
    rhs: &[f64],
) -> Result<LpOutcome, LpError> {
    let nvars = objective.len();
    let mut t = Tableau::build(rows, rhs, nvars)?;
    if !t.phase_one(rhs)? {
        return Ok(LpOutcome::Infeasible);
    }
    let mut cost = vec![0.0; t.cols + 1];
    for (j, &c) in objective.iter().enumerate() {
        cost[2 * j] = -c;
        cost[2 * j + 1] = c;
    }
    if !t.simplex_min(&mut cost)? {
        return Ok(LpOutcome::Unbounded);
    }
    let point = t.point(nvars);
    let value = objective.iter().zip(&point).map(|(c, x)| c * x).sum();
    Ok(LpOutcome::Optimal { value, point })
}

/// Phase-1-only feasibility of `rows[k] . x <= rhs[k]` with `x` free in `R^nvars`.
pub fn lp_feasible(rows: &[Vec<f64>], rhs: &[f64], nvars: usize) -> Result<bool, LpError> {
    let mut t = Tableau::build(rows, rhs, nvars)?;
    t.phase_one(rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_corner_is_optimal() {
        let rows = vec![
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![-1.0, 0.0],
            vec![0.0, -1.0],
        ];
        let rhs = vec![1.0, 2.0, 0.0, 0.0];
        match solve_lp_max(&[1.0, 1.0], &rows, &rhs).unwrap() {
            LpOutcome::Optimal { value, point } => {
                assert!((value - 3.0).abs() < 1e-9);
                assert!((point[0] - 1.0).abs() < 1e-9);
                assert!((point[1] - 2.0).abs() < 1e-9);
            }
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn negative_rhs_takes_phase_one() {
        // 1 <= x <= 3.
        let rows = vec![vec![-1.0], vec![1.0]];
        let rhs = vec![-1.0, 3.0];
        match solve_lp_max(&[1.0], &rows, &rhs).unwrap() {
            LpOutcome::Optimal { value, .. } => assert!((value - 3.0).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
        match solve_lp_max(&[-1.0], &rows, &rhs).unwrap() {
            LpOutcome::Optimal { value, point } => {
                assert!((value + 1.0).abs() < 1e-9);
                assert!((point[0] - 1.0).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        // x <= 1 and x >= 2.
        let rows = vec![vec![1.0], vec![-1.0]];
        let rhs = vec![1.0, -2.0];
        assert_eq!(
            solve_lp_max(&[1.0], &rows, &rhs).unwrap(),
            LpOutcome::Infeasible
        );
        assert!(!lp_feasible(&rows, &rhs, 1).unwrap());
        // only x >= 0.
        let rows = vec![vec![-1.0]];
        let rhs = vec![0.0];
        assert_eq!(
            solve_lp_max(&[1.0], &rows, &rhs).unwrap(),
            LpOutcome::Unbounded
        );
        assert!(lp_feasible(&rows, &rhs, 1).unwrap());
    }

    #[test]
    fn equality_as_inequality_pair() {
        // x + y = 1, x >= 0, y >= 0: max y -> 1 at (0, 1).
        let rows = vec![
            vec![1.0, 1.0],
            vec![-1.0, -1.0],
            vec![-1.0, 0.0],
            vec![0.0, -1.0],
        ];
        let rhs = vec![1.0, -1.0, 0.0, 0.0];
        match solve_lp_max(&[0.0, 1.0], &rows, &rhs).unwrap() {
            LpOutcome::Optimal { value, point } => {
                assert!((value - 1.0).abs() < 1e-9);
                assert!(point[0].abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tolerates_redundant_rows() {
        let rows = vec![
            vec![1.0, 1.0],
            vec![1.0, 1.0],
            vec![-1.0, 0.0],
            vec![0.0, -1.0],
        ];
        let rhs = vec![1.0, 1.0, 0.0, 0.0];
        match solve_lp_max(&[1.0, 2.0], &rows, &rhs).unwrap() {
            LpOutcome::Optimal { value, point } => {
                assert!((value - 2.0).abs() < 1e-9);
                assert!((point[1] - 1.0).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }
}
