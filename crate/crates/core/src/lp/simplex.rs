//! Dense tableau simplex for covering LPs `min c^T x, A x >= 1, x >= 0`.
//!
//! The solver works on the dual packing problem `max 1^T y, A^T y <= c,
//! y >= 0`. With `c >= 0` the all-slack basis is feasible, so no phase one is
//! needed, and adding a covering row is adding a dual column, which keeps the
//! current basis feasible. The covering solution `x` is read off the reduced
//! costs of the slack columns.

use super::LpError;

/// Pivots below this magnitude are rejected.
const PIVOT_TOL: f64 = 1e-11;
/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
const DEGENERATE_LIMIT: usize = 500;
const MAX_PIVOTS: usize = 1_000_000;

#[derive(Debug, Clone)]
pub struct CoveringMaster {
    costs: Vec<f64>,
    tol: f64,
    rows: Vec<Vec<usize>>,
    /// Column-major tableau; columns `0..m` are the slacks, then one per row.
    cols: Vec<Vec<f64>>,
    reduced: Vec<f64>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    degenerate_streak: usize,
    bland: bool,
    pivots: usize,
}

impl CoveringMaster {
    pub fn new(costs: &[f64], tol: f64) -> Self {
        let m = costs.len();
        let cols = (0..m)
            .map(|j| {
                let mut c = vec![0.0; m];
                c[j] = 1.0;
                c
            })
            .collect();
        Self {
            costs: costs.to_vec(),
            tol,
            rows: Vec::new(),
            cols,
            reduced: vec![0.0; m],
            rhs: costs.to_vec(),
            basis: (0..m).collect(),
            degenerate_streak: 0,
            bland: false,
            pivots: 0,
        }
    }

    fn m(&self) -> usize {
        self.costs.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> usize {
        self.pivots
    }

    /// Adds the covering row `sum_{j in row} x_j >= 1`.
    pub fn add_row(&mut self, row: &[usize]) {
        let m = self.m();
        let mut col = vec![0.0; m];
        let mut reduced = -1.0;
        for &j in row {
            // The slack block of the tableau is the current basis inverse.
            for (i, c) in col.iter_mut().enumerate() {
                *c += self.cols[j][i];
            }
            reduced += self.reduced[j];
        }
        self.rows.push(row.to_vec());
        self.cols.push(col);
        self.reduced.push(reduced);
    }

    /// Runs primal simplex on the dual until no column prices out.
    pub fn optimize(&mut self) -> Result<(), LpError> {
        loop {
            let Some(enter) = self.choose_entering() else {
                return Ok(());
            };
            let leave = self.choose_leaving(enter)?;
            let ratio = self.rhs[leave] / self.cols[enter][leave];
            if ratio <= self.tol {
                self.degenerate_streak += 1;
                if self.degenerate_streak > DEGENERATE_LIMIT {
                    self.bland = true;
                }
            } else {
                self.degenerate_streak = 0;
                self.bland = false;
            }
            self.pivot(leave, enter);
            self.pivots += 1;
            if self.pivots > MAX_PIVOTS {
                return Err(LpError::NumericalFailure("pivot limit exceeded".into()));
            }
        }
    }

    fn choose_entering(&self) -> Option<usize> {
        if self.bland {
            return self.reduced.iter().position(|&d| d < -self.tol);
        }
        let mut best = None;
        let mut best_d = -self.tol;
        for (j, &d) in self.reduced.iter().enumerate() {
            if d < best_d {
                best_d = d;
                best = Some(j);
            }
        }
        best
    }

    fn choose_leaving(&self, enter: usize) -> Result<usize, LpError> {
        let col = &self.cols[enter];
        let mut best: Option<(usize, f64)> = None;
        for (i, &a) in col.iter().enumerate() {
            if a <= PIVOT_TOL {
                continue;
            }
            let ratio = self.rhs[i].max(0.0) / a;
            best = match best {
                None => Some((i, ratio)),
                Some((bi, br)) => {
                    let tie = (ratio - br).abs() <= 1e-12 * (1.0 + br.abs());
                    let better = if tie {
                        if self.bland {
                            self.basis[i] < self.basis[bi]
                        } else {
                            a > col[bi]
                        }
                    } else {
                        ratio < br
                    };
                    if better {
                        Some((i, ratio))
                    } else {
                        Some((bi, br))
                    }
                }
            };
        }
        match best {
            Some((i, _)) => Ok(i),
            // Every dual column is bounded by the cost of one of its edges.
            None => Err(LpError::NumericalFailure(format!(
                "no pivot above {PIVOT_TOL:e} in entering column {enter}"
            ))),
        }
    }

    fn pivot(&mut self, r: usize, enter: usize) {
        let pcol = self.cols[enter].clone();
        let piv = pcol[r];
        let d_enter = self.reduced[enter];
        for (j, col) in self.cols.iter_mut().enumerate() {
            let f = col[r] / piv;
            if f == 0.0 {
                continue;
            }
            for (i, v) in col.iter_mut().enumerate() {
                if i == r {
                    *v = f;
                } else {
                    *v -= f * pcol[i];
                }
            }
            self.reduced[j] -= f * d_enter;
        }
        let f = self.rhs[r] / piv;
        for (i, v) in self.rhs.iter_mut().enumerate() {
            if i == r {
                *v = f;
            } else {
                *v -= f * pcol[i];
            }
        }
        self.reduced[enter] = 0.0;
        self.basis[r] = enter;
    }

    /// Covering solution: the slack reduced costs.
    pub fn primal(&self) -> Vec<f64> {
        self.reduced[..self.m()].to_vec()
    }

    /// Packing solution, one value per added row.
    pub fn duals(&self) -> Vec<f64> {
        let m = self.m();
        let mut y = vec![0.0; self.rows.len()];
        for (i, &b) in self.basis.iter().enumerate() {
            if b >= m {
                y[b - m] = self.rhs[i].max(0.0);
            }
        }
        y
    }

    /// Packing objective `1^T y`; a lower bound on the full covering optimum.
    pub fn dual_objective(&self) -> f64 {
        self.duals().iter().sum()
    }
}
