//! The path-covering LP: minimize `sum c_e x_e` subject to `sum_{e in P} x_e >= 1`
//! for every k-edge path `P`, `x >= 0`.
//!
//! [`solve_lp`] runs row generation: a restricted master LP is solved with
//! [`CoveringMaster`] and the separation oracle adds the lightest violated
//! path until none is left.

mod cutting;
mod simplex;

pub use cutting::{solve_lp, LpOptions};
pub use simplex::CoveringMaster;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::PathWitness;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("numerical failure in simplex: {0}")]
    NumericalFailure(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LpStatus {
    Optimal,
    IterationLimit,
}

/// An LP solution together with the path constraints that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalSolution {
    /// Per-edge values, clamped into `[0, 1]`.
    pub x: Vec<f64>,
    pub objective: f64,
    pub active_constraints: Vec<PathWitness>,
    /// Number of separation rounds that added a row.
    pub iterations: usize,
    pub status: LpStatus,
    /// Restricted master objective after each round.
    pub history: Vec<f64>,
}

/// Solution of a restricted covering LP.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexSolution {
    pub x: Vec<f64>,
    /// One dual value per input row.
    pub duals: Vec<f64>,
    pub objective: f64,
}

/// Solves `min c^T x, A x >= 1, x >= 0` where row `i` of `A` is the indicator
/// of `rows[i]`.
pub fn restricted_simplex(costs: &[f64], rows: &[Vec<usize>], tol: f64) -> Result<SimplexSolution, LpError> {
    let mut master = CoveringMaster::new(costs, tol);
    for row in rows {
        master.add_row(row);
    }
    master.optimize()?;
    let x: Vec<f64> = master.primal().into_iter().map(|v| v.max(0.0)).collect();
    let objective = costs.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(SimplexSolution {
        x,
        duals: master.duals(),
        objective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs_residual(costs: &[f64], rows: &[Vec<usize>], sol: &SimplexSolution) -> f64 {
        let mut res = 0.0;
        for (row, y) in rows.iter().zip(&sol.duals) {
            let lhs: f64 = row.iter().map(|&j| sol.x[j]).sum();
            res += (y * (lhs - 1.0)).abs();
        }
        for (j, c) in costs.iter().enumerate() {
            let load: f64 = rows
                .iter()
                .zip(&sol.duals)
                .filter(|(r, _)| r.contains(&j))
                .map(|(_, y)| y)
                .sum();
            res += (sol.x[j] * (c - load)).abs();
        }
        res
    }

    #[test]
    fn single_row_takes_cheapest_column() {
        let rows = vec![vec![0, 1, 2]];
        let sol = restricted_simplex(&[3.0, 1.0, 2.0], &rows, 1e-9).unwrap();
        assert_eq!(sol.x, vec![0.0, 1.0, 0.0]);
        assert!((sol.objective - 1.0).abs() < 1e-12);
        assert!((sol.duals[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn overlapping_rows_share_middle_column() {
        // Vertices of {x1+x2>=1, x2+x3>=1, x>=0} with finite cost: (0,1,0) costs 1,
        // (1,0,1) costs 2; every other point costs more.
        let rows = vec![vec![0, 1], vec![1, 2]];
        let sol = restricted_simplex(&[1.0, 1.0, 1.0], &rows, 1e-9).unwrap();
        assert!((sol.objective - 1.0).abs() < 1e-12);
        for (got, want) in sol.x.iter().zip([0.0, 1.0, 0.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!(cs_residual(&[1.0, 1.0, 1.0], &rows, &sol) < 1e-9);
    }

    #[test]
    fn no_rows_gives_zero() {
        let sol = restricted_simplex(&[1.0, 2.0], &[], 1e-9).unwrap();
        assert_eq!(sol.x, vec![0.0, 0.0]);
        assert_eq!(sol.objective, 0.0);
    }

    #[test]
    fn zero_cost_columns_are_used_first() {
        let rows = vec![vec![0, 1], vec![1, 2], vec![0, 2]];
        let sol = restricted_simplex(&[0.0, 4.0, 0.0], &rows, 1e-9).unwrap();
        assert!(sol.objective.abs() < 1e-12);
        assert!(sol.x[0] >= 1.0 - 1e-9 && sol.x[2] >= 1.0 - 1e-9);
    }

    #[test]
    fn triangle_cover_is_half_integral() {
        // Odd cycle of pairs: optimum 1.5 at x = (1/2, 1/2, 1/2).
        let rows = vec![vec![0, 1], vec![1, 2], vec![0, 2]];
        let sol = restricted_simplex(&[1.0, 1.0, 1.0], &rows, 1e-9).unwrap();
        assert!((sol.objective - 1.5).abs() < 1e-12);
        let dual: f64 = sol.duals.iter().sum();
        assert!((dual - 1.5).abs() < 1e-12);
        assert!(cs_residual(&[1.0; 3], &rows, &sol) < 1e-9);
    }
}
