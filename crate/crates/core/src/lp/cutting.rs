use super::{CoveringMaster, FractionalSolution, LpError, LpStatus};
use crate::graph::{min_weight_k_path, DagInstance};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpOptions {
    /// Separation rounds before giving up; `None` means `10 * m`.
    pub max_rounds: Option<usize>,
    pub tol: f64,
}

impl Default for LpOptions {
    fn default() -> Self {
        Self {
            max_rounds: None,
            tol: 1e-9,
        }
    }
}

/// Solves the path-covering LP by row generation.
///
/// Each round adds the single lightest path when its weight is below
/// `1 - tol`. Rows are never dropped. On `Optimal` the returned `x` is clamped
/// into `[0, 1]` and rescaled, if needed, so that every k-path has weight at
/// least 1 up to float rounding.
pub fn solve_lp(inst: &DagInstance, opts: &LpOptions) -> Result<FractionalSolution, LpError> {
    let costs = inst.costs();
    let max_rounds = opts.max_rounds.unwrap_or(10 * inst.m());
    let mut master = CoveringMaster::new(&costs, opts.tol);
    let mut active = Vec::new();
    let mut history = Vec::new();

    let status = loop {
        let x = master.primal();
        let violated = match min_weight_k_path(inst, &x) {
            Some(w) if w.weight < 1.0 - opts.tol => w,
            _ => break LpStatus::Optimal,
        };
        if active.len() >= max_rounds {
            break LpStatus::IterationLimit;
        }
        master.add_row(&violated.edges);
        master.optimize()?;
        history.push(master.dual_objective());
        active.push(violated);
    };

    let mut x: Vec<f64> = master.primal().into_iter().map(|v| v.clamp(0.0, 1.0)).collect();
    if status == LpStatus::Optimal {
        repair_feasibility(inst, &mut x);
    }
    let objective = costs.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(FractionalSolution {
        x,
        objective,
        iterations: active.len(),
        active_constraints: active,
        status,
        history,
    })
}

/// Scales `x` up by the inverse of the lightest path weight when that weight
/// is below 1. Clamping and the separation tolerance can each leave a path a
/// few ulps to `1e-9` short.
pub(crate) fn repair_feasibility(inst: &DagInstance, x: &mut [f64]) {
    if let Some(w) = min_weight_k_path(inst, x) {
        if w.weight < 1.0 && w.weight > 0.0 {
            let scale = 1.0 / w.weight;
            for v in x.iter_mut() {
                *v = (*v * scale).min(1.0);
            }
        }
    }
}
