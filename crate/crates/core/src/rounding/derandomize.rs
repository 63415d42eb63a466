//! Conditional expectations over a quantile grid of label candidates.

use super::{cut_unchecked, surviving, threshold, CutSolution, LabelAssignment, CUT_TIE_TOL};
use crate::dist::IndepLabelDensity;
use crate::graph::DagInstance;

/// `E[cost]` of one rounding with i.i.d. labels from `d`.
pub fn expected_cost(inst: &DagInstance, x: &[f64], d: &IndepLabelDensity) -> f64 {
    let k = inst.k();
    inst.edges()
        .iter()
        .zip(x)
        .map(|(e, &v)| e.cost * d.difference_cdf_at(threshold(k, v)))
        .sum()
}

/// Fixes labels in topological order, each to the grid candidate minimizing
/// the conditional expected cost; ties go to the smaller candidate.
///
/// When `v` is fixed its in-neighbours are already fixed and its
/// out-neighbours are not, so only `v`'s incident edges depend on the choice:
/// an in-edge is cut iff `l(v) - l(u) <= thr`, an out-edge `(v, w)` with
/// probability `D(l(v) + thr)`. `feasible` is false only when `x` itself
/// leaves a k-path under weight 1.
pub fn derandomize(inst: &DagInstance, x: &[f64], d: &IndepLabelDensity, grid_size: usize) -> CutSolution {
    let k = inst.k();
    let g = grid_size.max(2);
    let candidates: Vec<f64> = (0..g).map(|i| d.quantile(i as f64 / (g - 1) as f64)).collect();
    let mut labels = vec![0.0; inst.n()];

    for &v in inst.topological_order() {
        let mut best = (f64::INFINITY, 0.0);
        for &c in &candidates {
            let mut cost = 0.0;
            for &e in inst.in_edges(v) {
                let edge = inst.edge(e);
                if c - labels[edge.tail] <= threshold(k, x[e]) + CUT_TIE_TOL {
                    cost += edge.cost;
                }
            }
            for &e in inst.out_edges(v) {
                cost += inst.edge(e).cost * d.cdf_at(c + threshold(k, x[e]));
            }
            if cost < best.0 {
                best = (cost, c);
            }
        }
        labels[v] = best.1;
    }

    let mut sol = cut_unchecked(inst, x, &labels);
    sol.feasible = surviving(inst, &sol.deleted).is_none();
    sol.labels = Some(LabelAssignment { labels });
    sol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_feasible;

    #[test]
    fn zero_value_edge_is_kept() {
        let g = DagInstance::new(2, vec![(0, 1, 1.0)], 1).unwrap();
        let sol = derandomize(&g, &[0.0], &IndepLabelDensity::uniform(), 2);
        assert_eq!(sol.cost, 0.0);
        assert!(sol.deleted.is_empty());
        assert!(!sol.feasible);
    }

    #[test]
    fn path_with_uniform_values_is_cut() {
        let k = 4;
        let edges = (0..k).map(|i| (i, i + 1, 1.0 + i as f64)).collect();
        let g = DagInstance::new(k + 1, edges, k).unwrap();
        let x = vec![1.0 / k as f64; k];
        for d in [IndepLabelDensity::uniform(), IndepLabelDensity::poly_d()] {
            let sol = derandomize(&g, &x, &d, 64);
            assert!(sol.feasible && !sol.deleted.is_empty());
            assert!(is_feasible(&g, &sol.deleted));
            assert!(sol.cost <= expected_cost(&g, &x, &d) + 1e-9);
        }
    }
}
