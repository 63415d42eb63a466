//! Ground truth for small instances: every k-path, the full LP over them,
//! and branch-and-bound for the integral optimum.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{min_weight_k_path_filtered, surviving_k_path, DagInstance, PathWitness};
use crate::lp::{restricted_simplex, FractionalSolution, LpError, LpStatus};

/// Largest number of k-paths [`enumerate_k_paths`] will list.
pub const PATH_LIMIT: u128 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExactError {
    #[error("instance has {count} k-paths, more than the limit {limit}")]
    TooManyPaths { count: u128, limit: u128 },
    #[error("node budget exhausted; best cost found {}", .0.cost)]
    BudgetExceeded(Box<ExactResult>),
    #[error(transparent)]
    Lp(#[from] LpError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactResult {
    /// Deleted edge ids, ascending.
    pub deleted: Vec<usize>,
    pub cost: f64,
    pub nodes_explored: u64,
    /// True when the search ran to completion.
    pub certified: bool,
}

/// Number of k-paths, saturating at `u128::MAX`.
pub fn count_k_paths(inst: &DagInstance) -> u128 {
    // ends[v] = number of j-edge paths ending at v.
    let mut ends = vec![1u128; inst.n()];
    for _ in 0..inst.k() {
        let mut next = vec![0u128; inst.n()];
        for e in inst.edges() {
            next[e.head] = next[e.head].saturating_add(ends[e.tail]);
        }
        ends = next;
    }
    ends.into_iter().fold(0u128, u128::saturating_add)
}

/// Every k-path, by depth-first extension from each vertex in topological
/// order. `weight` is left at 0.
pub fn enumerate_k_paths(inst: &DagInstance) -> Result<Vec<PathWitness>, ExactError> {
    let count = count_k_paths(inst);
    if count > PATH_LIMIT {
        return Err(ExactError::TooManyPaths {
            count,
            limit: PATH_LIMIT,
        });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut vertices = Vec::with_capacity(inst.k() + 1);
    let mut edges = Vec::with_capacity(inst.k());
    for &s in inst.topological_order() {
        vertices.push(s);
        extend(inst, &mut vertices, &mut edges, &mut out);
        vertices.pop();
    }
    Ok(out)
}

fn extend(inst: &DagInstance, vertices: &mut Vec<usize>, edges: &mut Vec<usize>, out: &mut Vec<PathWitness>) {
    if edges.len() == inst.k() {
        out.push(PathWitness {
            vertices: vertices.clone(),
            edges: edges.clone(),
            weight: 0.0,
        });
        return;
    }
    let v = *vertices.last().unwrap();
    for &e in inst.out_edges(v) {
        vertices.push(inst.edge(e).head);
        edges.push(e);
        extend(inst, vertices, edges, out);
        edges.pop();
        vertices.pop();
    }
}

/// The covering LP with every k-path as a row.
pub fn full_lp(inst: &DagInstance) -> Result<FractionalSolution, ExactError> {
    let paths = enumerate_k_paths(inst)?;
    let rows: Vec<Vec<usize>> = paths.iter().map(|p| p.edges.clone()).collect();
    let sol = restricted_simplex(&inst.costs(), &rows, 1e-9)?;
    let active = paths
        .into_iter()
        .map(|mut p| {
            p.weight = p.recompute_weight(&sol.x);
            p
        })
        .collect();
    Ok(FractionalSolution {
        objective: sol.objective,
        x: sol.x,
        active_constraints: active,
        iterations: 1,
        status: LpStatus::Optimal,
        history: vec![sol.objective],
    })
}

/// Minimum-cost deletion set by branch-and-bound.
///
/// Each node takes a surviving k-path with the fewest deletable edges and
/// branches on which of them is the first one deleted: branch `i` deletes
/// edge `i` and forbids edges `0..i`. Nodes are pruned against the incumbent
/// with a bound from greedily packing paths that share no deletable edge.
pub fn exact_solve(inst: &DagInstance, budget_nodes: u64) -> Result<ExactResult, ExactError> {
    let greedy = greedy_cover(inst);
    let mut search = Search {
        inst,
        removed: vec![false; inst.m()],
        forbidden: vec![false; inst.m()],
        best_cost: inst.cost_of(&greedy),
        best: greedy,
        nodes: 0,
        budget: budget_nodes,
        exhausted: false,
    };
    search.node(0.0);
    let mut deleted = search.best;
    deleted.sort_unstable();
    let result = ExactResult {
        cost: inst.cost_of(&deleted),
        deleted,
        nodes_explored: search.nodes,
        certified: !search.exhausted,
    };
    if search.exhausted {
        Err(ExactError::BudgetExceeded(Box::new(result)))
    } else {
        Ok(result)
    }
}

/// Repeatedly deletes the cheapest edge of some surviving k-path.
fn greedy_cover(inst: &DagInstance) -> Vec<usize> {
    let mut removed = vec![false; inst.m()];
    let mut deleted = Vec::new();
    while let Some(p) = surviving_k_path(inst, &removed) {
        let e = *p
            .edges
            .iter()
            .min_by(|&&a, &&b| inst.edge(a).cost.total_cmp(&inst.edge(b).cost))
            .unwrap();
        removed[e] = true;
        deleted.push(e);
    }
    deleted
}

/// Prune when the bound is within this of the incumbent.
const PRUNE_EPS: f64 = 1e-12;

struct Search<'a> {
    inst: &'a DagInstance,
    removed: Vec<bool>,
    forbidden: Vec<bool>,
    best: Vec<usize>,
    best_cost: f64,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl Search<'_> {
    /// Surviving path with the fewest deletable edges, avoiding `skip`.
    fn path(&self, skip: &[bool]) -> Option<PathWitness> {
        let w: Vec<f64> = self.forbidden.iter().map(|&f| if f { 0.0 } else { 1.0 }).collect();
        min_weight_k_path_filtered(self.inst, &w, |e| !self.removed[e] && !skip[e])
    }

    fn packing_bound(&self) -> f64 {
        let mut used = vec![false; self.inst.m()];
        let mut bound = 0.0;
        while let Some(p) = self.path(&used) {
            let mut cheapest = f64::INFINITY;
            for &e in &p.edges {
                if !self.forbidden[e] {
                    used[e] = true;
                    cheapest = cheapest.min(self.inst.edge(e).cost);
                }
            }
            bound += cheapest;
            if cheapest.is_infinite() {
                break;
            }
        }
        bound
    }

    fn node(&mut self, cost: f64) {
        if self.exhausted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        let none = vec![false; self.inst.m()];
        let Some(p) = self.path(&none) else {
            if cost < self.best_cost {
                self.best_cost = cost;
                self.best = (0..self.inst.m()).filter(|&e| self.removed[e]).collect();
            }
            return;
        };
        if cost + self.packing_bound() >= self.best_cost - PRUNE_EPS {
            return;
        }
        let mut branch: Vec<usize> = p.edges.into_iter().filter(|&e| !self.forbidden[e]).collect();
        branch.sort_by(|&a, &b| self.inst.edge(a).cost.total_cmp(&self.inst.edge(b).cost).then(a.cmp(&b)));
        for &e in &branch {
            self.removed[e] = true;
            self.node(cost + self.inst.edge(e).cost);
            self.removed[e] = false;
            self.forbidden[e] = true;
        }
        for &e in &branch {
            self.forbidden[e] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_feasible;

    fn path(costs: &[f64]) -> DagInstance {
        let edges = costs.iter().enumerate().map(|(i, &c)| (i, i + 1, c)).collect();
        DagInstance::new(costs.len() + 1, edges, costs.len()).unwrap()
    }

    #[test]
    fn single_path() {
        let g = path(&[1.0, 1.0, 1.0]);
        assert_eq!(enumerate_k_paths(&g).unwrap().len(), 1);
        let r = exact_solve(&g, 1_000).unwrap();
        assert_eq!(r.cost, 1.0);
        assert!(r.certified && is_feasible(&g, &r.deleted));
        let lp = full_lp(&path(&[3.0, 1.0, 2.0])).unwrap();
        assert!((lp.objective - 1.0).abs() < 1e-12);
    }

    #[test]
    fn no_k_path() {
        let g = DagInstance::new(4, vec![(0, 1, 1.0), (2, 3, 1.0)], 2).unwrap();
        assert!(enumerate_k_paths(&g).unwrap().is_empty());
        let r = exact_solve(&g, 10).unwrap();
        assert_eq!((r.cost, r.deleted.len()), (0.0, 0));
        assert_eq!(full_lp(&g).unwrap().objective, 0.0);
    }

    #[test]
    fn diamond_paths() {
        let g = DagInstance::new(4, vec![(0, 1, 1.0), (0, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)], 2).unwrap();
        assert_eq!(enumerate_k_paths(&g).unwrap().len(), 2);
        assert_eq!(count_k_paths(&g), 2);
        assert_eq!(exact_solve(&g, 100).unwrap().cost, 2.0);
    }

    #[test]
    fn lp_bounds_exact_cost() {
        // Four overlapping 2-paths on five edges.
        let g = DagInstance::new(
            4,
            vec![(0, 1, 1.0), (1, 2, 1.0), (1, 3, 1.0), (0, 2, 1.0), (2, 3, 1.0)],
            2,
        )
        .unwrap();
        let lp = full_lp(&g).unwrap();
        let ex = exact_solve(&g, 10_000).unwrap();
        assert!(lp.objective <= ex.cost + 1e-9);
        assert!(is_feasible(&g, &ex.deleted));
    }

    #[test]
    fn budget_exhaustion_returns_incumbent() {
        let mut edges = Vec::new();
        for layer in 0..4 {
            for a in 0..3 {
                for b in 0..3 {
                    edges.push((layer * 3 + a, (layer + 1) * 3 + b, 1.0 + ((a + 2 * b + layer) % 4) as f64));
                }
            }
        }
        let g = DagInstance::new(15, edges, 4).unwrap();
        match exact_solve(&g, 3) {
            Err(ExactError::BudgetExceeded(r)) => {
                assert!(!r.certified);
                assert!(is_feasible(&g, &r.deleted));
            }
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn too_many_paths_guard() {
        // Complete layered DAG with width 32 and 4 layers of edges: 32^5 paths.
        let w = 32;
        let mut edges = Vec::new();
        for layer in 0..4 {
            for a in 0..w {
                for b in 0..w {
                    edges.push((layer * w + a, (layer + 1) * w + b, 1.0));
                }
            }
        }
        let g = DagInstance::new(5 * w, edges, 4).unwrap();
        assert_eq!(count_k_paths(&g), 32u128.pow(5));
        assert!(matches!(enumerate_k_paths(&g), Err(ExactError::TooManyPaths { .. })));
        assert!(matches!(full_lp(&g), Err(ExactError::TooManyPaths { .. })));
    }

    fn complete_layered(layers: usize, width: usize, k: usize) -> DagInstance {
        let mut edges = Vec::new();
        for layer in 0..layers - 1 {
            for a in 0..width {
                for b in 0..width {
                    edges.push((layer * width + a, (layer + 1) * width + b, 1.0));
                }
            }
        }
        DagInstance::new(layers * width, edges, k).unwrap()
    }

    /// Sum of the entries of `A^k` over an adjacency count matrix.
    fn matrix_count(g: &DagInstance) -> u128 {
        let n = g.n();
        let mut a = vec![vec![0u128; n]; n];
        for e in g.edges() {
            a[e.tail][e.head] += 1;
        }
        let mut p = a.clone();
        for _ in 1..g.k() {
            let mut next = vec![vec![0u128; n]; n];
            for i in 0..n {
                for l in 0..n {
                    if p[i][l] != 0 {
                        for j in 0..n {
                            next[i][j] += p[i][l] * a[l][j];
                        }
                    }
                }
            }
            p = next;
        }
        p.iter().flatten().sum()
    }

    #[test]
    fn layered_path_counts() {
        // Every k-path picks one vertex in each of k+1 consecutive layers.
        let g = complete_layered(4, 3, 3);
        assert_eq!(count_k_paths(&g), 81);
        assert_eq!(matrix_count(&g), 81);
        let g = complete_layered(3, 3, 2);
        assert_eq!(count_k_paths(&g), 27);
        assert_eq!(enumerate_k_paths(&g).unwrap().len(), 27);
        let g = complete_layered(5, 2, 2);
        assert_eq!(count_k_paths(&g), 3 * 8);
    }

    /// Cheapest feasible subset by trying all `2^m` of them.
    fn exhaustive(g: &DagInstance) -> f64 {
        let m = g.m();
        let mut best = f64::INFINITY;
        for mask in 0u32..1 << m {
            let set: Vec<usize> = (0..m).filter(|&e| mask >> e & 1 == 1).collect();
            let c = g.cost_of(&set);
            if c < best && is_feasible(g, &set) {
                best = c;
            }
        }
        best
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(48))]

        #[test]
        fn branch_and_bound_matches_exhaustive(g in crate::testutil::dag(8, 14, 3)) {
            let r = exact_solve(&g, 1_000_000).unwrap();
            proptest::prop_assert!(r.certified);
            proptest::prop_assert!(is_feasible(&g, &r.deleted));
            proptest::prop_assert_eq!(r.cost, exhaustive(&g));
        }

        #[test]
        fn count_matches_matrix_power(g in crate::testutil::dag(9, 24, 5)) {
            proptest::prop_assert_eq!(count_k_paths(&g), matrix_count(&g));
        }

        /// LP <= OPT <= any rounding, and OPT stays within the expected
        /// rounding guarantee of the polynomial label density.
        #[test]
        fn lp_opt_rounding_sandwich(g in crate::testutil::dag(9, 18, 4)) {
            use crate::rounding::{monte_carlo_round, LabelDistribution};
            let lp = full_lp(&g).unwrap();
            let opt = exact_solve(&g, 1_000_000).unwrap();
            let mc = monte_carlo_round(&g, &lp.x, &LabelDistribution::poly_d(), 20, 7).unwrap();
            proptest::prop_assert!(lp.objective <= opt.cost + 1e-9);
            proptest::prop_assert!(opt.cost <= mc.best.cost + 1e-9);
            let k = g.k() as f64;
            proptest::prop_assert!(opt.cost <= 0.549 * (k + 1.0) * lp.objective + 1e-9);
        }
    }
}
