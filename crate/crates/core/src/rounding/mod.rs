//! Label rounding: draw `l in [0,1]^V`, delete every edge `(u, v)` with
//! `l(v) - l(u) <= (k+1) x_e - 1`.
//!
//! Whatever the labels, a k-path of x-weight at least 1 loses an edge: the
//! label increments along it sum to at most 1 while the thresholds sum to at
//! least 1. All randomness lives in the choice of labels.

mod derandomize;
mod monte_carlo;
mod structured;

use std::sync::Arc;

use num_rational::BigRational;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dist::poly::rat_int;
use crate::dist::{AtomicUniform, DistError, IndepLabelDensity};
use crate::graph::{surviving_k_path, DagInstance, PathWitness};

pub use derandomize::{derandomize, expected_cost};
pub use monte_carlo::{monte_carlo_round, trial_rng, MonteCarloSummary};
pub use structured::{detect_structure, structured_interval, structured_round};

/// Label differences within this of the threshold count as ties and are cut.
pub const CUT_TIE_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RoundingError {
    #[error("instance is not bipartite: {0}")]
    NotBipartite(String),
    #[error("fractional solution is infeasible: path {0:?} survives rounding")]
    InfeasibleInput(Vec<usize>),
    #[error("no r makes the fractional solution structured")]
    NotStructured,
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Dist(#[from] DistError),
}

/// Per-vertex labels in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelAssignment {
    labels: Vec<f64>,
}

impl LabelAssignment {
    pub fn new(labels: Vec<f64>) -> Result<Self, RoundingError> {
        if let Some(v) = labels.iter().position(|l| !(0.0..=1.0).contains(l)) {
            return Err(RoundingError::BadParameter(format!(
                "label {} of vertex {v} outside [0, 1]",
                labels[v]
            )));
        }
        Ok(Self { labels })
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn get(&self, v: usize) -> f64 {
        self.labels[v]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutSolution {
    /// Deleted edge ids, ascending.
    pub deleted: Vec<usize>,
    pub cost: f64,
    /// Labels that produced the cut; absent for solutions built without one.
    pub labels: Option<LabelAssignment>,
    pub feasible: bool,
}

/// A proper 2-coloring: `side[v]` is true for vertices in the second part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bipartition {
    side: Vec<bool>,
}

impl Bipartition {
    /// Checks that every edge joins the two parts.
    pub fn new(inst: &DagInstance, side: Vec<bool>) -> Result<Self, RoundingError> {
        if side.len() != inst.n() {
            return Err(RoundingError::NotBipartite(format!(
                "{} sides for {} vertices",
                side.len(),
                inst.n()
            )));
        }
        if let Some(e) = inst.edges().iter().position(|e| side[e.tail] == side[e.head]) {
            return Err(RoundingError::NotBipartite(format!("edge {e} stays inside one part")));
        }
        Ok(Self { side })
    }

    /// Two-colors the underlying undirected graph.
    pub fn detect(inst: &DagInstance) -> Result<Self, RoundingError> {
        let side = inst
            .two_coloring()
            .ok_or_else(|| RoundingError::NotBipartite("odd cycle".into()))?;
        Self::new(inst, side)
    }

    pub fn side(&self) -> &[bool] {
        &self.side
    }
}

/// How labels are drawn.
#[derive(Debug, Clone)]
pub enum LabelDistribution {
    /// I.i.d. labels from a continuous density.
    Independent(Arc<IndepLabelDensity>),
    /// One uniform `y` and a fair coin: one part gets 0, the other `y`.
    Bipartite(Bipartition),
    /// I.i.d. labels uniform on `{0, 1/r, ..., 1}`.
    Discrete(AtomicUniform),
}

impl LabelDistribution {
    pub fn uniform() -> Self {
        Self::Independent(Arc::new(IndepLabelDensity::uniform()))
    }

    pub fn poly_d() -> Self {
        Self::Independent(Arc::new(IndepLabelDensity::poly_d()))
    }

    pub fn name(&self) -> String {
        match self {
            Self::Independent(d) => d.name().to_string(),
            Self::Bipartite(_) => "bipartite".into(),
            Self::Discrete(a) => format!("discrete-{}", a.r()),
        }
    }
}

pub fn sample_labels<R: Rng + ?Sized>(
    dist: &LabelDistribution,
    inst: &DagInstance,
    rng: &mut R,
) -> Result<LabelAssignment, RoundingError> {
    let n = inst.n();
    let labels = match dist {
        LabelDistribution::Independent(d) => (0..n).map(|_| d.quantile(rng.random::<f64>())).collect(),
        LabelDistribution::Bipartite(parts) => {
            if parts.side().len() != n {
                return Err(RoundingError::NotBipartite("partition does not match instance".into()));
            }
            let y: f64 = rng.random();
            let heads: bool = rng.random();
            parts
                .side()
                .iter()
                .map(|&second| if second == heads { y } else { 0.0 })
                .collect()
        }
        LabelDistribution::Discrete(a) => {
            let r = a.r();
            (0..n).map(|_| rng.random_range(0..=r) as f64 / r as f64).collect()
        }
    };
    Ok(LabelAssignment { labels })
}

/// `(k+1) x_e - 1`.
pub fn threshold(k: usize, x_e: f64) -> f64 {
    (k + 1) as f64 * x_e - 1.0
}

/// Applies the cut rule, ties included, and re-checks feasibility.
pub fn cut_rule(inst: &DagInstance, x: &[f64], labels: &LabelAssignment) -> Result<CutSolution, RoundingError> {
    let sol = cut_unchecked(inst, x, labels.labels());
    if let Some(p) = surviving(inst, &sol.deleted) {
        return Err(RoundingError::InfeasibleInput(p.edges));
    }
    Ok(CutSolution {
        labels: Some(labels.clone()),
        ..sol
    })
}

fn cut_unchecked(inst: &DagInstance, x: &[f64], labels: &[f64]) -> CutSolution {
    let k = inst.k();
    let deleted: Vec<usize> = inst
        .edges()
        .iter()
        .enumerate()
        .filter(|(e, edge)| labels[edge.head] - labels[edge.tail] <= threshold(k, x[*e]) + CUT_TIE_TOL)
        .map(|(e, _)| e)
        .collect();
    CutSolution {
        cost: inst.cost_of(&deleted),
        deleted,
        labels: None,
        feasible: true,
    }
}

fn surviving(inst: &DagInstance, deleted: &[usize]) -> Option<PathWitness> {
    let mut removed = vec![false; inst.m()];
    for &e in deleted {
        removed[e] = true;
    }
    surviving_k_path(inst, &removed)
}

/// Probability that an edge with value `x_e` is cut.
pub fn per_edge_cut_probability(dist: &LabelDistribution, x_e: f64, k: usize) -> f64 {
    let thr = threshold(k, x_e);
    match dist {
        LabelDistribution::Independent(d) => d.difference_cdf_at(thr),
        LabelDistribution::Bipartite(_) => ((k + 1) as f64 * x_e / 2.0).clamp(0.0, 1.0),
        LabelDistribution::Discrete(a) => a.difference_cdf_at(thr, CUT_TIE_TOL),
    }
}

/// Exact cut probability under labels uniform on `{0, 1/r, ..., 1}`.
pub fn discrete_cut_probability_exact(a: &AtomicUniform, x_e: &BigRational, k: usize) -> BigRational {
    let thr = x_e * rat_int(k as i64 + 1) - rat_int(1);
    a.difference_cdf_exact(&thr)
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::dist::poly::rat;
    use crate::graph::is_feasible;

    fn path3() -> DagInstance {
        DagInstance::new(3, vec![(0, 1, 1.0), (1, 2, 1.0)], 2).unwrap()
    }

    #[test]
    fn rule_applies_ties_and_thresholds() {
        let g = path3();
        let x = [1.0 / 3.0; 2];
        let labels = LabelAssignment::new(vec![0.9, 0.5, 0.7]).unwrap();
        let sol = cut_rule(&g, &x, &labels).unwrap();
        assert_eq!(sol.deleted, vec![0]);
        assert!(is_feasible(&g, &sol.deleted));
        // Equal labels sit exactly on a zero threshold and are cut.
        let flat = LabelAssignment::new(vec![0.5; 3]).unwrap();
        assert_eq!(cut_rule(&g, &x, &flat).unwrap().deleted, vec![0, 1]);
    }

    #[test]
    fn zero_value_edges_survive_increasing_labels() {
        let g = DagInstance::new(2, vec![(0, 1, 1.0)], 1).unwrap();
        let labels = LabelAssignment::new(vec![0.2, 0.3]).unwrap();
        let sol = cut_unchecked(&g, &[0.0], labels.labels());
        assert!(sol.deleted.is_empty());
        assert!(matches!(cut_rule(&g, &[0.0], &labels), Err(RoundingError::InfeasibleInput(_))));
    }

    #[test]
    fn large_values_are_always_cut() {
        let g = path3();
        let x = [2.0 / 3.0, 0.0];
        // The widest possible increase still meets threshold 1.
        let labels = LabelAssignment::new(vec![0.0, 1.0, 1.0]).unwrap();
        assert_eq!(cut_rule(&g, &x, &labels).unwrap().deleted, vec![0]);
    }

    #[test]
    fn labels_must_lie_in_unit_interval() {
        assert!(LabelAssignment::new(vec![0.0, 1.5]).is_err());
        assert!(LabelAssignment::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn discrete_one_gives_binary_labels() {
        let g = path3();
        let dist = LabelDistribution::Discrete(AtomicUniform::new(1).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let l = sample_labels(&dist, &g, &mut rng).unwrap();
            assert!(l.labels().iter().all(|&v| v == 0.0 || v == 1.0));
        }
    }

    #[test]
    fn independent_uniform_mean() {
        let g = DagInstance::new(3, vec![(0, 1, 1.0)], 1).unwrap();
        let dist = LabelDistribution::uniform();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut sums = [0.0; 3];
        let trials = 100_000;
        for _ in 0..trials {
            let l = sample_labels(&dist, &g, &mut rng).unwrap();
            for (s, v) in sums.iter_mut().zip(l.labels()) {
                *s += v;
            }
        }
        for s in sums {
            assert!((s / trials as f64 - 0.5).abs() < 0.01);
        }
    }

    #[test]
    fn bipartition_validation() {
        let g = path3();
        assert!(Bipartition::new(&g, vec![false, true, false]).is_ok());
        assert!(Bipartition::new(&g, vec![false, false, true]).is_err());
        let tri = DagInstance::new(3, vec![(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)], 1).unwrap();
        assert!(matches!(Bipartition::detect(&tri), Err(RoundingError::NotBipartite(_))));
        let parts = Bipartition::detect(&g).unwrap();
        assert_eq!(parts.side(), &[false, true, false]);
    }

    #[test]
    fn bipartite_labels_put_one_part_at_zero() {
        let g = path3();
        let dist = LabelDistribution::Bipartite(Bipartition::detect(&g).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let l = sample_labels(&dist, &g, &mut rng).unwrap();
            let (a, b) = (l.get(0), l.get(1));
            assert_eq!(l.get(0), l.get(2));
            assert!(a == 0.0 || b == 0.0);
        }
    }

    #[test]
    fn per_edge_examples() {
        let k = 3;
        let uni = LabelDistribution::uniform();
        assert!((per_edge_cut_probability(&uni, 1.0 / (k + 1) as f64, k) - 0.5).abs() < 1e-15);
        let parts = LabelDistribution::Bipartite(Bipartition::detect(&path3()).unwrap());
        assert_eq!(per_edge_cut_probability(&parts, 0.25, k), 0.5);
        assert_eq!(per_edge_cut_probability(&parts, 0.75, k), 1.0);
        // r = 2 interval for k = 3 is [(1 + 1/3)/4, (1 + 1/2)/4) = [1/3, 3/8).
        let a = AtomicUniform::new(2).unwrap();
        assert_eq!(discrete_cut_probability_exact(&a, &rat(1, 3), k), rat(2, 3));
        assert_eq!(discrete_cut_probability_exact(&a, &rat(7, 20), k), rat(2, 3));
        assert!((per_edge_cut_probability(&LabelDistribution::Discrete(a), 1.0 / 3.0, k) - 2.0 / 3.0).abs() < 1e-15);
    }

    fn all_distributions(g: &DagInstance, r: usize) -> Vec<LabelDistribution> {
        let mut out = vec![
            LabelDistribution::uniform(),
            LabelDistribution::poly_d(),
            LabelDistribution::Discrete(AtomicUniform::new(r).unwrap()),
        ];
        if let Ok(parts) = Bipartition::detect(g) {
            out.push(LabelDistribution::Bipartite(parts));
        }
        out
    }

    /// Scales arbitrary weights until every k-path carries weight at least 1.
    fn make_feasible(g: &DagInstance, w: &[f64]) -> Vec<f64> {
        match crate::graph::min_weight_k_path(g, w) {
            Some(p) if p.weight < 1.0 => {
                let s = 1.0 / p.weight.max(1e-3);
                let x: Vec<f64> = w.iter().map(|v| (v * s).min(1.0)).collect();
                make_feasible(g, &x)
            }
            _ => w.to_vec(),
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(128))]

        /// Any labels from any supported distribution cut every k-path of an
        /// LP-feasible x.
        #[test]
        fn rounding_is_always_feasible(
            (g, w) in crate::testutil::dag_with_weights(10, 24, 4),
            seed in 0u64..1_000,
            r in 1usize..=5,
        ) {
            let lp = crate::lp::solve_lp(&g, &crate::lp::LpOptions::default()).unwrap();
            let arbitrary = make_feasible(&g, &w);
            for x in [&lp.x, &arbitrary] {
                for dist in all_distributions(&g, r) {
                    let mut rng = trial_rng(seed, 0);
                    let labels = sample_labels(&dist, &g, &mut rng).unwrap();
                    let sol = cut_rule(&g, x, &labels);
                    proptest::prop_assert!(sol.is_ok(), "{} left {:?}", dist.name(), sol.err());
                    proptest::prop_assert!(crate::graph::is_feasible(&g, &sol.unwrap().deleted));
                }
            }
        }

        #[test]
        fn monte_carlo_is_deterministic(g in crate::testutil::dag(8, 16, 3), seed in 0u64..100) {
            let lp = crate::lp::solve_lp(&g, &crate::lp::LpOptions::default()).unwrap();
            let d = LabelDistribution::poly_d();
            let a = monte_carlo_round(&g, &lp.x, &d, 16, seed).unwrap();
            let b = monte_carlo_round(&g, &lp.x, &d, 16, seed).unwrap();
            proptest::prop_assert_eq!(a.best, b.best);
            proptest::prop_assert_eq!(a.mean_cost.to_bits(), b.mean_cost.to_bits());
        }
    }
}
