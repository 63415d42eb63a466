use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{cut_rule, sample_labels, CutSolution, LabelDistribution, RoundingError};
use crate::graph::DagInstance;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloSummary {
    /// Cheapest trial; the lowest trial index wins ties.
    pub best: CutSolution,
    pub best_trial: usize,
    pub trials: usize,
    pub mean_cost: f64,
    /// Standard error of `mean_cost`.
    pub std_error: f64,
    /// `mean_cost / ((k+1) c(x))`, NaN when `c(x) = 0`.
    pub empirical_ratio: f64,
    pub ratio_std_error: f64,
}

/// RNG for one trial: stream `trial` of the generator seeded by `seed`, so
/// results do not depend on thread scheduling.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Repeats sampling and cutting `trials` times in parallel.
pub fn monte_carlo_round(
    inst: &DagInstance,
    x: &[f64],
    dist: &LabelDistribution,
    trials: usize,
    seed: u64,
) -> Result<MonteCarloSummary, RoundingError> {
    if trials == 0 {
        return Err(RoundingError::BadParameter("trials must be at least 1".into()));
    }
    let runs: Vec<CutSolution> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let labels = sample_labels(dist, inst, &mut rng)?;
            cut_rule(inst, x, &labels)
        })
        .collect::<Result<_, _>>()?;

    let costs: Vec<f64> = runs.iter().map(|s| s.cost).collect();
    let n = trials as f64;
    let mean_cost = compensated_sum(costs.iter().copied()) / n;
    let std_error = if trials > 1 {
        let var = compensated_sum(costs.iter().map(|c| (c - mean_cost).powi(2))) / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    let best_trial = (0..trials).fold(0, |b, t| if costs[t] < costs[b] { t } else { b });

    let lp_cost: f64 = inst.costs().iter().zip(x).map(|(c, v)| c * v).sum();
    let scale = (inst.k() + 1) as f64 * lp_cost;
    let (empirical_ratio, ratio_std_error) = if lp_cost > 0.0 {
        (mean_cost / scale, std_error / scale)
    } else {
        (f64::NAN, f64::NAN)
    };
    Ok(MonteCarloSummary {
        best: runs.into_iter().nth(best_trial).unwrap(),
        best_trial,
        trials,
        mean_cost,
        std_error,
        empirical_ratio,
        ratio_std_error,
    })
}

/// Neumaier summation; a run of identical costs averages back to that cost.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        comp += if sum.abs() >= v.abs() { (sum - t) + v } else { (v - t) + sum };
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{solve_lp, LpOptions};

    fn layered() -> DagInstance {
        let mut edges = Vec::new();
        for layer in 0..3 {
            for a in 0..2 {
                for b in 0..2 {
                    let cost = 1.0 + ((layer * 4 + a * 2 + b) % 5) as f64;
                    edges.push((layer * 2 + a, (layer + 1) * 2 + b, cost));
                }
            }
        }
        DagInstance::new(8, edges, 3).unwrap()
    }

    #[test]
    fn seeds_are_reproducible() {
        let g = layered();
        let lp = solve_lp(&g, &LpOptions::default()).unwrap();
        let d = LabelDistribution::poly_d();
        let a = monte_carlo_round(&g, &lp.x, &d, 200, 42).unwrap();
        let b = monte_carlo_round(&g, &lp.x, &d, 200, 42).unwrap();
        assert_eq!(a, b);
        let c = monte_carlo_round(&g, &lp.x, &d, 200, 43).unwrap();
        assert_ne!(a.best.labels, c.best.labels);
        assert!(a.best.feasible && a.best.cost <= a.mean_cost);
    }

    #[test]
    fn zero_lp_cost_gives_nan_ratio() {
        let g = DagInstance::new(4, vec![(0, 1, 1.0), (2, 3, 1.0)], 2).unwrap();
        let s = monte_carlo_round(&g, &[0.0, 0.0], &LabelDistribution::uniform(), 5, 0).unwrap();
        assert!(s.empirical_ratio.is_nan());
        assert_eq!(s.mean_cost, 0.0);
    }

    #[test]
    fn mean_of_constant_costs_is_exact() {
        let c = 7.292289184072585;
        assert_eq!(compensated_sum(std::iter::repeat_n(c, 10_000)) / 10_000.0, c);
    }

    #[test]
    fn zero_trials_rejected() {
        let g = layered();
        let x = vec![1.0; g.m()];
        assert!(monte_carlo_round(&g, &x, &LabelDistribution::uniform(), 0, 0).is_err());
    }
}
