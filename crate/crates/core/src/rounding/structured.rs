//! Rounding for fractional solutions whose positive values share one
//! interval `[(1 + 1/(r+1))/(k+1), (1 + 1/r)/(k+1))`. Labels uniform on
//! `{0, 1/r, ..., 1}` then cut each such edge with probability
//! `(r+2)/(2(r+1))`, which is at most `(k+1) x_e / 2`.

use rand::Rng;

use super::{cut_rule, sample_labels, CutSolution, LabelDistribution, RoundingError};
use crate::dist::AtomicUniform;
use crate::graph::DagInstance;

/// Values at or below this count as zero.
const ZERO_TOL: f64 = 1e-9;
/// Slack on both interval ends.
const EDGE_TOL: f64 = 1e-9;

/// `[lo, hi)` for `r`; `hi` is infinite for `r = 1`, whose values at or above
/// `2/(k+1)` are cut whatever the labels.
pub fn structured_interval(r: usize, k: usize) -> (f64, f64) {
    let kp = (k + 1) as f64;
    let lo = (1.0 + 1.0 / (r + 1) as f64) / kp;
    let hi = if r == 1 { f64::INFINITY } else { (1.0 + 1.0 / r as f64) / kp };
    (lo, hi)
}

/// Smallest `r` whose interval holds every value below `2/(k+1)`. Values at
/// or above `2/(k+1)` are cut with probability 1 under any `r` and are
/// ignored. With no fractional values left the answer is `r = 1`.
pub fn detect_structure(x: &[f64], k: usize) -> Option<usize> {
    let full = 2.0 / (k + 1) as f64 - EDGE_TOL;
    let frac: Vec<f64> = x.iter().copied().filter(|&v| v > ZERO_TOL && v < full).collect();
    let Some(min) = frac.iter().copied().reduce(f64::min) else {
        return Some(1);
    };
    let max_r = ((k + 1) as f64 / min).ceil() as usize;
    (1..=max_r.max(1)).find(|&r| {
        let (lo, hi) = structured_interval(r, k);
        frac.iter().all(|&v| v >= lo - EDGE_TOL && v < hi - EDGE_TOL)
    })
}

pub fn structured_round<R: Rng + ?Sized>(
    inst: &DagInstance,
    x: &[f64],
    rng: &mut R,
) -> Result<(usize, CutSolution), RoundingError> {
    let r = detect_structure(x, inst.k()).ok_or(RoundingError::NotStructured)?;
    let dist = LabelDistribution::Discrete(AtomicUniform::new(r)?);
    let labels = sample_labels(&dist, inst, rng)?;
    Ok((r, cut_rule(inst, x, &labels)?))
}
