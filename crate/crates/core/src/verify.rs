//! The acceptance suite, shared by `ded verify` and the `acceptance` test
//! target. Each criterion returns a [`CriterionOutcome`] instead of
//! panicking so the CLI can print every line.

use std::fmt;
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::One;

use crate::dist::poly::{rat, rat_int};
use crate::dist::{
    consistency_at, lower_bound_certificate, sup_ratio, AtomicUniform, CosineCertificate, IndepLabelDensity,
    CONSISTENCY_TOL,
};
use crate::exact::{count_k_paths, exact_solve, full_lp, ExactResult};
use crate::generate::{generate, CostModel, GenSpec, Generated};
use crate::graph::{is_feasible, DagInstance};
use crate::lp::{solve_lp, FractionalSolution, LpOptions, LpStatus};
use crate::rounding::{
    cut_rule, derandomize, discrete_cut_probability_exact, monte_carlo_round, per_edge_cut_probability,
    sample_labels, trial_rng, Bipartition, LabelDistribution, MonteCarloSummary,
};

#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} [{}] {}: {} ({:.2} s)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

fn outcome(id: u8, name: &'static str, start: Instant, passed: bool, detail: String) -> CriterionOutcome {
    CriterionOutcome {
        id,
        name,
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

pub fn criterion_1() -> CriterionOutcome {
    let start = Instant::now();
    let d = IndepLabelDensity::uniform();
    let s = sup_ratio(d.difference_cdf());
    let elapsed = start.elapsed();
    match s {
        Ok(s) => {
            let da = (s.alpha - (2.0 - 2f64.sqrt())).abs();
            let dt = (s.t_star - (2f64.sqrt() - 1.0)).abs();
            let ok = da <= 1e-9 && dt <= 1e-9 && elapsed < Duration::from_secs(1);
            outcome(
                1,
                "uniform constant",
                start,
                ok,
                format!("alpha = {:.12} (err {da:.1e}), t* = {:.12} (err {dt:.1e})", s.alpha, s.t_star),
            )
        }
        Err(e) => outcome(1, "uniform constant", start, false, e.to_string()),
    }
}

pub fn criterion_2() -> CriterionOutcome {
    let start = Instant::now();
    let d = IndepLabelDensity::poly_d();
    let s = sup_ratio(d.difference_cdf());
    let elapsed = start.elapsed();
    match s {
        Ok(s) => {
            let ok = s.alpha > 0.5481
                && s.alpha < 0.5482
                && (s.t_star - 0.2666).abs() <= 1e-3
                && elapsed < Duration::from_secs(10);
            outcome(
                2,
                "refined constant",
                start,
                ok,
                format!(
                    "alpha = {:.10} at t* = {:.6}, degree {}, grid max {:.10}",
                    s.alpha,
                    s.t_star,
                    d.difference_cdf().max_degree(),
                    s.grid_max
                ),
            )
        }
        Err(e) => outcome(2, "refined constant", start, false, e.to_string()),
    }
}

pub fn criterion_3() -> CriterionOutcome {
    let start = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();
    for (terms, target) in [(vec![(1.0, 4.5)], 0.539), (vec![(1.0, 4.4), (0.29, 8.9)], 0.542)] {
        let label = terms.iter().map(|(a, t)| format!("{a}:{t}")).collect::<Vec<_>>().join(",");
        match CosineCertificate::new(terms).and_then(|c| lower_bound_certificate(&c)) {
            Ok(v) => {
                ok &= v > target;
                notes.push(format!("[{label}] = {v:.8} vs > {target}"));
            }
            Err(e) => {
                ok = false;
                notes.push(format!("[{label}] {e}"));
            }
        }
    }
    let mut worst: f64 = 0.0;
    for d in [IndepLabelDensity::uniform(), IndepLabelDensity::poly_d()] {
        for t in [4.5, 4.4, 8.9] {
            worst = worst.max(consistency_at(&d, t).error());
        }
    }
    ok &= worst <= CONSISTENCY_TOL;
    notes.push(format!("identity error {worst:.1e}"));
    ok &= start.elapsed() < Duration::from_secs(5);
    outcome(3, "lower-bound certificates", start, ok, notes.join("; "))
}

/// Instances for the feasibility sweep: layered, bipartite and path kinds
/// with at most 60 vertices, all 2-colorable.
fn feasibility_specs() -> Vec<GenSpec> {
    (0..100u64)
        .map(|i| match i % 3 {
            0 => {
                let layers = 3 + (i as usize / 3) % 4;
                let width = 2 + (i as usize / 5) % 9;
                let width = width.min(60 / layers);
                GenSpec::Layered {
                    layers,
                    width,
                    density: 0.4 + 0.15 * (i % 5) as f64,
                    seed: i,
                    k: Some(1 + (i as usize / 2) % (layers - 1)),
                    costs: CostModel::Uniform,
                }
            }
            1 => GenSpec::Bipartite {
                a: 2 + (i as usize) % 20,
                b: 2 + (i as usize / 2) % 20,
                density: 0.3 + 0.1 * (i % 7) as f64,
                seed: i,
                k: Some(1),
            },
            _ => GenSpec::Path {
                k: 1 + (i as usize) % 12,
            },
        })
        .collect()
}

pub fn criterion_4() -> CriterionOutcome {
    const PER_DIST: usize = 25;
    let start = Instant::now();
    let (mut trials, mut failures) = (0usize, 0usize);
    let mut error = None;
    for (i, spec) in feasibility_specs().into_iter().enumerate() {
        let Generated { instance, .. } = generate(&spec).expect("valid generator spec");
        let lp = match solve_lp(&instance, &LpOptions::default()) {
            Ok(lp) => lp,
            Err(e) => {
                error = Some(format!("{spec}: {e}"));
                break;
            }
        };
        let parts = Bipartition::detect(&instance).expect("generated kinds are bipartite");
        let dists = [
            LabelDistribution::uniform(),
            LabelDistribution::poly_d(),
            LabelDistribution::Bipartite(parts),
            LabelDistribution::Discrete(AtomicUniform::new(1 + i % 5).unwrap()),
        ];
        for (j, dist) in dists.iter().enumerate() {
            for t in 0..PER_DIST {
                trials += 1;
                let mut rng = trial_rng(i as u64 * 16 + j as u64, t);
                let labels = sample_labels(dist, &instance, &mut rng).expect("sampler");
                match cut_rule(&instance, &lp.x, &labels) {
                    Ok(sol) if is_feasible(&instance, &sol.deleted) => {}
                    _ => failures += 1,
                }
            }
        }
    }
    let ok = error.is_none() && failures == 0 && trials >= 10_000;
    let detail = match error {
        Some(e) => e,
        None => format!("{trials} trials, {failures} infeasible"),
    };
    outcome(4, "feasibility", start, ok, detail)
}

pub fn criterion_5() -> CriterionOutcome {
    let start = Instant::now();
    let mut ok = true;
    let mut worst = f64::NEG_INFINITY;
    for d in [IndepLabelDensity::uniform(), IndepLabelDensity::poly_d()] {
        let alpha = match sup_ratio(d.difference_cdf()) {
            Ok(s) => s.alpha,
            Err(e) => return outcome(5, "per-edge bound", start, false, e.to_string()),
        };
        let dist = LabelDistribution::Independent(Arc::new(d));
        for k in [2usize, 5, 10, 50] {
            let kp = (k + 1) as f64;
            for j in 0..100 {
                let x = 2.0 / kp * j as f64 / 99.0;
                let slack = per_edge_cut_probability(&dist, x, k) - alpha * kp * x;
                worst = worst.max(slack);
                ok &= slack <= 1e-9;
            }
        }
    }
    outcome(5, "per-edge bound", start, ok, format!("max of P[cut] - alpha (k+1) x_e = {worst:.3e}"))
}

/// Kolmogorov-Smirnov distance of `samples` to Uniform(-1, 1).
fn ks_uniform_pm1(samples: &mut [f64]) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &z)| {
            let cdf = ((z + 1.0) / 2.0).clamp(0.0, 1.0);
            (cdf - i as f64 / n).abs().max(((i + 1) as f64 / n - cdf).abs())
        })
        .fold(0.0, f64::max)
}

pub fn criterion_6() -> CriterionOutcome {
    const SAMPLES: usize = 1_000_000;
    let start = Instant::now();
    let edge = DagInstance::new(2, vec![(0, 1, 1.0)], 1).unwrap();
    let parts = Bipartition::detect(&edge).unwrap();
    let dist = LabelDistribution::Bipartite(parts);

    let mut exact = true;
    for k in [1usize, 2, 5, 10, 50] {
        let kp = (k + 1) as f64;
        for j in 0..100 {
            let x = 2.0 / kp * j as f64 / 99.0;
            exact &= per_edge_cut_probability(&dist, x, k) == 0.5 * kp * x;
        }
    }

    let mut rng = trial_rng(6, 0);
    let mut diffs: Vec<f64> = (0..SAMPLES)
        .map(|_| {
            let l = sample_labels(&dist, &edge, &mut rng).unwrap();
            l.get(1) - l.get(0)
        })
        .collect();
    let k = 3usize;
    let kp = (k + 1) as f64;
    let mut worst: f64 = 0.0;
    for frac in [0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0] {
        let x = 2.0 / kp * frac;
        let thr = kp * x - 1.0;
        let hits = diffs.iter().filter(|&&z| z <= thr + crate::rounding::CUT_TIE_TOL).count();
        let freq = hits as f64 / SAMPLES as f64;
        worst = worst.max((freq - 0.5 * kp * x).abs());
    }
    let ks = ks_uniform_pm1(&mut diffs);
    let ok = exact && worst <= 0.002 && ks < 0.002;
    outcome(
        6,
        "bipartite exactness",
        start,
        ok,
        format!("analytic exact: {exact}; max |freq - 0.5(k+1)x| = {worst:.5}; KS = {ks:.5}"),
    )
}

pub fn criterion_7() -> CriterionOutcome {
    let start = Instant::now();
    let mut ok = true;
    let mut checked = 0;
    for r in 1..=50i64 {
        let a = AtomicUniform::new(r as usize).unwrap();
        let want = rat(r + 2, 2 * (r + 1));
        for k in [1i64, 3, 10] {
            let kp = rat_int(k + 1);
            let lo = (BigRational::one() + rat(1, r + 1)) / &kp;
            let hi = (BigRational::one() + rat(1, r)) / &kp;
            for x in [lo.clone(), (&lo + &hi) / rat_int(2)] {
                ok &= discrete_cut_probability_exact(&a, &x, k as usize) == want;
                checked += 1;
            }
        }
        ok &= a.difference_cdf_exact(&rat_int(0)) == want;
    }
    outcome(7, "structured exactness", start, ok, format!("{checked} exact rational checks for r = 1..50"))
}

/// One instance of the shared LP benchmark.
#[derive(Debug, Clone)]
pub struct BenchInstance {
    pub spec: GenSpec,
    pub instance: DagInstance,
    pub lp: FractionalSolution,
    pub full: FractionalSolution,
}

/// The 200 benchmark instances with their LP solutions and the time taken
/// to generate and solve them.
pub struct LpSuite {
    pub instances: Vec<BenchInstance>,
    pub build_time: Duration,
    pub error: Option<String>,
}

const BENCH_SIZE: usize = 200;
const BENCH_PATH_LIMIT: u128 = 10_000;

fn bench_spec(i: usize, attempt: u64) -> GenSpec {
    let seed = (i as u64) * 1000 + attempt;
    let j = i / 4;
    match i % 4 {
        0 => {
            let layers = 3 + j % 4;
            GenSpec::Layered {
                layers,
                width: 2 + (j / 2) % 3,
                density: 0.5 + 0.1 * (j % 6) as f64,
                seed,
                k: Some(2 + (i / 3) % (layers - 2)),
                costs: CostModel::Uniform,
            }
        }
        2 => GenSpec::Bipartite {
            a: 2 + j % 4,
            b: 2 + (j / 4) % 4,
            density: 0.5 + 0.1 * (j % 6) as f64,
            seed,
            k: Some(1),
        },
        // Dense random DAGs; unit costs make fractional optima common.
        _ => GenSpec::Random {
            n: 8 + j % 5,
            p: 0.4 + 0.1 * (j % 5) as f64,
            k: 3 + (i / 2) % 2,
            seed,
            costs: if i % 4 == 3 { CostModel::Unit } else { CostModel::Uniform },
        },
    }
}

/// Benchmark specs; a spec is reseeded until its k-path count is at most
/// 10^4.
pub fn bench_specs() -> Vec<GenSpec> {
    (0..BENCH_SIZE)
        .map(|i| {
            (0..)
                .map(|attempt| bench_spec(i, attempt))
                .find(|s| count_k_paths(&generate(s).unwrap().instance) <= BENCH_PATH_LIMIT)
                .unwrap()
        })
        .collect()
}

pub fn lp_suite() -> &'static LpSuite {
    static SUITE: OnceLock<LpSuite> = OnceLock::new();
    SUITE.get_or_init(|| {
        let start = Instant::now();
        let mut instances = Vec::with_capacity(BENCH_SIZE);
        let mut error = None;
        for spec in bench_specs() {
            let instance = generate(&spec).unwrap().instance;
            let solved = solve_lp(&instance, &LpOptions::default())
                .map_err(|e| e.to_string())
                .and_then(|lp| full_lp(&instance).map(|f| (lp, f)).map_err(|e| e.to_string()));
            match solved {
                Ok((lp, full)) => instances.push(BenchInstance {
                    spec,
                    instance,
                    lp,
                    full,
                }),
                Err(e) => {
                    error = Some(format!("{spec}: {e}"));
                    break;
                }
            }
        }
        LpSuite {
            instances,
            build_time: start.elapsed(),
            error,
        }
    })
}

pub fn criterion_8() -> CriterionOutcome {
    let start = Instant::now();
    let suite = lp_suite();
    if let Some(e) = &suite.error {
        return outcome(8, "LP correctness", start, false, e.clone());
    }
    let mut worst: f64 = 0.0;
    let mut ok = suite.instances.len() == BENCH_SIZE;
    for b in &suite.instances {
        let scaled = (b.lp.objective - b.full.objective).abs() / (1.0 + b.full.objective);
        worst = worst.max(scaled);
        ok &= b.lp.status == LpStatus::Optimal && scaled <= 1e-6;
    }
    ok &= suite.build_time < Duration::from_secs(120);
    let mut o = outcome(
        8,
        "LP correctness",
        start,
        ok,
        format!(
            "{} instances, max |solve_lp - full_lp| / (1 + obj) = {worst:.2e}, solve time {:.1} s",
            suite.instances.len(),
            suite.build_time.as_secs_f64()
        ),
    );
    o.elapsed = o.elapsed.max(suite.build_time);
    o
}

/// Monte Carlo and exact results over the LP benchmark.
pub struct RoundingSuite {
    pub monte_carlo: Vec<MonteCarloSummary>,
    pub exact: Vec<Result<ExactResult, String>>,
}

/// Trials per instance for the rounding criteria.
pub const BENCH_TRIALS: usize = 10_000;
/// Node budget per exact solve.
pub const BENCH_BUDGET: u64 = 50_000_000;

pub fn rounding_suite() -> &'static RoundingSuite {
    static SUITE: OnceLock<RoundingSuite> = OnceLock::new();
    SUITE.get_or_init(|| {
        let dist = LabelDistribution::poly_d();
        let suite = lp_suite();
        let monte_carlo = suite
            .instances
            .iter()
            .enumerate()
            .map(|(i, b)| monte_carlo_round(&b.instance, &b.lp.x, &dist, BENCH_TRIALS, i as u64).expect("rounding"))
            .collect();
        let exact = suite
            .instances
            .iter()
            .map(|b| exact_solve(&b.instance, BENCH_BUDGET).map_err(|e| e.to_string()))
            .collect();
        RoundingSuite { monte_carlo, exact }
    })
}

pub fn criterion_9() -> CriterionOutcome {
    let start = Instant::now();
    let lp = lp_suite();
    if lp.error.is_some() {
        return outcome(9, "end-to-end ratio", start, false, "LP suite failed".into());
    }
    let rs = rounding_suite();
    let (mut ok, mut counted) = (true, 0);
    let (mut worst_mc, mut worst_exact): (f64, f64) = (0.0, 0.0);
    let mut notes = Vec::new();
    for ((b, mc), ex) in lp.instances.iter().zip(&rs.monte_carlo).zip(&rs.exact) {
        let cx = b.lp.objective;
        let bound = 0.549 * (b.instance.k() + 1) as f64 * cx;
        match ex {
            Ok(ex) => {
                ok &= ex.cost <= bound + 1e-6;
                if cx > 0.0 {
                    worst_exact = worst_exact.max(ex.cost / ((b.instance.k() + 1) as f64 * cx));
                }
            }
            Err(e) => {
                ok = false;
                notes.push(format!("{}: {e}", b.spec));
            }
        }
        if cx > 0.0 {
            counted += 1;
            let allowed = if mc.mean_cost > 0.0 {
                bound * (1.0 + 3.0 * mc.std_error / mc.mean_cost)
            } else {
                bound
            };
            ok &= mc.mean_cost <= allowed;
            worst_mc = worst_mc.max(mc.empirical_ratio);
        }
    }
    notes.insert(
        0,
        format!(
            "{counted} instances with c(x) > 0; max MC ratio {worst_mc:.4}, max OPT / ((k+1) c(x)) {worst_exact:.4}"
        ),
    );
    outcome(9, "end-to-end ratio", start, ok, notes.join("; "))
}

/// Relative slack for comparing float sums of the same costs.
const FLOAT_SLACK: f64 = 1e-12;

pub fn criterion_10() -> CriterionOutcome {
    let start = Instant::now();
    let lp = lp_suite();
    if lp.error.is_some() {
        return outcome(10, "derandomization", start, false, "LP suite failed".into());
    }
    let rs = rounding_suite();
    let d = IndepLabelDensity::poly_d();
    let (mut feasible, mut within) = (true, 0usize);
    for (b, mc) in lp.instances.iter().zip(&rs.monte_carlo) {
        let sol = derandomize(&b.instance, &b.lp.x, &d, 64);
        feasible &= sol.feasible && is_feasible(&b.instance, &sol.deleted);
        // Deterministic roundings make both sides the same float sum up to
        // last-place rounding.
        if sol.cost <= mc.mean_cost + 2.0 * mc.std_error + FLOAT_SLACK * (1.0 + mc.mean_cost) {
            within += 1;
        }
    }
    let total = lp.instances.len();
    let share = within as f64 / total.max(1) as f64;
    let ok = feasible && share >= 0.95;
    outcome(
        10,
        "derandomization",
        start,
        ok,
        format!("all feasible: {feasible}; {within}/{total} within MC mean + 2 se"),
    )
}

pub fn run_all() -> Vec<CriterionOutcome> {
    CRITERIA.iter().map(|c| c()).collect()
}

/// Criteria in order; entry `i` is criterion `i + 1`.
pub const CRITERIA: [fn() -> CriterionOutcome; 10] = [
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
];
