//! The `ded` command line. [`run`] parses arguments, dispatches and maps
//! every failure to an exit code: 2 parse or validation, 3 numerical, 4 node
//! budget. `verify` exits 1 when a criterion fails.

mod report;

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use report::{InstanceSummary, RunReport};

use crate::dist::{
    consistency_report, lower_bound_certificate, sup_ratio, AtomicUniform, CosineCertificate, DistError, IndepLabelDensity,
    CONSISTENCY_TOL,
};
use crate::exact::{exact_solve, ExactError};
use crate::generate::{generate, GenError, GenSpec};
use crate::graph::{is_feasible, DagInstance, GraphError};
use crate::io::{emit_instance, parse_instance, InstanceError};
use crate::lp::{solve_lp, LpError, LpOptions, LpStatus};
use crate::rounding::{
    derandomize, detect_structure, monte_carlo_round, Bipartition, LabelDistribution, RoundingError,
};

#[derive(Debug, Parser)]
#[command(name = "ded", version, about = "Delete edges of a weighted DAG so no k-edge path survives")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the covering LP by row generation.
    Solve {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Solve the LP, then round it.
    Round {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = DistArg::Polyd)]
        dist: DistArg,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Replace sampling by conditional expectations.
        #[arg(long)]
        derandomize: bool,
        /// Candidate labels per vertex when derandomizing.
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Exact optimum by branch-and-bound.
    Exact {
        #[command(flatten)]
        input: InputArgs,
        /// Search nodes before giving up.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Difference CDF and its ratio maximum for a label density.
    AnalyzeDist {
        #[arg(long, value_enum, default_value_t = DensityArg::Polyd)]
        dist: DensityArg,
        /// Write `t,F(t),F(t)/(t+1)` rows here.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = 2001)]
        points: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Evaluate a cosine certificate given as `a:t,a:t,...`.
    LowerBound {
        #[arg(long)]
        terms: String,
        /// Also check the integration-by-parts identity for uniform and polyd.
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the acceptance suite.
    Verify {
        /// Comma-separated criterion numbers; all when omitted.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
    /// Write a generated instance file.
    Generate {
        #[arg(long = "gen")]
        spec: String,
        /// Destination; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct InputArgs {
    /// Instance file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Generator spec such as `layered:L=4,width=3,density=1,seed=7`.
    #[arg(long = "gen")]
    spec: Option<String>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Also write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Record wall time in the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistArg {
    Uniform,
    Polyd,
    Bipartite,
    AutoStructured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DensityArg {
    Uniform,
    Polyd,
}

impl DensityArg {
    fn density(self) -> IndepLabelDensity {
        match self {
            Self::Uniform => IndepLabelDensity::uniform(),
            Self::Polyd => IndepLabelDensity::poly_d(),
        }
    }
}

/// A failure with its exit code class.
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numerical(String),
    Budget(String, Box<RunReport>),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            Self::Validation(_) => 2,
            Self::Numerical(_) => 3,
            Self::Budget(..) => 4,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Self::Validation(_) => "validation",
            Self::Numerical(_) => "numerical",
            Self::Budget(..) => "budget",
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::Validation(m) | Self::Numerical(m) | Self::Budget(m, _) => m,
        }
    }

    /// One JSON object on one line.
    pub fn line(&self) -> String {
        serde_json::json!({ "error": { "code": self.code(), "kind": self.kind(), "message": self.message() } })
            .to_string()
    }
}

macro_rules! validation {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Validation(e.to_string())
            }
        }
    )*};
}
validation!(InstanceError, GenError, GraphError, std::io::Error);

impl From<LpError> for CliError {
    fn from(e: LpError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<DistError> for CliError {
    fn from(e: DistError) -> Self {
        match e {
            DistError::CertificationFailed { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<RoundingError> for CliError {
    fn from(e: RoundingError) -> Self {
        match e {
            RoundingError::InfeasibleInput(_) => CliError::Numerical(e.to_string()),
            RoundingError::Dist(d) => d.into(),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            if let CliError::Budget(_, report) = &e {
                print!("{}", report.to_json());
            }
            eprintln!("{}", e.line());
            e.code()
        }
    }
}

fn load(input: &InputArgs) -> Result<(DagInstance, Option<Vec<bool>>, String), CliError> {
    match (&input.input, &input.spec) {
        (Some(path), None) => Ok((parse_instance(path)?, None, format!("file:{}", path.display()))),
        (None, Some(spec)) => {
            let parsed: GenSpec = spec.parse()?;
            let g = generate(&parsed)?;
            Ok((g.instance, g.bipartition, format!("gen:{parsed}")))
        }
        _ => Err(CliError::Validation("give exactly one of --input and --gen".into())),
    }
}

fn emit(report: &mut RunReport, out: &OutputArgs, start: Instant) -> Result<(), CliError> {
    if out.timing {
        report.wall_time_s = Some(start.elapsed().as_secs_f64());
    }
    let json = report.to_json();
    if let Some(path) = &out.report {
        fs::write(path, &json)?;
    }
    print!("{json}");
    Ok(())
}

fn execute(command: Command) -> Result<i32, CliError> {
    let start = Instant::now();
    match command {
        Command::Solve { input, out } => {
            let (inst, _, source) = load(&input)?;
            let lp = solve_lp(&inst, &LpOptions::default())?;
            let mut r = RunReport::new("solve", "lp");
            r.instance = Some(InstanceSummary::new(source, &inst));
            r.status = status_name(lp.status).into();
            r.lp_objective = Some(lp.objective);
            r.x = Some(lp.x);
            r.detail("rows_added", lp.iterations);
            emit(&mut r, &out, start)?;
            Ok(0)
        }
        Command::Round {
            input,
            dist,
            trials,
            seed,
            derandomize: derand,
            grid,
            out,
        } => {
            let (inst, parts, source) = load(&input)?;
            let mut r = round(&inst, parts, dist, trials, seed, derand.then_some(grid))?;
            r.instance = Some(InstanceSummary::new(source, &inst));
            emit(&mut r, &out, start)?;
            Ok(0)
        }
        Command::Exact { input, budget, out } => {
            let (inst, _, source) = load(&input)?;
            let mut r = RunReport::new("exact", "branch-and-bound");
            r.instance = Some(InstanceSummary::new(source, &inst));
            let lp = solve_lp(&inst, &LpOptions::default())?;
            let (res, exhausted) = match exact_solve(&inst, budget) {
                Ok(res) => (res, false),
                Err(ExactError::BudgetExceeded(res)) => (*res, true),
                Err(e) => return Err(CliError::Validation(e.to_string())),
            };
            let feasible = is_feasible(&inst, &res.deleted);
            r.set_solution(inst.k(), lp.objective, res.cost, res.deleted, feasible);
            r.detail("nodes_explored", res.nodes_explored);
            r.detail("certified", res.certified);
            if exhausted {
                r.status = "budget-exceeded".into();
                if out.timing {
                    r.wall_time_s = Some(start.elapsed().as_secs_f64());
                }
                if let Some(path) = &out.report {
                    fs::write(path, r.to_json())?;
                }
                return Err(CliError::Budget(format!("node budget {budget} exhausted"), Box::new(r)));
            }
            emit(&mut r, &out, start)?;
            Ok(0)
        }
        Command::AnalyzeDist { dist, csv, points, out } => {
            let d = dist.density();
            let f = d.difference_cdf();
            let s = sup_ratio(f)?;
            let mut r = RunReport::new("analyze-dist", d.name());
            r.detail("alpha", s.alpha);
            r.detail("t_star", s.t_star);
            r.detail("grid_max", s.grid_max);
            r.detail("pieces", f.num_pieces());
            r.detail("max_degree", f.max_degree());
            if let Some(path) = csv {
                let mut buf = Vec::new();
                f.write_ratio_csv(&mut buf, points)?;
                fs::write(&path, buf)?;
                r.detail("csv", path.display().to_string());
            }
            emit(&mut r, &out, start)?;
            Ok(0)
        }
        Command::LowerBound { terms, check, out } => {
            let cert = CosineCertificate::parse(&terms)?;
            let bound = lower_bound_certificate(&cert)?;
            let mut r = RunReport::new("lower-bound", "cosine-certificate");
            r.detail("terms", terms);
            r.detail("numerator", cert.numerator());
            r.detail("denominator", cert.denominator());
            r.detail("bound", bound);
            if check {
                let mut ok = true;
                for d in [IndepLabelDensity::uniform(), IndepLabelDensity::poly_d()] {
                    let rows = consistency_report(&cert, &d);
                    let worst = rows.iter().map(|row| row.error()).fold(0.0, f64::max);
                    ok &= worst <= CONSISTENCY_TOL;
                    r.detail(&format!("identity_error_{}", d.name()), worst);
                }
                r.detail("identity_holds", ok);
                if !ok {
                    r.status = "identity-failed".into();
                }
            }
            emit(&mut r, &out, start)?;
            Ok(0)
        }
        Command::Verify { only } => {
            let mut all = true;
            for (i, criterion) in crate::verify::CRITERIA.iter().enumerate() {
                if !only.is_empty() && !only.contains(&(i as u8 + 1)) {
                    continue;
                }
                let o = criterion();
                all &= o.passed;
                println!("{o}");
            }
            Ok(if all { 0 } else { 1 })
        }
        Command::Generate { spec, output } => {
            let parsed: GenSpec = spec.parse()?;
            let text = emit_instance(&generate(&parsed)?.instance);
            match output {
                Some(path) => fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(0)
        }
    }
}

fn status_name(s: LpStatus) -> &'static str {
    match s {
        LpStatus::Optimal => "optimal",
        LpStatus::IterationLimit => "iteration-limit",
    }
}

fn round(
    inst: &DagInstance,
    parts: Option<Vec<bool>>,
    dist: DistArg,
    trials: usize,
    seed: u64,
    grid: Option<usize>,
) -> Result<RunReport, CliError> {
    let lp = solve_lp(inst, &LpOptions::default())?;
    let k = inst.k();
    let (label_dist, method) = match dist {
        DistArg::Uniform => (LabelDistribution::uniform(), "uniform".to_string()),
        DistArg::Polyd => (LabelDistribution::poly_d(), "polyd".to_string()),
        DistArg::Bipartite => {
            let parts = match parts {
                Some(side) => Bipartition::new(inst, side)?,
                None => Bipartition::detect(inst)?,
            };
            (LabelDistribution::Bipartite(parts), "bipartite".to_string())
        }
        DistArg::AutoStructured => match detect_structure(&lp.x, k) {
            Some(r) if grid.is_none() => (
                LabelDistribution::Discrete(AtomicUniform::new(r)?),
                format!("structured(r={r})"),
            ),
            _ => (LabelDistribution::poly_d(), "polyd(fallback)".to_string()),
        },
    };

    let mut r = RunReport::new("round", "");
    r.status = status_name(lp.status).into();
    if let Some(g) = grid {
        let LabelDistribution::Independent(d) = &label_dist else {
            return Err(CliError::Validation("--derandomize needs an independent distribution".into()));
        };
        let d: &Arc<IndepLabelDensity> = d;
        if g < 2 {
            return Err(CliError::Validation("--grid must be at least 2".into()));
        }
        let sol = derandomize(inst, &lp.x, d, g);
        let feasible = is_feasible(inst, &sol.deleted);
        if !feasible {
            return Err(CliError::Numerical("derandomized solution leaves a k-path".into()));
        }
        r.method = format!("derandomize:{method}(grid={g})");
        r.set_solution(k, lp.objective, sol.cost, sol.deleted, feasible);
        r.detail("expected_cost", crate::rounding::expected_cost(inst, &lp.x, d));
        return Ok(r);
    }

    let mc = monte_carlo_round(inst, &lp.x, &label_dist, trials, seed)?;
    let feasible = is_feasible(inst, &mc.best.deleted);
    if !feasible {
        return Err(CliError::Numerical("rounded solution leaves a k-path".into()));
    }
    r.method = format!("round:{method}");
    r.seed = Some(seed);
    r.set_solution(k, lp.objective, mc.best.cost, mc.best.deleted, feasible);
    r.detail("trials", trials);
    r.detail("best_trial", mc.best_trial);
    r.detail("mean_cost", mc.mean_cost);
    r.detail("std_error", mc.std_error);
    r.detail("empirical_ratio", mc.empirical_ratio);
    Ok(r)
}
