//! LP bound, rounding and exact optimum side by side on small instances.

use ded::exact::{count_k_paths, exact_solve};
use ded::generate::{generate, GenSpec};
use ded::lp::{solve_lp, LpOptions};
use ded::rounding::{monte_carlo_round, LabelDistribution};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = LabelDistribution::poly_d();
    println!("{:>40} {:>6} {:>9} {:>7} {:>7} {:>8}", "instance", "paths", "LP", "round", "OPT", "nodes");
    for seed in 0..8 {
        let spec: GenSpec = format!("random:n=10,p=0.6,k=3,seed={seed},costs=unit").parse()?;
        let inst = generate(&spec)?.instance;
        let lp = solve_lp(&inst, &LpOptions::default())?;
        let mc = monte_carlo_round(&inst, &lp.x, &d, 500, seed)?;
        let opt = exact_solve(&inst, 10_000_000)?;
        println!(
            "{:>40} {:>6} {:>9.4} {:>7.1} {:>7.1} {:>8}",
            spec.to_string(),
            count_k_paths(&inst),
            lp.objective,
            mc.best.cost,
            opt.cost,
            opt.nodes_explored
        );
    }
    Ok(())
}
