//! Solve the covering LP on a generated instance and show the row
//! generation trace.

use ded::generate::{generate, GenSpec};
use ded::graph::min_weight_k_path;
use ded::lp::{solve_lp, LpOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec: GenSpec = "random:n=12,p=0.5,k=3,seed=4,costs=unit".parse()?;
    let inst = generate(&spec)?.instance;
    println!("instance {spec}: n = {}, m = {}, k = {}", inst.n(), inst.m(), inst.k());

    let sol = solve_lp(&inst, &LpOptions::default())?;
    for (round, obj) in sol.history.iter().enumerate() {
        println!("round {:>3}: master objective {obj:.6}", round + 1);
    }
    println!("status {:?}, objective {:.6}", sol.status, sol.objective);

    let fractional = sol.x.iter().filter(|v| **v > 1e-9 && **v < 1.0 - 1e-9).count();
    println!("{fractional} of {} edges are fractional", inst.m());
    // Optimality needs every k-path to carry weight at least 1.
    if let Some(p) = min_weight_k_path(&inst, &sol.x) {
        println!("lightest k-path {:?} weighs {:.9}", p.vertices, p.weight);
    }
    Ok(())
}
