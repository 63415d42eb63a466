//! Replace random labels by conditional expectations over a quantile grid
//! and compare with the expectation the random rounding achieves.

use ded::dist::IndepLabelDensity;
use ded::generate::{generate, GenSpec};
use ded::graph::is_feasible;
use ded::lp::{solve_lp, LpOptions};
use ded::rounding::{derandomize, expected_cost};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec: GenSpec = "random:n=10,p=0.8,k=4,seed=5".parse()?;
    let inst = generate(&spec)?.instance;
    let lp = solve_lp(&inst, &LpOptions::default())?;
    let d = IndepLabelDensity::poly_d();
    let expect = expected_cost(&inst, &lp.x, &d);
    println!("LP {:.4}, expected rounding cost {expect:.4}", lp.objective);
    for grid in [2, 4, 16, 64, 256] {
        let sol = derandomize(&inst, &lp.x, &d, grid);
        println!(
            "grid {grid:>3}: cost {:.1}, feasible {}",
            sol.cost,
            is_feasible(&inst, &sol.deleted)
        );
    }
    Ok(())
}
