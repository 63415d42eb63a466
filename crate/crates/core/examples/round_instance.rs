//! Round an LP solution with the uniform and polynomial label densities and
//! compare the empirical ratio with the analytic one.

use ded::dist::sup_ratio;
use ded::generate::{generate, GenSpec};
use ded::lp::{solve_lp, LpOptions};
use ded::rounding::{monte_carlo_round, LabelDistribution};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec: GenSpec = "random:n=14,p=0.8,k=2,seed=3".parse()?;
    let inst = generate(&spec)?.instance;
    let lp = solve_lp(&inst, &LpOptions::default())?;
    println!("LP objective {:.4}, k = {}", lp.objective, inst.k());

    for dist in [LabelDistribution::uniform(), LabelDistribution::poly_d()] {
        let mc = monte_carlo_round(&inst, &lp.x, &dist, 2000, 1)?;
        let LabelDistribution::Independent(d) = &dist else { unreachable!() };
        let alpha = sup_ratio(d.difference_cdf())?.alpha;
        println!(
            "{:>8}: best {:.1} (trial {}), mean {:.3} +- {:.3}, ratio {:.4} vs alpha {alpha:.4}",
            dist.name(),
            mc.best.cost,
            mc.best_trial,
            mc.mean_cost,
            mc.std_error,
            mc.empirical_ratio,
        );
    }
    Ok(())
}
