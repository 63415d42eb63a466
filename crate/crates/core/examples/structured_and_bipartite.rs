//! Special cases: LP values confined to one structured interval rounded with
//! atomic labels, and bipartite DAGs rounded with a shared uniform label.

use ded::dist::AtomicUniform;
use ded::generate::{generate, GenSpec};
use ded::lp::{solve_lp, LpOptions};
use ded::rounding::{
    detect_structure, monte_carlo_round, per_edge_cut_probability, structured_interval, structured_round, trial_rng,
    Bipartition, LabelDistribution,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k = 3;
    for r in 1..=4 {
        let (lo, hi) = structured_interval(r, k);
        let p = per_edge_cut_probability(&LabelDistribution::Discrete(AtomicUniform::new(r)?), lo, k);
        println!("r = {r}: x in [{lo:.4}, {hi:.4}) cut with probability {p:.4}");
    }

    let inst = generate(&"path:k=3".parse::<GenSpec>()?)?.instance;
    let lp = solve_lp(&inst, &LpOptions::default())?;
    println!("path LP x = {:?}, structure r = {:?}", lp.x, detect_structure(&lp.x, k));
    let (r, sol) = structured_round(&inst, &lp.x, &mut trial_rng(0, 0))?;
    println!("structured rounding with r = {r}: deleted {:?}, cost {}", sol.deleted, sol.cost);

    let g = generate(&"bipartite:a=4,b=5,density=0.6,seed=3".parse::<GenSpec>()?)?;
    let inst = g.instance;
    let parts = Bipartition::new(&inst, g.bipartition.unwrap())?;
    let lp = solve_lp(&inst, &LpOptions::default())?;
    let mc = monte_carlo_round(&inst, &lp.x, &LabelDistribution::Bipartite(parts), 2000, 5)?;
    println!(
        "bipartite k = {}: LP {:.3}, best {:.1}, empirical ratio {:.4} (guarantee 0.5)",
        inst.k(),
        lp.objective,
        mc.best.cost,
        mc.empirical_ratio
    );
    Ok(())
}
