//! Exact difference CDF of a label density and the ratio it guarantees.
//! Pass `uniform` or `polyd`; writes the ratio curve to `ratio.csv`.

use std::fs::File;
use std::io::BufWriter;

use ded::dist::{builtin_density, sup_ratio};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "polyd".into());
    let d = builtin_density(&name).ok_or_else(|| format!("unknown density {name}"))?;
    let f = d.difference_cdf();
    println!(
        "{}: difference CDF has {} pieces, degree {}",
        d.name(),
        f.num_pieces(),
        f.max_degree()
    );
    for t in [-0.5, 0.0, 0.25, 0.5] {
        println!("  F({t:+.2}) = {:.10}", d.difference_cdf_at(t));
    }

    let s = sup_ratio(f)?;
    println!("sup F(t)/(t+1) = {:.10} at t = {:.6}", s.alpha, s.t_star);
    println!("grid check: {:.10} at t = {:.6}", s.grid_max, s.grid_argmax);

    f.write_ratio_csv(BufWriter::new(File::create("ratio.csv")?), 401)?;
    println!("wrote ratio.csv");
    Ok(())
}
