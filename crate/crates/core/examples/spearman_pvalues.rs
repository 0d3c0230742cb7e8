// Spearman's rho between two short series, and the t-approximation
// p-values for a handful of published (rho, p) pairs at n = 16.

use empathy_ca::spearman_pvalue;
use empathy_ca::stats::{average_ranks, spearman};

pub fn run_example() -> empathy_ca::Result<()> {
    let x = [5.0, 1.0, 4.0, 4.0, 2.0, 9.0];
    let y = [50.0, 12.0, 41.0, 39.0, 30.0, 70.0];
    println!("ranks of x: {:?}", average_ranks(&x));
    let e = spearman(&x, &y)?;
    println!("rho = {:.4}, p = {:.4} (n = {})", e.rho, e.p_value, e.n);

    println!("\n   rho   published  computed");
    for (rho, published) in [
        (0.2532, 0.3440),
        (0.0645, 0.8121),
        (-0.4324, 0.0943),
        (-0.4707, 0.0656),
        (-0.5515, 0.0267),
        (-0.4866, 0.0559),
    ] {
        println!(
            "{rho:>7.4}   {published:.4}     {:.4}",
            spearman_pvalue(rho, 16)?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> empathy_ca::Result<()> {
    run_example()
}
