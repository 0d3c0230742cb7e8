// Median nonSEN counts of the three binomial null models, 10,000
// realizations each.

use empathy_ca::experiments::null_seed;
use empathy_ca::nullmodel::{null_median_series, NullModelSpec, PAPER_NULL_PS};

pub fn run_example() -> empathy_ca::Result<()> {
    for p in PAPER_NULL_PS {
        let spec = NullModelSpec::new(p, null_seed(42, p));
        let series = null_median_series(&spec)?;
        let shown: Vec<String> = series.medians.iter().map(|m| format!("{m}")).collect();
        println!(
            "p = {p}: expected {:.0}, medians [{}]",
            spec.n_cells as f64 * (1.0 - p),
            shown.join(", ")
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> empathy_ca::Result<()> {
    run_example()
}
