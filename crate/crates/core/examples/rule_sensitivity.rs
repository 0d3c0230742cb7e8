// Final nonSEN fraction of every scenario and variation under the literal
// rule and under the alternate nonSEN -> SEN clause, averaged over a few
// master seeds.

use empathy_ca::experiments::{run_scenario, ScenarioOverrides, SCENARIOS};
use empathy_ca::{RuleVariant, Variation};

const SEEDS: [u64; 5] = [1, 2, 3, 4, 5];

pub fn run_example() -> empathy_ca::Result<()> {
    println!("scenario  variation  literal  alternate");
    for s in &SCENARIOS {
        for v in Variation::ALL {
            let mut means = [0.0; 2];
            for (k, rule) in [RuleVariant::Literal, RuleVariant::AltClause3]
                .into_iter()
                .enumerate()
            {
                let o = ScenarioOverrides {
                    rule: Some(rule),
                    ..Default::default()
                };
                for seed in SEEDS {
                    let t = run_scenario(s.id, v, seed, &o)?;
                    means[k] += t.nonsen_fractions().last().unwrap() / SEEDS.len() as f64;
                }
            }
            println!(
                "{:>8}  {:>9}  {:>7.4}  {:>9.4}",
                s.id, v, means[0], means[1]
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> empathy_ca::Result<()> {
    run_example()
}
