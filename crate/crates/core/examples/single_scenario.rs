// Runs one scenario on the default 100x100 torus and prints the nonSEN
// percentage at every step.
//
//     cargo run --example single_scenario -- 2 a 42

use empathy_ca::experiments::{convergence_diagnostic, run_scenario, ScenarioOverrides};
use empathy_ca::Variation;

pub fn run_example() -> empathy_ca::Result<()> {
    show(1, Variation::B, 42)
}

fn show(scenario: u8, variation: Variation, seed: u64) -> empathy_ca::Result<()> {
    let traj = run_scenario(scenario, variation, seed, &ScenarioOverrides::default())?;
    let p = &traj.config.params;
    println!(
        "scenario {scenario}{variation}: thresholds ({}, {}), {}% SEN at start",
        p.sen_threshold,
        p.nonsen_threshold,
        100.0 * traj.config.proportion_sen
    );
    for (t, frac) in traj.nonsen_fractions().iter().enumerate() {
        let bar = "#".repeat((frac * 50.0).round() as usize);
        println!("t={t:>2} {:>6.2}% {bar}", 100.0 * frac);
    }
    let d = convergence_diagnostic(&traj)?;
    println!(
        "fixed point: {}, two-cycle: {:?}, last change {:.4}",
        d.fixed_point, d.two_cycle, d.last_delta
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> empathy_ca::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let scenario: u8 = args.first().and_then(|s| s.parse().ok()).unwrap_or(1);
    let variation: Variation = args
        .get(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(Variation::B);
    let seed: u64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(42);
    show(scenario, variation, seed)
}
