// Prints the full transition table of every catalog scenario, for both
// the literal and the alternate nonSEN -> SEN clause.

use empathy_ca::experiments::SCENARIOS;
use empathy_ca::{next_state, CellState, NeighborCounts, RuleVariant};

pub fn run_example() -> empathy_ca::Result<()> {
    for rule in [RuleVariant::Literal, RuleVariant::AltClause3] {
        println!("{rule:?}");
        println!("              SEN neighbors: 0 1 2 3 4 5 6 7 8");
        for s in &SCENARIOS {
            let params = s.params().with_rule(rule);
            for current in [CellState::NonSen, CellState::Sen] {
                let row: Vec<String> = (0..=8)
                    .map(|sen| {
                        next_state(current, NeighborCounts::from_sen(sen), &params)
                            .as_u8()
                            .to_string()
                    })
                    .collect();
                println!(
                    "  scenario {} ({},{}) from {}:  {}",
                    s.id,
                    s.sen_threshold,
                    s.nonsen_threshold,
                    current.as_u8(),
                    row.join(" ")
                );
            }
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> empathy_ca::Result<()> {
    run_example()
}
