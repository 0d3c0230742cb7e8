//! The opinion update rule and synchronous stepping of whole grids.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{check_dims, CellState, Grid, NeighborCounts};
use crate::rng::SplitMix64;

pub const DEFAULT_ROWS: usize = 100;
pub const DEFAULT_COLS: usize = 100;
pub const DEFAULT_STEPS: usize = 15;

/// Largest accepted threshold. Counts only reach 8, so 9 already makes
/// every comparison against it decidable.
pub const MAX_THRESHOLD: u8 = 9;

/// Which count the third clause (nonSEN -> SEN) compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum RuleVariant {
    /// nonSEN turns SEN when its nonSEN neighbors exceed the SEN threshold.
    #[default]
    Literal,
    /// nonSEN turns SEN when its SEN neighbors exceed the SEN threshold.
    AltClause3,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScenarioParams {
    pub sen_threshold: u8,
    pub nonsen_threshold: u8,
    pub rule: RuleVariant,
    pub label: Option<String>,
}

impl ScenarioParams {
    pub fn new(sen_threshold: u8, nonsen_threshold: u8) -> Result<Self> {
        for (name, v) in [
            ("sen_threshold", sen_threshold),
            ("nonsen_threshold", nonsen_threshold),
        ] {
            if v > MAX_THRESHOLD {
                return Err(Error::OutOfRange {
                    name,
                    value: v.to_string(),
                    expected: "0..=9",
                });
            }
        }
        Ok(Self {
            sen_threshold,
            nonsen_threshold,
            rule: RuleVariant::Literal,
            label: None,
        })
    }

    pub fn with_rule(mut self, rule: RuleVariant) -> Self {
        self.rule = rule;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Next state for every `(current, sen_neighbors)` pair.
    fn transition_table(&self) -> [[CellState; 9]; 2] {
        let mut table = [[CellState::NonSen; 9]; 2];
        for (s, row) in table.iter_mut().enumerate() {
            let current = if s == 1 {
                CellState::Sen
            } else {
                CellState::NonSen
            };
            for (sen, out) in row.iter_mut().enumerate() {
                *out = next_state(current, NeighborCounts::from_sen(sen as u8), self);
            }
        }
        table
    }
}

/// One application of the update rule to a single cell.
///
/// Clauses are tried in order and the first match wins:
///
/// 1. SEN and `sen < nonsen_threshold` becomes nonSEN
/// 2. nonSEN and `nonsen == nonsen_threshold` stays nonSEN
/// 3. nonSEN and `nonsen > sen_threshold` becomes SEN
///    (`sen > sen_threshold` under [`RuleVariant::AltClause3`])
/// 4. SEN and `sen == sen_threshold` stays SEN
///
/// Anything else keeps its current state.
pub fn next_state(
    current: CellState,
    counts: NeighborCounts,
    params: &ScenarioParams,
) -> CellState {
    debug_assert_eq!(counts.sen + counts.nonsen, 8);
    let clause3_count = match params.rule {
        RuleVariant::Literal => counts.nonsen,
        RuleVariant::AltClause3 => counts.sen,
    };
    match current {
        CellState::Sen if counts.sen < params.nonsen_threshold => CellState::NonSen,
        CellState::NonSen if counts.nonsen == params.nonsen_threshold => CellState::NonSen,
        CellState::NonSen if clause3_count > params.sen_threshold => CellState::Sen,
        CellState::Sen if counts.sen == params.sen_threshold => CellState::Sen,
        other => other,
    }
}

/// Synchronous update of every cell from the time-t grid.
pub fn step(grid: &Grid, params: &ScenarioParams) -> Grid {
    step_impl(grid, params, false)
}

/// Same result as [`step`], with rows processed in parallel.
pub fn step_parallel(grid: &Grid, params: &ScenarioParams) -> Grid {
    step_impl(grid, params, true)
}

fn step_impl(grid: &Grid, params: &ScenarioParams, parallel: bool) -> Grid {
    let (rows, cols) = (grid.rows(), grid.cols());
    let cells = grid.cells();
    let table = params.transition_table();

    // Horizontal three-cell SEN sums with wraparound, one row at a time.
    let mut hsum = vec![0u8; cells.len()];
    for (src, dst) in cells.chunks_exact(cols).zip(hsum.chunks_exact_mut(cols)) {
        for c in 0..cols {
            let left = src[(c + cols - 1) % cols].as_u8();
            let right = src[(c + 1) % cols].as_u8();
            dst[c] = left + src[c].as_u8() + right;
        }
    }

    let update_row = |r: usize, out: &mut [CellState]| {
        let up = &hsum[((r + rows - 1) % rows) * cols..][..cols];
        let mid = &hsum[r * cols..][..cols];
        let down = &hsum[((r + 1) % rows) * cols..][..cols];
        let here = &cells[r * cols..][..cols];
        for c in 0..cols {
            let sen = up[c] + mid[c] + down[c] - here[c].as_u8();
            out[c] = table[here[c] as usize][sen as usize];
        }
    };

    let mut next = vec![CellState::NonSen; cells.len()];
    if parallel {
        next.par_chunks_mut(cols)
            .enumerate()
            .for_each(|(r, out)| update_row(r, out));
    } else {
        next.chunks_mut(cols)
            .enumerate()
            .for_each(|(r, out)| update_row(r, out));
    }
    Grid::from_parts_unchecked(rows, cols, next)
}

/// A grid with exactly `round(proportion_sen * rows * cols)` SEN cells at
/// positions chosen by a seeded shuffle.
pub fn init_grid(rows: usize, cols: usize, proportion_sen: f64, seed: u64) -> Result<Grid> {
    check_dims(rows, cols)?;
    check_proportion(proportion_sen)?;
    let n = rows * cols;
    let n_sen = (proportion_sen * n as f64).round() as usize;
    let mut cells: Vec<CellState> = (0..n)
        .map(|k| {
            if k < n_sen {
                CellState::Sen
            } else {
                CellState::NonSen
            }
        })
        .collect();
    SplitMix64::new(seed).shuffle(&mut cells);
    Grid::new(rows, cols, cells)
}

fn check_proportion(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange {
            name: "proportion_sen",
            value: p.to_string(),
            expected: "0.0..=1.0",
        });
    }
    Ok(())
}

pub fn nonsen_fraction(grid: &Grid) -> f64 {
    grid.nonsen_count() as f64 / grid.len() as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub rows: usize,
    pub cols: usize,
    pub steps: usize,
    pub proportion_sen: f64,
    pub params: ScenarioParams,
    pub seed: u64,
}

impl SimConfig {
    /// 100x100 grid, 15 steps, half SEN.
    pub fn new(params: ScenarioParams, seed: u64) -> Self {
        Self {
            rows: DEFAULT_ROWS,
            cols: DEFAULT_COLS,
            steps: DEFAULT_STEPS,
            proportion_sen: 0.5,
            params,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_dims(self.rows, self.cols)?;
        check_proportion(self.proportion_sen)?;
        ScenarioParams::new(self.params.sen_threshold, self.params.nonsen_threshold)?;
        Ok(())
    }
}

/// Grids and nonSEN counts for `t = 0..=steps`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub grids: Vec<Grid>,
    pub nonsen_counts: Vec<usize>,
    pub config: SimConfig,
}

impl Trajectory {
    pub fn steps(&self) -> usize {
        self.grids.len() - 1
    }

    pub fn final_grid(&self) -> &Grid {
        self.grids.last().expect("a trajectory always holds t = 0")
    }

    pub fn nonsen_fractions(&self) -> Vec<f64> {
        self.grids.iter().map(nonsen_fraction).collect()
    }
}

pub fn run(config: &SimConfig) -> Result<Trajectory> {
    config.validate()?;
    let start = init_grid(config.rows, config.cols, config.proportion_sen, config.seed)?;
    Ok(run_from(start, config.clone()))
}

/// Evolves a given initial grid for `config.steps` steps. The grid's own
/// dimensions take precedence over `config.rows`/`config.cols`.
pub fn run_from(start: Grid, mut config: SimConfig) -> Trajectory {
    config.rows = start.rows();
    config.cols = start.cols();
    let mut grids = Vec::with_capacity(config.steps + 1);
    grids.push(start);
    for _ in 0..config.steps {
        let next = step(grids.last().unwrap(), &config.params);
        grids.push(next);
    }
    let nonsen_counts = grids.iter().map(Grid::nonsen_count).collect();
    Trajectory {
        grids,
        nonsen_counts,
        config,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(sen: u8) -> NeighborCounts {
        NeighborCounts::from_sen(sen)
    }

    fn params(sen: u8, nonsen: u8) -> ScenarioParams {
        ScenarioParams::new(sen, nonsen).unwrap()
    }

    #[test]
    fn rule_examples() {
        use CellState::*;
        assert_eq!(next_state(Sen, counts(3), &params(4, 4)), NonSen);
        assert_eq!(next_state(NonSen, counts(2), &params(5, 4)), Sen);
        assert_eq!(next_state(Sen, counts(4), &params(5, 4)), Sen);
        // Clause 2 (5 == 5) shadows clause 3 (5 > 4).
        assert_eq!(next_state(NonSen, counts(3), &params(4, 5)), NonSen);
        // Clause 1 (4 < 5) shadows clause 4 (4 == 4).
        assert_eq!(next_state(Sen, counts(4), &params(4, 5)), NonSen);
    }

    #[test]
    fn alternate_clause_three() {
        use CellState::*;
        let alt = params(4, 4).with_rule(RuleVariant::AltClause3);
        assert_eq!(next_state(NonSen, counts(0), &params(4, 4)), Sen);
        assert_eq!(next_state(NonSen, counts(0), &alt), NonSen);
        assert_eq!(next_state(NonSen, counts(5), &alt), Sen);
    }

    #[test]
    fn thresholds_are_bounded() {
        assert!(ScenarioParams::new(9, 9).is_ok());
        assert!(matches!(
            ScenarioParams::new(10, 4),
            Err(Error::OutOfRange {
                name: "sen_threshold",
                ..
            })
        ));
    }

    #[test]
    fn homogeneous_grids() {
        let sen = Grid::filled(6, 6, CellState::Sen).unwrap();
        let non = Grid::filled(6, 6, CellState::NonSen).unwrap();
        assert_eq!(step(&sen, &params(4, 4)), sen);
        assert_eq!(step(&non, &params(4, 4)), sen);
        for (s, n) in [(4, 4), (5, 4), (4, 5), (5, 5)] {
            assert_eq!(step(&sen, &params(s, n)), sen);
        }
    }

    #[test]
    fn step_leaves_input_alone() {
        let g = init_grid(5, 5, 0.5, 1).unwrap();
        let copy = g.clone();
        let _ = step(&g, &params(4, 4));
        assert_eq!(g, copy);
    }

    #[test]
    fn init_counts_are_exact() {
        assert_eq!(init_grid(10, 10, 0.0, 123).unwrap().sen_count(), 0);
        assert_eq!(init_grid(100, 100, 0.5, 42).unwrap().sen_count(), 5000);
        let a = init_grid(100, 100, 0.7, 7).unwrap();
        assert_eq!(a.sen_count(), 7000);
        assert_eq!(a, init_grid(100, 100, 0.7, 7).unwrap());
        assert_ne!(a, init_grid(100, 100, 0.7, 8).unwrap());
        assert_eq!(nonsen_fraction(&init_grid(100, 100, 0.6, 3).unwrap()), 0.4);
        assert!(init_grid(10, 10, 1.5, 0).is_err());
        assert!(init_grid(2, 10, 0.5, 0).is_err());
    }

    #[test]
    fn fractions() {
        assert_eq!(
            nonsen_fraction(&Grid::filled(3, 3, CellState::Sen).unwrap()),
            0.0
        );
        assert_eq!(
            nonsen_fraction(&Grid::filled(3, 3, CellState::NonSen).unwrap()),
            1.0
        );
    }

    #[test]
    fn run_lengths() {
        let mut cfg = SimConfig::new(params(4, 4), 9);
        cfg.steps = 0;
        let t = run(&cfg).unwrap();
        assert_eq!(t.grids.len(), 1);
        assert_eq!(t.nonsen_counts.len(), 1);

        let cfg = SimConfig::new(params(4, 4), 9);
        let t = run(&cfg).unwrap();
        assert_eq!(t.nonsen_counts.len(), 16);
        assert_eq!(t, run(&cfg).unwrap());
        for (g, &n) in t.grids.iter().zip(&t.nonsen_counts) {
            assert_eq!(g.nonsen_count(), n);
        }
    }
}
