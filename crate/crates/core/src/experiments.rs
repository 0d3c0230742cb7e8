//! The full experimental design: four threshold scenarios, three initial
//! proportions, three binomial null models.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::dynamics::{
    self, nonsen_fraction, RuleVariant, ScenarioParams, SimConfig, Trajectory, DEFAULT_COLS,
    DEFAULT_ROWS, DEFAULT_STEPS,
};
use crate::error::{Error, Result};
use crate::lattice::Grid;
use crate::nullmodel::{
    null_median_series_with, NullModelSpec, NullSeries, DEFAULT_REALIZATIONS, PAPER_NULL_PS,
};
use crate::rng::derive_seed;
use crate::stats::{spearman, CorrelationEntry};

/// Master seed used when none is given.
pub const DEFAULT_MASTER_SEED: u64 = 42;
pub const DEFAULT_SNAPSHOTS: [usize; 4] = [0, 5, 10, 15];

const ROLE_INIT: u64 = 1;
const ROLE_NULL: u64 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioCatalogEntry {
    pub id: u8,
    pub sen_threshold: u8,
    pub nonsen_threshold: u8,
    pub description: &'static str,
}

impl ScenarioCatalogEntry {
    pub fn params(&self) -> ScenarioParams {
        ScenarioParams::new(self.sen_threshold, self.nonsen_threshold)
            .expect("catalog thresholds are in range")
            .with_label(format!("scenario {}", self.id))
    }
}

pub const SCENARIOS: [ScenarioCatalogEntry; 4] = [
    ScenarioCatalogEntry {
        id: 1,
        sen_threshold: 4,
        nonsen_threshold: 4,
        description: "segregation",
    },
    ScenarioCatalogEntry {
        id: 2,
        sen_threshold: 5,
        nonsen_threshold: 4,
        description: "direct influence of SEN students",
    },
    ScenarioCatalogEntry {
        id: 3,
        sen_threshold: 4,
        nonsen_threshold: 5,
        description: "indirect influence of SEN students",
    },
    ScenarioCatalogEntry {
        id: 4,
        sen_threshold: 5,
        nonsen_threshold: 5,
        description: "direct and indirect influence of SEN students",
    },
];

pub fn scenario(id: u8) -> Result<&'static ScenarioCatalogEntry> {
    SCENARIOS
        .iter()
        .find(|s| s.id == id)
        .ok_or(Error::UnknownScenario(id))
}

/// Initial-proportion variation label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variation {
    A,
    B,
    C,
}

impl Variation {
    pub const ALL: [Variation; 3] = [Variation::A, Variation::B, Variation::C];

    pub fn index(self) -> u64 {
        match self {
            Variation::A => 0,
            Variation::B => 1,
            Variation::C => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Variation::A => "a",
            Variation::B => "b",
            Variation::C => "c",
        }
    }
}

impl fmt::Display for Variation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" | "A" => Ok(Variation::A),
            "b" | "B" => Ok(Variation::B),
            "c" | "C" => Ok(Variation::C),
            other => Err(Error::UnknownVariation(other.to_string())),
        }
    }
}

/// Which set of initial SEN proportions the variation labels map to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ProportionSet {
    /// a = 70% SEN, b = 50%, c = 30%.
    #[default]
    Fig6,
    /// a = 60% SEN, b = 50%, c = 40%.
    Tuples,
}

impl ProportionSet {
    pub fn proportion_sen(self, v: Variation) -> f64 {
        match (self, v) {
            (_, Variation::B) => 0.5,
            (ProportionSet::Fig6, Variation::A) => 0.7,
            (ProportionSet::Fig6, Variation::C) => 0.3,
            (ProportionSet::Tuples, Variation::A) => 0.6,
            (ProportionSet::Tuples, Variation::C) => 0.4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ProportionSet::Fig6 => "fig6",
            ProportionSet::Tuples => "tuples",
        }
    }
}

/// Optional replacements for catalog-derived simulation settings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScenarioOverrides {
    pub rows: Option<usize>,
    pub cols: Option<usize>,
    pub steps: Option<usize>,
    pub proportion_sen: Option<f64>,
    pub sen_threshold: Option<u8>,
    pub nonsen_threshold: Option<u8>,
    pub rule: Option<RuleVariant>,
    pub proportions: Option<ProportionSet>,
}

/// Seed for the initial grid of a variation. Scenarios share it so that
/// scenario comparisons start from the same layout.
pub fn init_seed(master_seed: u64, variation: Variation) -> u64 {
    derive_seed(master_seed, &[ROLE_INIT, variation.index()])
}

/// Seed for the null ensemble with SEN probability `p`.
pub fn null_seed(master_seed: u64, p: f64) -> u64 {
    derive_seed(master_seed, &[ROLE_NULL, p.to_bits()])
}

pub fn scenario_config(
    scenario_id: u8,
    variation: Variation,
    master_seed: u64,
    overrides: &ScenarioOverrides,
) -> Result<SimConfig> {
    let entry = scenario(scenario_id)?;
    let params = ScenarioParams::new(
        overrides.sen_threshold.unwrap_or(entry.sen_threshold),
        overrides.nonsen_threshold.unwrap_or(entry.nonsen_threshold),
    )?
    .with_rule(overrides.rule.unwrap_or_default())
    .with_label(format!("scenario {scenario_id}{variation}"));
    let proportions = overrides.proportions.unwrap_or_default();
    let config = SimConfig {
        rows: overrides.rows.unwrap_or(DEFAULT_ROWS),
        cols: overrides.cols.unwrap_or(DEFAULT_COLS),
        steps: overrides.steps.unwrap_or(DEFAULT_STEPS),
        proportion_sen: overrides
            .proportion_sen
            .unwrap_or_else(|| proportions.proportion_sen(variation)),
        params,
        seed: init_seed(master_seed, variation),
    };
    config.validate()?;
    Ok(config)
}

pub fn run_scenario(
    scenario_id: u8,
    variation: Variation,
    master_seed: u64,
    overrides: &ScenarioOverrides,
) -> Result<Trajectory> {
    dynamics::run(&scenario_config(
        scenario_id,
        variation,
        master_seed,
        overrides,
    )?)
}

/// One row of a correlation table: which scenario and variation it holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeriesKey {
    pub scenario: u8,
    pub variation: Variation,
}

/// A table cell. Degenerate inputs are kept as `Undefined`, never as zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Correlation {
    Defined(CorrelationEntry),
    Undefined,
}

impl Correlation {
    pub fn entry(&self) -> Option<&CorrelationEntry> {
        match self {
            Correlation::Defined(e) => Some(e),
            Correlation::Undefined => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTable {
    pub rows: Vec<SeriesKey>,
    pub null_ps: Vec<f64>,
    /// `cells[row][column]`, columns in `null_ps` order.
    pub cells: Vec<Vec<Correlation>>,
}

impl CorrelationTable {
    pub fn shape(&self) -> (usize, usize) {
        (self.rows.len(), self.null_ps.len())
    }

    pub fn get(&self, key: SeriesKey, null_p: f64) -> Option<&Correlation> {
        let r = self.rows.iter().position(|k| *k == key)?;
        let c = self.null_ps.iter().position(|&p| p == null_p)?;
        Some(&self.cells[r][c])
    }
}

/// Correlates each series with precomputed null median series.
pub fn correlation_table_from_nulls(
    series: &[(SeriesKey, Vec<f64>)],
    nulls: &[NullSeries],
) -> Result<CorrelationTable> {
    let mut cells = Vec::with_capacity(series.len());
    for (_, xs) in series {
        let mut row = Vec::with_capacity(nulls.len());
        for null in nulls {
            if xs.len() != null.medians.len() {
                return Err(Error::LengthMismatch {
                    left: xs.len(),
                    right: null.medians.len(),
                });
            }
            if xs.len() < 3 {
                return Err(Error::TooFewValues {
                    needed: 3,
                    actual: xs.len(),
                });
            }
            let cell = match spearman(xs, &null.medians) {
                Ok(entry) => Correlation::Defined(entry),
                Err(Error::UndefinedCorrelation(_)) => Correlation::Undefined,
                Err(e) => return Err(e),
            };
            row.push(cell);
        }
        cells.push(row);
    }
    Ok(CorrelationTable {
        rows: series.iter().map(|(k, _)| *k).collect(),
        null_ps: nulls.iter().map(|n| n.p).collect(),
        cells,
    })
}

/// Runs each null ensemble, then correlates every series against its medians.
pub fn correlation_table(
    series: &[(SeriesKey, Vec<f64>)],
    null_specs: &[NullModelSpec],
) -> Result<CorrelationTable> {
    let nulls = null_specs
        .iter()
        .map(|s| null_median_series_with(s, true))
        .collect::<Result<Vec<_>>>()?;
    correlation_table_from_nulls(series, &nulls)
}

/// How settled the end of a trajectory is.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Convergence {
    /// Final grid equals the one before it.
    pub fixed_point: bool,
    /// Final grid equals the one two steps back; `None` for one-step runs.
    pub two_cycle: Option<bool>,
    /// Change in nonSEN fraction over the last step.
    pub last_delta: f64,
}

pub fn convergence_diagnostic(trajectory: &Trajectory) -> Result<Convergence> {
    let g = &trajectory.grids;
    let steps = trajectory.steps();
    if steps < 1 {
        return Err(Error::TrajectoryTooShort { steps, needed: 1 });
    }
    let last = &g[steps];
    Ok(Convergence {
        fixed_point: *last == g[steps - 1],
        two_cycle: (steps >= 2).then(|| *last == g[steps - 2]),
        last_delta: (nonsen_fraction(last) - nonsen_fraction(&g[steps - 1])).abs(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReproductionOptions {
    pub rows: usize,
    pub cols: usize,
    pub steps: usize,
    pub proportions: ProportionSet,
    pub rule: RuleVariant,
    pub null_ps: Vec<f64>,
    pub realizations: usize,
    pub snapshot_times: Vec<usize>,
    pub parallel: bool,
}

impl Default for ReproductionOptions {
    fn default() -> Self {
        Self {
            rows: DEFAULT_ROWS,
            cols: DEFAULT_COLS,
            steps: DEFAULT_STEPS,
            proportions: ProportionSet::Fig6,
            rule: RuleVariant::Literal,
            null_ps: PAPER_NULL_PS.to_vec(),
            realizations: DEFAULT_REALIZATIONS,
            snapshot_times: DEFAULT_SNAPSHOTS.to_vec(),
            parallel: true,
        }
    }
}

impl ReproductionOptions {
    fn overrides(&self) -> ScenarioOverrides {
        ScenarioOverrides {
            rows: Some(self.rows),
            cols: Some(self.cols),
            steps: Some(self.steps),
            rule: Some(self.rule),
            proportions: Some(self.proportions),
            ..Default::default()
        }
    }

    /// Null spec matching the simulation: one trial per cell, one time
    /// point per recorded grid.
    pub fn null_spec(&self, p: f64, master_seed: u64) -> NullModelSpec {
        NullModelSpec {
            p,
            n_cells: self.rows * self.cols,
            n_steps: self.steps + 1,
            realizations: self.realizations,
            seed: null_seed(master_seed, p),
        }
    }
}

/// Everything needed to redraw the figures and tables.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportBundle {
    pub master_seed: u64,
    pub options: ReproductionOptions,
    /// nonSEN counts per time point.
    pub series: BTreeMap<SeriesKey, Vec<usize>>,
    pub snapshots: BTreeMap<(SeriesKey, usize), Grid>,
    pub nulls: Vec<NullSeries>,
    /// Scenarios 1-4 at variation b.
    pub table1: CorrelationTable,
    /// Scenarios 1-4 at variations a and c.
    pub table2: CorrelationTable,
    pub convergence: BTreeMap<SeriesKey, Convergence>,
}

impl ReportBundle {
    pub fn n_cells(&self) -> usize {
        self.options.rows * self.options.cols
    }

    /// nonSEN percentages (0-100) for one series.
    pub fn percentages(&self, key: SeriesKey) -> Option<Vec<f64>> {
        let n = self.n_cells() as f64;
        self.series
            .get(&key)
            .map(|c| c.iter().map(|&v| 100.0 * v as f64 / n).collect())
    }
}

fn as_f64(counts: &[usize]) -> Vec<f64> {
    counts.iter().map(|&c| c as f64).collect()
}

pub fn full_reproduction(master_seed: u64, options: &ReproductionOptions) -> Result<ReportBundle> {
    let overrides = options.overrides();
    let keys: Vec<SeriesKey> = SCENARIOS
        .iter()
        .flat_map(|s| {
            Variation::ALL.map(|variation| SeriesKey {
                scenario: s.id,
                variation,
            })
        })
        .collect();

    let simulate = |k: &SeriesKey| run_scenario(k.scenario, k.variation, master_seed, &overrides);
    let trajectories: Vec<Trajectory> = if options.parallel {
        keys.par_iter().map(simulate).collect::<Result<_>>()?
    } else {
        keys.iter().map(simulate).collect::<Result<_>>()?
    };

    let nulls = options
        .null_ps
        .iter()
        .map(|&p| null_median_series_with(&options.null_spec(p, master_seed), options.parallel))
        .collect::<Result<Vec<_>>>()?;

    let mut series = BTreeMap::new();
    let mut snapshots = BTreeMap::new();
    let mut convergence = BTreeMap::new();
    for (key, traj) in keys.iter().zip(&trajectories) {
        series.insert(*key, traj.nonsen_counts.clone());
        for &t in &options.snapshot_times {
            if let Some(g) = traj.grids.get(t) {
                snapshots.insert((*key, t), g.clone());
            }
        }
        if traj.steps() >= 1 {
            convergence.insert(*key, convergence_diagnostic(traj)?);
        }
    }

    let rows_for = |variations: &[Variation]| -> Vec<(SeriesKey, Vec<f64>)> {
        SCENARIOS
            .iter()
            .flat_map(|s| {
                variations.iter().map(move |&variation| SeriesKey {
                    scenario: s.id,
                    variation,
                })
            })
            .map(|k| (k, as_f64(&series[&k])))
            .collect()
    };
    let table1 = correlation_table_from_nulls(&rows_for(&[Variation::B]), &nulls)?;
    let table2 = correlation_table_from_nulls(&rows_for(&[Variation::A, Variation::C]), &nulls)?;

    Ok(ReportBundle {
        master_seed,
        options: options.clone(),
        series,
        snapshots,
        nulls,
        table1,
        table2,
        convergence,
    })
}
