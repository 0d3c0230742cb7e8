//! A two-state opinion cellular automaton on a torus, in the Schelling
//! tradition, plus the Monte Carlo null models and rank correlations used to
//! tell its trajectories apart from chance.
//!
//! The pieces, bottom up:
//!
//! * [`lattice`]: torus grids and Moore-neighborhood counts
//! * [`dynamics`]: the threshold update rule, synchronous steps, seeded runs
//! * [`nullmodel`]: binomial null ensembles and their per-step medians
//! * [`stats`]: Spearman's rho with tie-aware ranks and t-approximation p-values
//! * [`experiments`]: scenario catalogs and the full reproduction pipeline
//! * [`io`] and [`cli`]: file formats and the command-line front end
//!
//! All randomness comes from [`rng::SplitMix64`], so every result is a pure
//! function of its seed.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod io;
pub mod lattice;
pub mod nullmodel;
pub mod rng;
pub mod stats;

pub use dynamics::{
    init_grid, next_state, nonsen_fraction, run, step, RuleVariant, ScenarioParams, SimConfig,
    Trajectory,
};
pub use error::{Error, Result};
pub use experiments::{
    full_reproduction, run_scenario, ReportBundle, ReproductionOptions, Variation,
};
pub use lattice::{CellState, Grid, NeighborCounts};
pub use nullmodel::{null_median_series, null_realization, NullModelSpec, NullSeries};
pub use stats::{spearman_pvalue, spearman_rho, CorrelationEntry};
