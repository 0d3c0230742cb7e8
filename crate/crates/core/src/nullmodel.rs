//! Binomial null models: each time point is a fresh grid of independent
//! Bernoulli(p) SEN draws, and only its nonSEN count is kept.
//!
//! Counts are drawn directly from Binomial(n_cells, 1 - p) by inverting a
//! cumulative table built once per `(n_cells, p)`, which is exact in
//! distribution and far cheaper than one draw per cell.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::{mix64, SplitMix64};
use crate::stats::median_of_sorted;

pub const DEFAULT_CELLS: usize = 10_000;
pub const DEFAULT_NULL_STEPS: usize = 16;
pub const DEFAULT_REALIZATIONS: usize = 10_000;
/// SEN success probabilities of the three reference null models.
pub const PAPER_NULL_PS: [f64; 3] = [0.3, 0.5, 0.7];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullModelSpec {
    /// Probability that a cell is SEN.
    pub p: f64,
    pub n_cells: usize,
    pub n_steps: usize,
    pub realizations: usize,
    pub seed: u64,
}

impl NullModelSpec {
    /// 10,000 cells, 16 time points, 10,000 realizations.
    pub fn new(p: f64, seed: u64) -> Self {
        Self {
            p,
            n_cells: DEFAULT_CELLS,
            n_steps: DEFAULT_NULL_STEPS,
            realizations: DEFAULT_REALIZATIONS,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |name, value: String, expected| {
            Err(Error::OutOfRange {
                name,
                value,
                expected,
            })
        };
        if !(0.0..=1.0).contains(&self.p) {
            return bad("p", self.p.to_string(), "0.0..=1.0");
        }
        if self.n_cells < 1 {
            return bad("n_cells", self.n_cells.to_string(), ">= 1");
        }
        if self.n_steps < 2 {
            return bad("n_steps", self.n_steps.to_string(), ">= 2");
        }
        if self.realizations < 1 {
            return bad("realizations", self.realizations.to_string(), ">= 1");
        }
        Ok(())
    }

    /// Seed of the stream for one realization: `seed xor mix64(index)`.
    pub fn realization_seed(&self, index: usize) -> u64 {
        self.seed ^ mix64(index as u64)
    }
}

/// Inverse-CDF sampler for Binomial(n, q).
#[derive(Debug, Clone)]
pub struct BinomialTable {
    n: usize,
    q: f64,
    /// `cdf[k] = P(X <= k)`, with `cdf[n]` pinned to exactly 1.
    cdf: Vec<f64>,
}

impl BinomialTable {
    pub fn new(n: usize, q: f64) -> Self {
        assert!((0.0..=1.0).contains(&q), "q must be a probability");
        let cdf = if q == 0.0 {
            vec![1.0; n + 1]
        } else if q == 1.0 {
            let mut c = vec![0.0; n + 1];
            c[n] = 1.0;
            c
        } else {
            // log pmf by the ratio recurrence P(k+1)/P(k) = (n-k)/(k+1) * q/(1-q)
            let log_odds = q.ln() - (1.0 - q).ln();
            let mut log_pmf = Vec::with_capacity(n + 1);
            let mut lp = n as f64 * (1.0 - q).ln();
            log_pmf.push(lp);
            for k in 0..n {
                lp += ((n - k) as f64).ln() - ((k + 1) as f64).ln() + log_odds;
                log_pmf.push(lp);
            }
            let peak = log_pmf.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let mut acc = 0.0;
            let mut cdf: Vec<f64> = log_pmf
                .iter()
                .map(|l| {
                    acc += (l - peak).exp();
                    acc
                })
                .collect();
            let total = acc;
            for c in &mut cdf {
                *c /= total;
            }
            cdf[n] = 1.0;
            cdf
        };
        Self { n, q, cdf }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn cdf(&self) -> &[f64] {
        &self.cdf
    }

    /// Smallest `k` with `P(X <= k) > u`.
    #[inline]
    pub fn quantile(&self, u: f64) -> usize {
        self.cdf.partition_point(|&c| c <= u).min(self.n)
    }

    #[inline]
    pub fn sample(&self, rng: &mut SplitMix64) -> usize {
        self.quantile(rng.next_f64())
    }
}

/// Reference path: one Bernoulli(p_sen) draw per cell, returning how many
/// cells came out nonSEN.
pub fn bernoulli_nonsen_count(n_cells: usize, p_sen: f64, rng: &mut SplitMix64) -> usize {
    (0..n_cells).filter(|_| rng.next_f64() >= p_sen).count()
}

/// Table for the nonSEN count of a spec.
pub fn nonsen_table(spec: &NullModelSpec) -> BinomialTable {
    BinomialTable::new(spec.n_cells, 1.0 - spec.p)
}

/// nonSEN count at each time point of realization `index`.
pub fn null_realization(spec: &NullModelSpec, index: usize) -> Result<Vec<usize>> {
    spec.validate()?;
    if index >= spec.realizations {
        return Err(Error::OutOfRange {
            name: "realization_index",
            value: index.to_string(),
            expected: "< realizations",
        });
    }
    Ok(realization_with(&nonsen_table(spec), spec, index))
}

fn realization_with(table: &BinomialTable, spec: &NullModelSpec, index: usize) -> Vec<usize> {
    let mut rng = SplitMix64::new(spec.realization_seed(index));
    (0..spec.n_steps).map(|_| table.sample(&mut rng)).collect()
}

/// Per-time-point medians of the nonSEN count across realizations.
#[derive(Debug, Clone, PartialEq)]
pub struct NullSeries {
    pub p: f64,
    pub medians: Vec<f64>,
}

pub fn null_median_series(spec: &NullModelSpec) -> Result<NullSeries> {
    null_median_series_with(spec, true)
}

/// `parallel` only changes the schedule; the output is identical.
pub fn null_median_series_with(spec: &NullModelSpec, parallel: bool) -> Result<NullSeries> {
    spec.validate()?;
    let table = nonsen_table(spec);
    let runs: Vec<Vec<usize>> = if parallel {
        (0..spec.realizations)
            .into_par_iter()
            .map(|r| realization_with(&table, spec, r))
            .collect()
    } else {
        (0..spec.realizations)
            .map(|r| realization_with(&table, spec, r))
            .collect()
    };

    let mut column = vec![0u32; spec.realizations];
    let medians = (0..spec.n_steps)
        .map(|t| {
            for (slot, run) in column.iter_mut().zip(&runs) {
                *slot = run[t] as u32;
            }
            column.sort_unstable();
            median_of_sorted(&column)
        })
        .collect();
    Ok(NullSeries { p: spec.p, medians })
}
