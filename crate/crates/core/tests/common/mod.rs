//! Reference implementations kept deliberately naive and separate from the
//! library's optimized paths.
#![allow(dead_code)]

use empathy_ca::rng::SplitMix64;
use empathy_ca::{CellState, Grid, RuleVariant, ScenarioParams};

/// SEN neighbors of `(i, j)` by walking all nine offsets with explicit
/// modular arithmetic and skipping the center.
pub fn naive_sen_neighbors(values: &[u8], rows: usize, cols: usize, i: usize, j: usize) -> u8 {
    let mut sen = 0;
    for di in [rows - 1, 0, 1] {
        for dj in [cols - 1, 0, 1] {
            if di == 0 && dj == 0 {
                continue;
            }
            sen += values[((i + di) % rows) * cols + (j + dj) % cols];
        }
    }
    sen
}

/// Straight transcription of the four ordered clauses on raw integers.
#[allow(clippy::if_same_then_else)]
pub fn naive_rule(current: u8, sen: u8, sen_thr: u8, nonsen_thr: u8, alt: bool) -> u8 {
    let nonsen = 8 - sen;
    let clause3 = if alt { sen } else { nonsen };
    if current == 1 && sen < nonsen_thr {
        0
    } else if current == 0 && nonsen == nonsen_thr {
        0
    } else if current == 0 && clause3 > sen_thr {
        1
    } else if current == 1 && sen == sen_thr {
        1
    } else {
        current
    }
}

pub fn values(grid: &Grid) -> Vec<u8> {
    grid.cells().iter().map(|c| c.as_u8()).collect()
}

pub fn naive_step(grid: &Grid, params: &ScenarioParams) -> Grid {
    let (rows, cols) = (grid.rows(), grid.cols());
    let v = values(grid);
    let alt = params.rule == RuleVariant::AltClause3;
    let mut out = vec![0u8; v.len()];
    for i in 0..rows {
        for j in 0..cols {
            let sen = naive_sen_neighbors(&v, rows, cols, i, j);
            out[i * cols + j] = naive_rule(
                v[i * cols + j],
                sen,
                params.sen_threshold,
                params.nonsen_threshold,
                alt,
            );
        }
    }
    Grid::from_values(rows, cols, &out).unwrap()
}

pub fn naive_nonsen_counts(start: &Grid, params: &ScenarioParams, steps: usize) -> Vec<usize> {
    let mut g = start.clone();
    let mut counts = vec![g.count(CellState::NonSen)];
    for _ in 0..steps {
        g = naive_step(&g, params);
        counts.push(g.count(CellState::NonSen));
    }
    counts
}

/// A grid where every cell is an independent fair coin.
pub fn random_grid(rows: usize, cols: usize, rng: &mut SplitMix64) -> Grid {
    let v: Vec<u8> = (0..rows * cols)
        .map(|_| (rng.next_u64() >> 63) as u8)
        .collect();
    Grid::from_values(rows, cols, &v).unwrap()
}

pub fn report(id: u32, name: &str, ok: bool, detail: &str) {
    println!(
        "criterion {id} [{}] {name}: {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
}
