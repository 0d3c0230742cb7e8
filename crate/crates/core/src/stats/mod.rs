//! Rank statistics used to compare simulated series with null models.

mod special;

pub use special::{ln_gamma, regularized_incomplete_beta, student_t_cdf};

use crate::error::{Error, Result};

/// Spearman coefficient, its two-sided p-value, and the sample size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationEntry {
    pub rho: f64,
    pub p_value: f64,
    pub n: usize,
}

/// Ranks `1..=n`, ties sharing the mean of the positions they cover.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));

    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let rank = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = rank;
        }
        start = end;
    }
    ranks
}

fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation("constant input sequence"));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Pearson correlation of the average ranks of `x` and `y`.
pub fn spearman_rho(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::TooFewValues {
            needed: 2,
            actual: x.len(),
        });
    }
    pearson(&average_ranks(x), &average_ranks(y))
}

/// Two-sided p-value of `rho` from `n` pairs, via the Student t
/// approximation with `n - 2` degrees of freedom.
pub fn spearman_pvalue(rho: f64, n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::TooFewValues {
            needed: 3,
            actual: n,
        });
    }
    if !(-1.0..=1.0).contains(&rho) {
        return Err(Error::OutOfRange {
            name: "rho",
            value: rho.to_string(),
            expected: "-1.0..=1.0",
        });
    }
    if rho.abs() == 1.0 {
        return Ok(0.0);
    }
    let df = (n - 2) as f64;
    let t = rho.abs() * (df / (1.0 - rho * rho)).sqrt();
    // 2 * (1 - F(t)) written through the lower tail to avoid cancellation.
    let x = df / (df + t * t);
    let p = regularized_incomplete_beta(df / 2.0, 0.5, x);
    Ok(p.clamp(0.0, 1.0))
}

/// Rho and p-value in one go.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<CorrelationEntry> {
    let rho = spearman_rho(x, y)?;
    let p_value = spearman_pvalue(rho, x.len())?;
    Ok(CorrelationEntry {
        rho,
        p_value,
        n: x.len(),
    })
}

pub fn median(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::TooFewValues {
            needed: 1,
            actual: 0,
        });
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(median_of_sorted(&sorted))
}

pub(crate) fn median_of_sorted<T: Copy + Into<f64>>(sorted: &[T]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2].into()
    } else {
        (sorted[n / 2 - 1].into() + sorted[n / 2].into()) / 2.0
    }
}
