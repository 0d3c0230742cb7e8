//! Plain-text output formats and their readers.
//!
//! * series CSV: `t,nonsen_count,nonsen_pct`, percentage with 4 decimals
//! * grid PGM: plain `P2`, maxval 1, SEN = 1, nonSEN = 0
//! * correlation CSV: `scenario,variation,null_p,rho,p_value`, `NA,NA` for
//!   undefined cells
//!
//! All files are UTF-8 with LF line endings. Decimal fields are rounded
//! half to even.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::experiments::{Correlation, CorrelationTable, ReportBundle, SeriesKey, Variation};
use crate::lattice::{CellState, Grid};
use crate::nullmodel::NullSeries;

pub const SERIES_HEADER: &str = "t,nonsen_count,nonsen_pct";
pub const TABLE_HEADER: &str = "scenario,variation,null_p,rho,p_value";
pub const NULLS_HEADER: &str = "null_p,t,median_nonsen_count";
pub const CONVERGENCE_HEADER: &str = "scenario,variation,fixed_point,two_cycle,last_delta";

/// Which artifacts a writer emits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    Csv,
    Pgm,
    #[default]
    Both,
}

impl OutputFormat {
    pub fn csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }

    pub fn pgm(self) -> bool {
        matches!(self, OutputFormat::Pgm | OutputFormat::Both)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Pgm => "pgm",
            OutputFormat::Both => "both",
        }
    }
}

/// `num / den` as a decimal with 4 places, rounded half to even, computed
/// exactly in integers.
pub fn ratio_4dp(num: u128, den: u128) -> String {
    assert!(den > 0);
    let scaled = num * 10_000;
    let mut q = scaled / den;
    let r = scaled % den;
    if 2 * r > den || (2 * r == den && q % 2 == 1) {
        q += 1;
    }
    format!("{}.{:04}", q / 10_000, q % 10_000)
}

/// Fixed 4-decimal rendering of a float. Rounding is half to even on the
/// exact binary value; negative zero prints as `0.0000`.
pub fn fmt_4dp(x: f64) -> String {
    let s = format!("{x:.4}");
    if s == "-0.0000" {
        "0.0000".to_string()
    } else {
        s
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn parse_err(kind: &'static str, path: &Path, reason: impl Into<String>) -> Error {
    Error::Parse {
        kind,
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

pub fn series_csv(counts: &[usize], n_cells: usize) -> String {
    let mut out = String::with_capacity(24 * (counts.len() + 1));
    out.push_str(SERIES_HEADER);
    out.push('\n');
    for (t, &c) in counts.iter().enumerate() {
        let pct = ratio_4dp(100 * c as u128, n_cells as u128);
        out.push_str(&format!("{t},{c},{pct}\n"));
    }
    out
}

pub fn write_series_csv(counts: &[usize], n_cells: usize, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &series_csv(counts, n_cells))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesRow {
    pub t: usize,
    pub nonsen_count: usize,
    pub nonsen_pct: f64,
}

pub fn read_series_csv(path: impl AsRef<Path>) -> Result<Vec<SeriesRow>> {
    let path = path.as_ref();
    let text = read_file(path)?;
    let mut lines = text.lines();
    if lines.next() != Some(SERIES_HEADER) {
        return Err(parse_err("series csv", path, "missing header"));
    }
    lines
        .enumerate()
        .map(|(k, line)| {
            let f: Vec<&str> = line.split(',').collect();
            let bad = || parse_err("series csv", path, format!("line {}: {line:?}", k + 2));
            if f.len() != 3 {
                return Err(bad());
            }
            Ok(SeriesRow {
                t: f[0].parse().map_err(|_| bad())?,
                nonsen_count: f[1].parse().map_err(|_| bad())?,
                nonsen_pct: f[2].parse().map_err(|_| bad())?,
            })
        })
        .collect()
}

pub fn grid_pgm(grid: &Grid) -> String {
    let mut out = format!("P2\n{} {}\n1\n", grid.cols(), grid.rows());
    for row in grid.cells().chunks(grid.cols()) {
        let line: Vec<&str> = row
            .iter()
            .map(|c| if *c == CellState::Sen { "1" } else { "0" })
            .collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn write_grid_pgm(grid: &Grid, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &grid_pgm(grid))
}

/// Reads a plain PGM with maxval 1 (comments allowed).
pub fn read_grid_pgm(path: impl AsRef<Path>) -> Result<Grid> {
    let path = path.as_ref();
    let text = read_file(path)?;
    let mut tokens = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace);
    let bad = |reason: &str| parse_err("pgm", path, reason);
    if tokens.next() != Some("P2") {
        return Err(bad("expected P2 magic"));
    }
    let mut header = || -> Result<usize> {
        tokens
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| bad("bad header"))
    };
    let cols = header()?;
    let rows = header()?;
    let maxval = header()?;
    if maxval != 1 {
        return Err(bad("maxval must be 1"));
    }
    let values = tokens
        .map(|t| t.parse::<u8>().map_err(|_| bad("non-numeric pixel")))
        .collect::<Result<Vec<_>>>()?;
    Grid::from_values(rows, cols, &values)
}

pub fn correlation_table_csv(table: &CorrelationTable) -> String {
    let mut out = String::new();
    out.push_str(TABLE_HEADER);
    out.push('\n');
    for (key, row) in table.rows.iter().zip(&table.cells) {
        for (p, cell) in table.null_ps.iter().zip(row) {
            let (rho, pv) = match cell {
                Correlation::Defined(e) => (fmt_4dp(e.rho), fmt_4dp(e.p_value)),
                Correlation::Undefined => ("NA".into(), "NA".into()),
            };
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                key.scenario, key.variation, p, rho, pv
            ));
        }
    }
    out
}

pub fn write_correlation_table(table: &CorrelationTable, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &correlation_table_csv(table))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub key: SeriesKey,
    pub null_p: f64,
    /// `(rho, p_value)`, `None` for `NA` cells.
    pub value: Option<(f64, f64)>,
}

pub fn read_correlation_table(path: impl AsRef<Path>) -> Result<Vec<TableRow>> {
    let path = path.as_ref();
    let text = read_file(path)?;
    let mut lines = text.lines();
    if lines.next() != Some(TABLE_HEADER) {
        return Err(parse_err("correlation csv", path, "missing header"));
    }
    lines
        .enumerate()
        .map(|(k, line)| {
            let bad = || parse_err("correlation csv", path, format!("line {}: {line:?}", k + 2));
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 5 {
                return Err(bad());
            }
            let key = SeriesKey {
                scenario: f[0].parse().map_err(|_| bad())?,
                variation: f[1].parse::<Variation>().map_err(|_| bad())?,
            };
            let value = match (f[3], f[4]) {
                ("NA", "NA") => None,
                (r, p) => Some((r.parse().map_err(|_| bad())?, p.parse().map_err(|_| bad())?)),
            };
            Ok(TableRow {
                key,
                null_p: f[2].parse().map_err(|_| bad())?,
                value,
            })
        })
        .collect()
}

pub fn nulls_csv(nulls: &[NullSeries]) -> String {
    let mut out = String::new();
    out.push_str(NULLS_HEADER);
    out.push('\n');
    for n in nulls {
        for (t, m) in n.medians.iter().enumerate() {
            out.push_str(&format!("{},{t},{m:.1}\n", n.p));
        }
    }
    out
}

pub fn write_nulls_csv(nulls: &[NullSeries], path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &nulls_csv(nulls))
}

pub fn series_file_name(key: SeriesKey) -> String {
    format!("scenario{}_{}.csv", key.scenario, key.variation)
}

pub fn snapshot_file_name(key: SeriesKey, t: usize) -> String {
    format!("scenario{}_{}_t{:02}.pgm", key.scenario, key.variation, t)
}

/// Writes a bundle under `dir` and returns every path written, in order:
///
/// ```text
/// series/scenario{S}_{v}.csv          (csv)
/// snapshots/scenario{S}_{v}_t{TT}.pgm (pgm)
/// nulls.csv, table1.csv, table2.csv, convergence.csv
/// ```
pub fn write_bundle(
    bundle: &ReportBundle,
    dir: impl AsRef<Path>,
    format: OutputFormat,
) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    let mut written = Vec::new();
    let mut emit = |rel: PathBuf, contents: String| -> Result<()> {
        let path = dir.join(rel);
        write_file(&path, &contents)?;
        written.push(path);
        Ok(())
    };

    if format.csv() {
        for (key, counts) in &bundle.series {
            emit(
                Path::new("series").join(series_file_name(*key)),
                series_csv(counts, bundle.n_cells()),
            )?;
        }
    }
    if format.pgm() {
        for ((key, t), grid) in &bundle.snapshots {
            emit(
                Path::new("snapshots").join(snapshot_file_name(*key, *t)),
                grid_pgm(grid),
            )?;
        }
    }
    emit("nulls.csv".into(), nulls_csv(&bundle.nulls))?;
    emit("table1.csv".into(), correlation_table_csv(&bundle.table1))?;
    emit("table2.csv".into(), correlation_table_csv(&bundle.table2))?;

    let mut conv = String::from(CONVERGENCE_HEADER);
    conv.push('\n');
    for (key, d) in &bundle.convergence {
        let cycle = match d.two_cycle {
            Some(b) => b.to_string(),
            None => "NA".into(),
        };
        conv.push_str(&format!(
            "{},{},{},{},{}\n",
            key.scenario,
            key.variation,
            d.fixed_point,
            cycle,
            fmt_4dp(d.last_delta)
        ));
    }
    emit("convergence.csv".into(), conv)?;
    Ok(written)
}
