//! Torus grid storage and Moore-neighborhood counting.
//!
//! Layout is row-major with `(i, j) = (row, column)`. Indices wrap in both
//! directions, so `(i, j)` and `(i mod rows, j mod cols)` name the same cell.

use std::fmt;

use crate::error::{Error, Result};

/// Smallest side length for which the eight Moore offsets stay distinct
/// under wraparound.
pub const MIN_SIDE: usize = 3;

/// The eight Moore offsets, in row-major order around the center.
pub const MOORE_OFFSETS: [(isize, isize); 8] = [
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, -1),
    (0, 1),
    (1, -1),
    (1, 0),
    (1, 1),
];

/// Opinion held by one student.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum CellState {
    NonSen = 0,
    Sen = 1,
}

impl CellState {
    #[inline]
    pub fn as_u8(self) -> u8 {
        self as u8
    }

    pub fn flipped(self) -> Self {
        match self {
            CellState::NonSen => CellState::Sen,
            CellState::Sen => CellState::NonSen,
        }
    }
}

impl TryFrom<u8> for CellState {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            0 => Ok(CellState::NonSen),
            1 => Ok(CellState::Sen),
            other => Err(Error::InvalidState(other)),
        }
    }
}

/// How many of a cell's eight Moore neighbors hold each opinion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NeighborCounts {
    pub sen: u8,
    pub nonsen: u8,
}

impl NeighborCounts {
    /// Builds counts from the SEN tally; the nonSEN tally is the rest of 8.
    pub fn from_sen(sen: u8) -> Self {
        assert!(sen <= 8, "a Moore neighborhood has 8 cells, got {sen} SEN");
        Self {
            sen,
            nonsen: 8 - sen,
        }
    }
}

/// A rows x cols torus of opinions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Grid {
    rows: usize,
    cols: usize,
    cells: Vec<CellState>,
}

impl Grid {
    pub fn new(rows: usize, cols: usize, cells: Vec<CellState>) -> Result<Self> {
        check_dims(rows, cols)?;
        if cells.len() != rows * cols {
            return Err(Error::CellCountMismatch {
                rows,
                cols,
                expected: rows * cols,
                actual: cells.len(),
            });
        }
        Ok(Self { rows, cols, cells })
    }

    /// Like [`Grid::new`] but takes raw `0`/`1` values.
    pub fn from_values(rows: usize, cols: usize, values: &[u8]) -> Result<Self> {
        let cells = values
            .iter()
            .map(|&v| CellState::try_from(v))
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows, cols, cells)
    }

    pub fn filled(rows: usize, cols: usize, state: CellState) -> Result<Self> {
        Self::new(rows, cols, vec![state; rows * cols])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[CellState] {
        &self.cells
    }

    /// Cell at `(i, j)`, wrapping both coordinates.
    pub fn get(&self, i: isize, j: isize) -> CellState {
        let r = i.rem_euclid(self.rows as isize) as usize;
        let c = j.rem_euclid(self.cols as isize) as usize;
        self.cells[r * self.cols + c]
    }

    pub fn count(&self, state: CellState) -> usize {
        self.cells.iter().filter(|&&c| c == state).count()
    }

    pub fn sen_count(&self) -> usize {
        self.count(CellState::Sen)
    }

    pub fn nonsen_count(&self) -> usize {
        self.cells.len() - self.sen_count()
    }

    /// Moore-neighbor tallies for `(i, j)`, center excluded.
    ///
    /// Panics if `(i, j)` is outside the grid.
    pub fn moore_counts(&self, i: usize, j: usize) -> NeighborCounts {
        assert!(
            i < self.rows && j < self.cols,
            "({i}, {j}) outside {}x{} grid",
            self.rows,
            self.cols
        );
        let sen = MOORE_OFFSETS
            .iter()
            .filter(|(di, dj)| self.get(i as isize + di, j as isize + dj) == CellState::Sen)
            .count();
        NeighborCounts::from_sen(sen as u8)
    }

    /// Cyclic shift: the cell at `(i, j)` moves to `(i + di, j + dj)`.
    pub fn shifted(&self, di: isize, dj: isize) -> Grid {
        let mut cells = vec![CellState::NonSen; self.cells.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let r = (i as isize + di).rem_euclid(self.rows as isize) as usize;
                let c = (j as isize + dj).rem_euclid(self.cols as isize) as usize;
                cells[r * self.cols + c] = self.cells[i * self.cols + j];
            }
        }
        Grid {
            rows: self.rows,
            cols: self.cols,
            cells,
        }
    }

    pub(crate) fn from_parts_unchecked(rows: usize, cols: usize, cells: Vec<CellState>) -> Self {
        debug_assert_eq!(cells.len(), rows * cols);
        Grid { rows, cols, cells }
    }
}

pub(crate) fn check_dims(rows: usize, cols: usize) -> Result<()> {
    if rows < MIN_SIDE || cols < MIN_SIDE {
        return Err(Error::GridTooSmall { rows, cols });
    }
    Ok(())
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Grid {}x{}", self.rows, self.cols)?;
        for row in self.cells.chunks(self.cols) {
            let line: String = row
                .iter()
                .map(|c| if *c == CellState::Sen { '#' } else { '.' })
                .collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}
