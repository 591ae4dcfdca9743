//! Toeplitz constructions on a finite window `[1, N]`.
//!
//! Two schemes are provided. The block scheme writes blocks `B_k` into the
//! leftmost unfilled cells of `[1, p_k]` and repeats them with period `p_k`
//! ([`build_block_scheme`]). The readout scheme places `y_k` at the first
//! cell still unfilled after steps `1..k` and repeats it with period `p_k`
//! ([`build_readout`], [`mobius_fill`]). Every cell remembers the step that
//! filled it and whether it was the step's first placement ("initial").

mod block;
mod example72;
mod readout;

pub use block::{build_block_scheme, residual_density, schedule_ones, BlockStep};
pub use example72::{build_example_7_2, BlockSource, Example72};
pub use readout::{build_readout, initial_indicator, mobius_fill, ReadoutBuilder};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::odometer::Scale;
use crate::sequence::SymbolSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Cell {
    #[default]
    Unfilled,
    Filled {
        symbol: i8,
        step: u32,
        initial: bool,
    },
}

impl Cell {
    pub fn symbol(&self) -> Option<i8> {
        match *self {
            Cell::Filled { symbol, .. } => Some(symbol),
            Cell::Unfilled => None,
        }
    }

    pub fn step(&self) -> Option<usize> {
        match *self {
            Cell::Filled { step, .. } => Some(step as usize),
            Cell::Unfilled => None,
        }
    }

    pub fn is_initial(&self) -> bool {
        matches!(self, Cell::Filled { initial: true, .. })
    }

    pub fn is_filled(&self) -> bool {
        !matches!(self, Cell::Unfilled)
    }
}

/// Period of a construction step relative to the window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Period {
    Within(u64),
    /// p_k exceeds the window: the step places no repeats inside it.
    BeyondWindow,
}

impl Period {
    pub fn within(&self) -> Option<u64> {
        match *self {
            Period::Within(p) => Some(p),
            Period::BeyondWindow => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    /// n_k: the first cell written by the step.
    pub first_position: usize,
    pub period: Period,
    /// Cells written inside the window.
    pub placed: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReadoutSource {
    Sequence,
    Mobius,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scheme {
    Block { q: Vec<u64>, r: Vec<u64> },
    Readout { scale: Scale, source: ReadoutSource },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialFilling {
    cells: Vec<Cell>,
    steps: Vec<StepRecord>,
    scheme: Scheme,
}

impl PartialFilling {
    pub(crate) fn from_parts(cells: Vec<Cell>, steps: Vec<StepRecord>, scheme: Scheme) -> Self {
        PartialFilling {
            cells,
            steps,
            scheme,
        }
    }

    pub fn window(&self) -> usize {
        self.cells.len()
    }

    /// Cell at 1-based `pos`.
    pub fn cell(&self, pos: usize) -> Option<Cell> {
        pos.checked_sub(1).and_then(|i| self.cells.get(i)).copied()
    }

    /// Cells, index `i` holding position `i + 1`.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn steps(&self) -> &[StepRecord] {
        &self.steps
    }

    /// Record of 1-based step `k`.
    pub fn step(&self, k: usize) -> Option<&StepRecord> {
        k.checked_sub(1).and_then(|i| self.steps.get(i))
    }

    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    pub fn first_unfilled(&self) -> Option<usize> {
        self.cells.iter().position(|c| !c.is_filled()).map(|i| i + 1)
    }

    pub fn unfilled_count(&self) -> usize {
        self.cells.iter().filter(|c| !c.is_filled()).count()
    }

    pub fn is_complete(&self) -> bool {
        self.first_unfilled().is_none()
    }

    /// The filled symbols; fails on the first unfilled cell.
    pub fn to_sequence(&self) -> Result<SymbolSequence> {
        self.cells
            .iter()
            .enumerate()
            .map(|(i, c)| c.symbol().ok_or(Error::Unfilled(i + 1)))
            .collect::<Result<Vec<_>>>()
            .map(SymbolSequence::new)
    }

    /// Declared density of the cells written by step `k`, when its period
    /// lies inside the window: 1/p_k for the readout scheme and
    /// r_k·Q_{k−1}/p_k for the block scheme.
    pub fn step_density(&self, k: usize) -> Option<Ratio<u128>> {
        let p = self.step(k)?.period.within()? as u128;
        match &self.scheme {
            Scheme::Readout { .. } => Some(Ratio::new(1, p)),
            Scheme::Block { q, r } => {
                let unfilled_before: u128 = q[..k - 1]
                    .iter()
                    .zip(&r[..k - 1])
                    .map(|(&q, &r)| (q - r) as u128)
                    .product();
                Some(Ratio::new(r[k - 1] as u128 * unfilled_before, p))
            }
        }
    }

    /// Digits for filled cells and `unfilled` for the rest.
    pub fn render(&self, len: usize, unfilled: char) -> String {
        self.cells
            .iter()
            .take(len)
            .map(|c| match c.symbol() {
                Some(s @ 0..=9) => char::from(b'0' + s as u8),
                Some(_) => '?',
                None => unfilled,
            })
            .collect()
    }

    /// Space-separated step labels: `Yk` for an initial placement of y_k,
    /// `yk` for a repeat, `_` for an unfilled cell.
    pub fn render_steps(&self, len: usize) -> String {
        self.cells
            .iter()
            .take(len)
            .map(|c| match *c {
                Cell::Filled {
                    step,
                    initial: true,
                    ..
                } => format!("Y{step}"),
                Cell::Filled { step, .. } => format!("y{step}"),
                Cell::Unfilled => "_".to_string(),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub(crate) fn place(cells: &mut [Cell], pos: usize, symbol: i8, step: usize, initial: bool) -> Result<()> {
    let cell = &mut cells[pos - 1];
    if cell.is_filled() {
        return Err(Error::CellOverwrite(pos));
    }
    *cell = Cell::Filled {
        symbol,
        step: step as u32,
        initial,
    };
    Ok(())
}
