use super::{place, Cell, PartialFilling, Period, ReadoutSource, Scheme, StepRecord};
use crate::error::{Error, Result};
use crate::mobius::MobiusTable;
use crate::odometer::Scale;
use crate::sequence::SymbolSequence;

/// Step-by-step readout filling: step k writes its symbol at the first
/// unfilled cell n_k and repeats it with period p_k. Steps past the listed
/// periods behave as beyond-window steps, so the scale must reach past the
/// window.
#[derive(Debug, Clone)]
pub struct ReadoutBuilder {
    scale: Scale,
    cells: Vec<Cell>,
    steps: Vec<StepRecord>,
    cursor: usize,
}

impl ReadoutBuilder {
    pub fn new(scale: Scale, window: usize) -> Result<Self> {
        if scale.periods()[0] < 3 {
            return Err(Error::Hypothesis(format!(
                "readout scheme needs p_1 ≥ 3, got {}",
                scale.periods()[0]
            )));
        }
        if scale.last() <= window as u64 {
            return Err(Error::ScaleTooShort {
                last: scale.last(),
                window,
            });
        }
        Ok(ReadoutBuilder {
            scale,
            cells: vec![Cell::Unfilled; window],
            steps: Vec::new(),
            cursor: 0,
        })
    }

    pub fn window(&self) -> usize {
        self.cells.len()
    }

    pub fn scale(&self) -> &Scale {
        &self.scale
    }

    /// n_{k+1}: where the next step will write, if any cell is left.
    pub fn next_position(&self) -> Option<usize> {
        (self.cursor < self.cells.len()).then_some(self.cursor + 1)
    }

    pub fn steps_taken(&self) -> usize {
        self.steps.len()
    }

    pub fn steps(&self) -> &[StepRecord] {
        &self.steps
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn is_filled(&self, pos: usize) -> bool {
        pos.checked_sub(1)
            .and_then(|i| self.cells.get(i))
            .is_some_and(Cell::is_filled)
    }

    pub fn is_complete(&self) -> bool {
        self.cursor >= self.cells.len()
    }

    /// Runs the next step with `symbol` as y_k.
    pub fn place(&mut self, symbol: i8) -> Result<StepRecord> {
        let pos = self
            .next_position()
            .ok_or_else(|| Error::InvalidArgument("window already filled".into()))?;
        let step = self.steps.len() + 1;
        let window = self.cells.len();
        let period = match self.scale.period(step) {
            Some(p) if p <= window as u64 => Period::Within(p),
            _ => Period::BeyondWindow,
        };
        place(&mut self.cells, pos, symbol, step, true)?;
        let mut placed = 1;
        if let Period::Within(p) = period {
            let mut next = pos + p as usize;
            while next <= window {
                place(&mut self.cells, next, symbol, step, false)?;
                placed += 1;
                next += p as usize;
            }
        }
        while self.cursor < window && self.cells[self.cursor].is_filled() {
            self.cursor += 1;
        }
        let record = StepRecord {
            step,
            first_position: pos,
            period,
            placed,
        };
        self.steps.push(record);
        Ok(record)
    }

    pub fn finish(self, source: ReadoutSource) -> PartialFilling {
        PartialFilling::from_parts(
            self.cells,
            self.steps,
            Scheme::Readout {
                scale: self.scale,
                source,
            },
        )
    }
}

/// x_y on `[1, window]`: y_k placed at the first available cell, then
/// repeated with period p_k.
pub fn build_readout(y: &SymbolSequence, scale: &Scale, window: usize) -> Result<PartialFilling> {
    let mut builder = ReadoutBuilder::new(scale.clone(), window)?;
    let mut symbols = y.iter();
    while let Some(pos) = builder.next_position() {
        let &symbol = symbols.next().ok_or(Error::SymbolsExhausted {
            used: builder.steps_taken(),
            position: pos,
        })?;
        builder.place(symbol)?;
    }
    Ok(builder.finish(ReadoutSource::Sequence))
}

/// The readout scheme with y_k = μ(n_k), so x_y(n) = μ(n) at every initial cell.
pub fn mobius_fill(scale: &Scale, window: usize, table: &MobiusTable) -> Result<PartialFilling> {
    table.check_range(window)?;
    let mu = table.values();
    let mut builder = ReadoutBuilder::new(scale.clone(), window)?;
    while let Some(pos) = builder.next_position() {
        builder.place(mu[pos - 1])?;
    }
    Ok(builder.finish(ReadoutSource::Mobius))
}

/// z(n) = 1 exactly when cell n holds an initial placement.
pub fn initial_indicator(filling: &PartialFilling) -> Result<SymbolSequence> {
    filling
        .cells()
        .iter()
        .enumerate()
        .map(|(i, c)| match c {
            Cell::Unfilled => Err(Error::Unfilled(i + 1)),
            c => Ok(c.is_initial() as i8),
        })
        .collect::<Result<Vec<_>>>()
        .map(SymbolSequence::new)
}
