use num_rational::Ratio;

use super::{place, Cell, PartialFilling, Period, Scheme, StepRecord};
use crate::error::{invalid, Error, Result};
use crate::sequence::SymbolSequence;

/// One level of the block scheme: period ratio q_k and r_k, the number of
/// unfilled p_{k−1}-blocks that B_k occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockStep {
    pub q: u64,
    pub r: u64,
}

/// Writes each B_k into the leftmost r_k·Q_{k−1} unfilled cells of
/// `[1, p_k]` and repeats it with period p_k = q_1⋯q_k. r_k is inferred from
/// the block length. Steps stop once the window is full.
pub fn build_block_scheme(
    qs: &[u64],
    blocks: &[SymbolSequence],
    window: usize,
) -> Result<PartialFilling> {
    if qs.len() != blocks.len() || qs.is_empty() {
        return Err(invalid("need one q_k per block and at least one block"));
    }
    if qs[0] as u128 > window as u128 {
        return Err(Error::WindowTooSmall(format!(
            "window {window} is shorter than p_1 = {}",
            qs[0]
        )));
    }

    let mut cells = vec![Cell::Unfilled; window];
    let mut steps = Vec::new();
    let mut rs = Vec::with_capacity(qs.len());
    // Q_{k−1}: unfilled cells per p_{k−1} period; saturates once irrelevant.
    let mut unfilled_per_period: u128 = 1;
    let mut period: u128 = 1;

    for (i, (&q, block)) in qs.iter().zip(blocks).enumerate() {
        let step = i + 1;
        if q < 2 {
            return Err(invalid(format!("q_{step} = {q} must be at least 2")));
        }
        let len = block.len() as u128;
        if len == 0 || !len.is_multiple_of(unfilled_per_period) {
            return Err(Error::BlockLength {
                step,
                expected: unfilled_per_period.min(u64::MAX as u128) as u64,
                found: block.len(),
            });
        }
        let r = len / unfilled_per_period;
        if r >= q as u128 {
            return Err(invalid(format!("r_{step} = {r} must be below q_{step} = {q}")));
        }
        rs.push(r as u64);
        period = period.saturating_mul(q as u128);
        unfilled_per_period = unfilled_per_period.saturating_mul((q as u128) - r);

        let limit = period.min(window as u128) as usize;
        let targets: Vec<usize> = cells[..limit]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_filled())
            .map(|(j, _)| j + 1)
            .take(block.len())
            .collect();
        if targets.is_empty() {
            break;
        }
        let within = period <= window as u128;
        let mut placed = 0;
        for (&pos, &symbol) in targets.iter().zip(block.iter()) {
            place(&mut cells, pos, symbol, step, true)?;
            placed += 1;
            if within {
                let p = period as usize;
                let mut next = pos + p;
                while next <= window {
                    place(&mut cells, next, symbol, step, false)?;
                    placed += 1;
                    next += p;
                }
            }
        }
        steps.push(StepRecord {
            step,
            first_position: targets[0],
            period: if within {
                Period::Within(period as u64)
            } else {
                Period::BeyondWindow
            },
            placed,
        });
    }

    let q = qs[..steps.len()].to_vec();
    rs.truncate(steps.len());
    Ok(PartialFilling::from_parts(cells, steps, Scheme::Block { q, r: rs }))
}

/// Blocks B_1..B_K of zeros with a single 1. For K > 1 the position of the
/// 1 in B_k, reduced modulo Q_l, runs through every residue for every
/// earlier level l, levels being served round-robin (1; 1,2; 1,2,3; …).
pub fn schedule_ones(levels: &[BlockStep]) -> Result<Vec<SymbolSequence>> {
    let mut unfilled = Vec::with_capacity(levels.len() + 1); // Q_0..Q_K
    unfilled.push(1u128);
    for (i, l) in levels.iter().enumerate() {
        if l.r == 0 || l.r >= l.q {
            return Err(invalid(format!("level {}: need 1 ≤ r < q", i + 1)));
        }
        let next = unfilled[i]
            .checked_mul((l.q - l.r) as u128)
            .ok_or_else(|| Error::Overflow("Q_k".into()))?;
        unfilled.push(next);
    }

    let mut counters = vec![0u128; levels.len() + 1];
    let mut rotation = LevelRotation::default();
    let mut blocks = Vec::with_capacity(levels.len());
    for (i, l) in levels.iter().enumerate() {
        let step = i + 1;
        let len = (l.r as u128 * unfilled[i]) as usize;
        let one_at = if step == 1 {
            0
        } else {
            let level = rotation.next_below(step);
            let residue = counters[level] % unfilled[level];
            counters[level] += 1;
            residue as usize
        };
        let mut block = vec![0i8; len];
        block[one_at] = 1;
        blocks.push(SymbolSequence::new(block));
    }
    Ok(blocks)
}

/// Triangular round-robin over levels 1; 1,2; 1,2,3; …
#[derive(Debug, Default)]
struct LevelRotation {
    round: usize,
    cursor: usize,
}

impl LevelRotation {
    fn advance(&mut self) -> usize {
        if self.cursor >= self.round {
            self.round += 1;
            self.cursor = 0;
        }
        self.cursor += 1;
        self.cursor
    }

    fn next_below(&mut self, bound: usize) -> usize {
        loop {
            let level = self.advance();
            if level < bound {
                return level;
            }
        }
    }
}

/// ∏_k (1 − r_k/q_k), the density left unfilled by the given levels.
pub fn residual_density(levels: &[BlockStep]) -> Ratio<u128> {
    levels
        .iter()
        .map(|l| Ratio::new((l.q - l.r) as u128, l.q as u128))
        .product()
}
