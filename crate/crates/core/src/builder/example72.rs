use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{build_readout, PartialFilling, ReadoutBuilder};
use crate::complexity::find_claim_indices;
use crate::error::{invalid, Error, Result};
use crate::odometer::Scale;
use crate::sequence::SymbolSequence;

/// Where the binary blocks A_1, A_2, … (|A_m| = m) come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockSource {
    /// Consecutive chunks of lengths 1, 2, 3, … of the binary Champernowne
    /// word 0 1 00 01 10 11 000 …
    Champernowne,
    /// Uniform random bits from a ChaCha8 stream.
    Seeded(u64),
    Explicit(Vec<SymbolSequence>),
}

impl BlockSource {
    pub fn blocks(&self, count: usize) -> Result<Vec<SymbolSequence>> {
        match self {
            BlockSource::Champernowne => {
                let total = count * (count + 1) / 2;
                let word = champernowne(total);
                let mut start = 0;
                Ok((1..=count)
                    .map(|m| {
                        let b = SymbolSequence::new(word[start..start + m].to_vec());
                        start += m;
                        b
                    })
                    .collect())
            }
            BlockSource::Seeded(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                Ok((1..=count)
                    .map(|m| (0..m).map(|_| rng.gen_range(0..2i8)).collect())
                    .collect())
            }
            BlockSource::Explicit(blocks) => {
                if blocks.len() < count {
                    return Err(invalid(format!(
                        "{count} blocks needed, {} supplied",
                        blocks.len()
                    )));
                }
                for (i, b) in blocks[..count].iter().enumerate() {
                    if b.len() != i + 1 || b.iter().any(|&s| s != 0 && s != 1) {
                        return Err(invalid(format!("A_{} must be a binary block of length {}", i + 1, i + 1)));
                    }
                }
                Ok(blocks[..count].to_vec())
            }
        }
    }
}

/// The first `len` symbols of 0 1 00 01 10 11 000 001 …
fn champernowne(len: usize) -> Vec<i8> {
    let mut out = Vec::with_capacity(len);
    let mut width = 1u32;
    'outer: loop {
        for v in 0u64..(1u64 << width) {
            for b in (0..width).rev() {
                if out.len() == len {
                    break 'outer;
                }
                out.push(((v >> b) & 1) as i8);
            }
        }
        width += 1;
    }
    out
}

#[derive(Debug, Clone)]
pub struct Example72 {
    pub y: SymbolSequence,
    pub filling: PartialFilling,
    /// k_1, k_2, … as used for the placement of the blocks.
    pub k_indices: Vec<usize>,
    pub blocks: Vec<SymbolSequence>,
}

/// Steps the readout scheme needs to fill `[1, window]`.
fn steps_to_fill(scale: &Scale, window: usize) -> Result<usize> {
    let mut b = ReadoutBuilder::new(scale.clone(), window)?;
    while !b.is_complete() {
        b.place(0)?;
    }
    Ok(b.steps_taken())
}

/// y is zero except for A_m on positions k_m + 1..=k_m + m; the filling is
/// its readout on `[1, window]`. With `m_max = None` every k_m the window
/// exhibits is used.
pub fn build_example_7_2(
    scale: &Scale,
    window: usize,
    source: &BlockSource,
    m_max: Option<usize>,
) -> Result<Example72> {
    let wanted = m_max.unwrap_or(usize::MAX);
    let claim = find_claim_indices(scale, wanted.min(window), window)?;
    if let Some(m) = m_max {
        if claim.k.len() < m {
            return Err(Error::WindowTooSmall(
                claim.diagnostic.unwrap_or_else(|| format!("k_{m} not reached")),
            ));
        }
    }
    let k_indices = claim.k;
    let blocks = source.blocks(k_indices.len())?;
    let reach = k_indices
        .iter()
        .enumerate()
        .map(|(i, &k)| k + i + 1)
        .max()
        .unwrap_or(0);
    let mut y = vec![0i8; steps_to_fill(scale, window)?.max(reach)];
    for (&k, block) in k_indices.iter().zip(&blocks) {
        y[k..k + block.len()].copy_from_slice(block);
    }
    let y = SymbolSequence::new(y);
    let filling = build_readout(&y, scale, window)?;
    Ok(Example72 {
        y,
        filling,
        k_indices,
        blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn champernowne_prefix() {
        let w: String = champernowne(16).iter().map(|s| s.to_string()).collect();
        assert_eq!(w, "0100011011000001");
        let b = BlockSource::Champernowne.blocks(4).unwrap();
        let s: Vec<String> = b.iter().map(|b| b.to_string()).collect();
        assert_eq!(s, vec!["0", "10", "001", "1011"]);
    }

    #[test]
    fn blocks_sit_after_claim_indices() {
        let scale = Scale::geometric(3, 3, 20_000).unwrap();
        let ex = build_example_7_2(&scale, 20_000, &BlockSource::Seeded(7), Some(3)).unwrap();
        for (m, &k) in ex.k_indices.iter().enumerate() {
            assert_eq!(&ex.y[k..k + m + 1], &*ex.blocks[m]);
        }
        assert!(ex.filling.is_complete());
        let x = ex.filling.to_sequence().unwrap();
        assert!(x.iter().all(|&s| s == 0 || s == 1));
        assert!(matches!(
            build_example_7_2(&scale, 20_000, &BlockSource::Champernowne, Some(40)),
            Err(Error::WindowTooSmall(_))
        ));
    }

    #[test]
    fn explicit_blocks_are_checked() {
        let bad = BlockSource::Explicit(vec![SymbolSequence::new(vec![1, 0])]);
        assert!(bad.blocks(1).is_err());
    }
}
