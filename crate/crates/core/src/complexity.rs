//! Block census and the combinatorics of the initial-position indicator z.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use num_rational::Ratio;
use rayon::prelude::*;

use crate::builder::{initial_indicator, Example72, PartialFilling, ReadoutBuilder, Scheme};
use crate::error::{invalid, Error, Result};
use crate::odometer::Scale;
use crate::sequence::SymbolSequence;

/// Starting positions per shard when counting in parallel.
const SHARD: usize = 1 << 20;

/// Largest packed key width answered with a dense bitmap.
const BITMAP_BITS: u32 = 26;

#[derive(Debug, Clone, PartialEq)]
pub struct CensusReport {
    pub n: usize,
    /// Number of distinct length-n blocks (passing the cap, if any).
    pub count: u64,
    pub prefix_len: usize,
    /// Only blocks whose share of zeros is at most this were counted.
    pub zero_cap: Option<Ratio<u64>>,
    /// log₂(count)/n.
    pub entropy: f64,
}

impl CensusReport {
    pub fn csv_header() -> &'static str {
        "n,count,entropy_estimate"
    }

    pub fn csv_row(&self) -> String {
        format!("{},{},{}", self.n, self.count, self.entropy)
    }
}

/// Exact number of distinct blocks of length `n` in `x`, optionally only
/// those with at most `zero_cap·n` zeros. Blocks are packed losslessly into
/// integers when they fit, otherwise compared as slices.
pub fn block_census(x: &[i8], n: usize, zero_cap: Option<Ratio<u64>>) -> Result<CensusReport> {
    if n == 0 || n > x.len() {
        return Err(invalid(format!(
            "block length {n} must be in 1..={}",
            x.len()
        )));
    }
    let alphabet = SymbolSequence::new(x.to_vec()).alphabet();
    let mut code = [0u8; 256];
    for (i, &s) in alphabet.iter().enumerate() {
        code[(s as i16 + 128) as usize] = i as u8;
    }
    let bits = usize::BITS - (alphabet.len().max(2) - 1).leading_zeros();
    let width = bits as usize * n;
    let max_zeros = zero_cap.map(|c| {
        // zeros/n ≤ c  ⇔  zeros ≤ ⌊c·n⌋
        (*c.numer() as u128 * n as u128 / *c.denom() as u128) as usize
    });

    let starts = x.len() - n + 1;
    let encode = |s: i8| code[(s as i16 + 128) as usize] as u128;
    let count = if width <= BITMAP_BITS as usize {
        let words = (1usize << width).div_ceil(64);
        let merged = shards(starts)
            .into_par_iter()
            .map(|(a, b)| {
                let mut map = vec![0u64; words];
                for_each_key(x, n, a, b, bits, max_zeros, encode, |k| {
                    map[(k >> 6) as usize] |= 1 << (k & 63);
                });
                map
            })
            .reduce(
                || vec![0u64; words],
                |mut l, r| {
                    l.iter_mut().zip(r).for_each(|(a, b)| *a |= b);
                    l
                },
            );
        merged.iter().map(|w| w.count_ones() as u64).sum()
    } else if width <= 128 {
        let sets: Vec<HashSet<u128>> = shards(starts)
            .into_par_iter()
            .map(|(a, b)| {
                let mut set = HashSet::new();
                for_each_key(x, n, a, b, bits, max_zeros, encode, |k| {
                    set.insert(k);
                });
                set
            })
            .collect();
        union_len(sets)
    } else {
        let sets: Vec<HashSet<&[i8]>> = shards(starts)
            .into_par_iter()
            .map(|(a, b)| {
                (a..b)
                    .map(|i| &x[i..i + n])
                    .filter(|w| max_zeros.is_none_or(|m| w.iter().filter(|&&s| s == 0).count() <= m))
                    .collect()
            })
            .collect();
        union_len(sets)
    };

    Ok(CensusReport {
        n,
        count,
        prefix_len: x.len(),
        zero_cap,
        entropy: if count == 0 { 0.0 } else { (count as f64).log2() / n as f64 },
    })
}

fn shards(starts: usize) -> Vec<(usize, usize)> {
    (0..starts)
        .step_by(SHARD)
        .map(|a| (a, (a + SHARD).min(starts)))
        .collect()
}

fn union_len<T: std::hash::Hash + Eq>(sets: Vec<HashSet<T>>) -> u64 {
    let mut sets = sets.into_iter();
    let mut all = sets.next().unwrap_or_default();
    for s in sets {
        all.extend(s);
    }
    all.len() as u64
}

/// Calls `emit` with the packed key of every block starting in `[a, b)`
/// (0-based) whose zero count is within `max_zeros`.
#[allow(clippy::too_many_arguments)]
fn for_each_key(
    x: &[i8],
    n: usize,
    a: usize,
    b: usize,
    bits: u32,
    max_zeros: Option<usize>,
    encode: impl Fn(i8) -> u128,
    mut emit: impl FnMut(u128),
) {
    let width = bits as usize * n;
    let mask = if width >= 128 { u128::MAX } else { (1u128 << width) - 1 };
    let mut key = 0u128;
    let mut zeros = 0usize;
    for &s in &x[a..a + n - 1] {
        key = (key << bits) | encode(s);
        zeros += (s == 0) as usize;
    }
    for i in a..b {
        let s = x[i + n - 1];
        key = ((key << bits) | encode(s)) & mask;
        zeros += (s == 0) as usize;
        if max_zeros.is_none_or(|m| zeros <= m) {
            emit(key);
        }
        zeros -= (x[i] == 0) as usize;
    }
}

fn readout_scale(filling: &PartialFilling) -> Result<&Scale> {
    match filling.scheme() {
        Scheme::Readout { scale, .. } => Ok(scale),
        Scheme::Block { .. } => Err(invalid("needs a readout filling")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZeroFrequency {
    pub k: usize,
    /// Zeros of z on [1, p_k], divided by p_k.
    pub measured: Ratio<u128>,
    /// Σ_{k'<k} 1/p_{k'} − (k−1)/p_k.
    pub formula: Ratio<u128>,
    pub equal: bool,
}

/// Share of zeros in z[1, p_k] against the closed formula.
pub fn verify_zero_frequency(filling: &PartialFilling, k: usize) -> Result<ZeroFrequency> {
    let scale = readout_scale(filling)?;
    let p = scale
        .period(k)
        .filter(|&p| p as usize <= filling.window())
        .ok_or_else(|| invalid(format!("p_{k} is not inside the window")))?;
    let block = &filling.cells()[..p as usize];
    let mut zeros = 0u128;
    for (i, c) in block.iter().enumerate() {
        if !c.is_filled() {
            return Err(Error::Unfilled(i + 1));
        }
        zeros += !c.is_initial() as u128;
    }
    let measured = Ratio::new(zeros, p as u128);
    let earlier: Ratio<u128> = scale.periods()[..k - 1]
        .iter()
        .map(|&q| Ratio::new(1, q as u128))
        .sum();
    let formula = earlier - Ratio::new(k as u128 - 1, p as u128);
    Ok(ZeroFrequency {
        k,
        measured,
        formula,
        equal: measured == formula,
    })
}

/// True iff every zero of B_{k,0} = z[1, p_k] is also a zero of each
/// B_{k,j} = z[j p_k + 1, (j+1) p_k], 1 ≤ j ≤ j_max.
pub fn verify_replacement(filling: &PartialFilling, k: usize, j_max: usize) -> Result<bool> {
    let scale = readout_scale(filling)?;
    let p = scale
        .period(k)
        .ok_or_else(|| invalid(format!("scale has no p_{k}")))? as usize;
    if (j_max + 1).saturating_mul(p) > filling.window() {
        return Err(invalid(format!(
            "(j_max + 1)·p_k = {} exceeds the window",
            (j_max as u128 + 1) * p as u128
        )));
    }
    let z = initial_indicator(filling)?;
    let first = &z[..p];
    Ok((1..=j_max).all(|j| {
        z[j * p..(j + 1) * p]
            .iter()
            .zip(first)
            .all(|(&b, &b0)| b0 == 1 || b == 0)
    }))
}

/// Zeros in each full block z[j p + 1, (j+1) p].
pub fn block_zero_counts(z: &[i8], p: usize) -> Vec<usize> {
    z.chunks_exact(p.max(1))
        .map(|b| b.iter().filter(|&&s| s == 0).count())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimIndices {
    /// k_1, k_2, …
    pub k: Vec<usize>,
    pub steps_simulated: usize,
    /// Why the list stops short of `m_max`.
    pub diagnostic: Option<String>,
}

/// Length of the chain of filled runs from position 1: the first run is
/// `[1, n_k]`, each later run starts right after a single unfilled cell and
/// is strictly shorter than the one before; every run must end at an
/// unfilled cell inside the window.
fn chain_length(unfilled: &BTreeSet<usize>, n_k: usize, window: usize) -> usize {
    let mut hole = n_k + 1;
    if hole > window || !unfilled.contains(&hole) {
        return 0;
    }
    let mut runs = 1;
    let mut previous = n_k;
    loop {
        let start = hole + 1;
        if start > window || unfilled.contains(&start) {
            return runs;
        }
        let Some(&next) = unfilled.range(start..).next() else {
            return runs;
        };
        let len = next - start;
        if len >= previous {
            return runs;
        }
        runs += 1;
        previous = len;
        hole = next;
    }
}

/// Simulates the readout filling and records k_1 < k_2 < …: k_m is the
/// first step past k_{m−1} + (m − 1) after which the prefix shows m filled
/// runs of strictly decreasing lengths separated by single unfilled cells,
/// the first ending at the step's initial cell.
pub fn find_claim_indices(scale: &Scale, m_max: usize, window: usize) -> Result<ClaimIndices> {
    let mut builder = ReadoutBuilder::new(scale.clone(), window)?;
    let mut unfilled: BTreeSet<usize> = (1..=window).collect();
    let mut k = Vec::with_capacity(m_max);
    while k.len() < m_max {
        if builder.is_complete() {
            break;
        }
        let rec = builder.place(0)?;
        unfilled.remove(&rec.first_position);
        if let Some(p) = rec.period.within() {
            let mut pos = rec.first_position + p as usize;
            while pos <= window {
                unfilled.remove(&pos);
                pos += p as usize;
            }
        }
        let m = k.len() + 1;
        let eligible = k.last().is_none_or(|&prev| rec.step > prev + (m - 1));
        if eligible && chain_length(&unfilled, rec.first_position, window) >= m {
            k.push(rec.step);
        }
    }
    let diagnostic = (k.len() < m_max).then(|| {
        format!(
            "window {window} filled after {} steps; found k_1..k_{} only",
            builder.steps_taken(),
            k.len()
        )
    });
    Ok(ClaimIndices {
        k,
        steps_simulated: builder.steps_taken(),
        diagnostic,
    })
}

/// 1-based position of the first of `m` ones in `z`, each preceded and
/// followed by at least `m` zeros inside `z`. Nonzero symbols count as ones.
pub fn sparse_pattern_search(z: &[i8], m: usize) -> Option<usize> {
    if m == 0 {
        return None;
    }
    let ones: Vec<usize> = z
        .iter()
        .enumerate()
        .filter(|(_, &s)| s != 0)
        .map(|(i, _)| i)
        .collect();
    // gaps[i] = zeros before ones[i]; gaps[len] = zeros after the last one.
    let mut gaps = Vec::with_capacity(ones.len() + 1);
    let mut prev: Option<usize> = None;
    for &i in &ones {
        gaps.push(prev.map_or(i, |p| i - p - 1));
        prev = Some(i);
    }
    gaps.push(prev.map_or(z.len(), |p| z.len() - p - 1));
    let mut run = 0;
    for i in 0..gaps.len() {
        if gaps[i] >= m {
            run += 1;
            if run > m {
                return Some(ones[i - m] + 1);
            }
        } else {
            run = 0;
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContrastRow {
    pub n: usize,
    pub y_count: u64,
    pub x_count: u64,
    /// census(x_y, n) / 2^n.
    pub x_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyContrast {
    pub rows: Vec<ContrastRow>,
    pub x_binary: bool,
}

impl EntropyContrast {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,census_y,census_x,x_ratio\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{}", r.n, r.y_count, r.x_count, r.x_ratio);
        }
        out
    }
}

/// Block counts of y and of x_y side by side.
pub fn example_7_2_entropy_contrast(example: &Example72, ns: &[usize]) -> Result<EntropyContrast> {
    let x = example.filling.to_sequence()?;
    let rows = ns
        .iter()
        .map(|&n| {
            let y_count = block_census(&example.y, n, None)?.count;
            let x_count = block_census(&x, n, None)?.count;
            Ok(ContrastRow {
                n,
                y_count,
                x_count,
                x_ratio: x_count as f64 / 2f64.powi(n as i32),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EntropyContrast {
        rows,
        x_binary: x.iter().all(|&s| s == 0 || s == 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::build_readout;

    fn naive(x: &[i8], n: usize) -> u64 {
        let mut seen: Vec<&[i8]> = Vec::new();
        for w in x.windows(n) {
            if !seen.contains(&w) {
                seen.push(w);
            }
        }
        seen.len() as u64
    }

    fn z_filling(first: u64, ratio: u64, window: usize) -> PartialFilling {
        let scale = Scale::geometric(first, ratio, window as u64).unwrap();
        build_readout(&SymbolSequence::zeros(window), &scale, window).unwrap()
    }

    #[test]
    fn census_matches_naive_scan() {
        let x: Vec<i8> = (0..600u32).map(|i| ((i * i + 3 * i) % 7 % 3) as i8 - 1).collect();
        for n in 1..=12 {
            assert_eq!(block_census(&x, n, None).unwrap().count, naive(&x, n), "n = {n}");
        }
        let wide: Vec<i8> = (0..300u32).map(|i| (i * 7 % 13) as i8).collect();
        assert_eq!(block_census(&wide, 40, None).unwrap().count, naive(&wide, 40));
    }

    #[test]
    fn constant_has_one_block() {
        let c = vec![1i8; 100];
        let r = block_census(&c, 9, None).unwrap();
        assert_eq!(r.count, 1);
        assert_eq!(r.entropy, 0.0);
    }

    #[test]
    fn zero_cap_filters() {
        let x = [0i8, 0, 1, 1, 0, 1];
        // blocks of length 2: 00, 01, 11, 10, 01 → distinct 00, 01, 11, 10
        assert_eq!(block_census(&x, 2, None).unwrap().count, 4);
        assert_eq!(block_census(&x, 2, Some(Ratio::new(1, 2))).unwrap().count, 3);
        assert_eq!(block_census(&x, 2, Some(Ratio::new(0, 1))).unwrap().count, 1);
    }

    #[test]
    fn zero_frequency_for_powers_of_three() {
        let f = z_filling(3, 3, 81);
        let r = verify_zero_frequency(&f, 3).unwrap();
        assert_eq!(r.measured, Ratio::new(10, 27));
        assert!(r.equal);
        assert_eq!(verify_zero_frequency(&f, 1).unwrap().measured, Ratio::from_integer(0));
    }

    #[test]
    fn zero_frequency_for_powers_of_ten() {
        let f = z_filling(10, 10, 1000);
        let r = verify_zero_frequency(&f, 2).unwrap();
        assert_eq!(r.formula, Ratio::new(9, 100));
        assert!(r.equal);
    }

    #[test]
    fn replacement_on_window_81() {
        let f = z_filling(3, 3, 81);
        assert!(verify_replacement(&f, 2, 8).unwrap());
        assert!(verify_replacement(&f, 1, 0).unwrap());
        assert!(verify_replacement(&f, 2, 9).is_err());
    }

    #[test]
    fn claim_indices_start_at_one() {
        let scale = Scale::geometric(3, 3, 100_000).unwrap();
        let c = find_claim_indices(&scale, 3, 100_000).unwrap();
        assert_eq!(c.k[0], 1);
        for (m, w) in c.k.windows(2).enumerate() {
            assert!(w[1] > w[0] + m + 1);
        }
        let short = find_claim_indices(&scale, 50, 100_000).unwrap();
        assert!(short.diagnostic.is_some());
    }

    #[test]
    fn chain_detection() {
        // filled: [1,5], hole 6, [7,9], hole 10, [11,11], hole 12.., window 14
        let unfilled: BTreeSet<usize> = [6, 10, 12, 13, 14].into_iter().collect();
        assert_eq!(chain_length(&unfilled, 5, 14), 3);
        // equal lengths stop the chain
        let unfilled: BTreeSet<usize> = [3, 6].into_iter().collect();
        assert_eq!(chain_length(&unfilled, 2, 8), 1);
    }

    #[test]
    fn sparse_pattern() {
        let z = [0i8, 0, 1, 0, 0, 1, 0, 0, 1, 0];
        assert_eq!(sparse_pattern_search(&z, 1), Some(3));
        assert_eq!(sparse_pattern_search(&z, 2), Some(3));
        assert_eq!(sparse_pattern_search(&z, 3), None);
        assert_eq!(sparse_pattern_search(&[1i8; 20], 1), None);
    }
}
