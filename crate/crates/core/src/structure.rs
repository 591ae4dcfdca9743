//! Periodic parts, densities on aligned prefixes and the regularity defect.

use std::fmt::Write as _;

use num_rational::Ratio;
use rayon::prelude::*;

use crate::builder::{Cell, PartialFilling, ReadoutSource, Scheme};
use crate::error::{Error, Result};
use crate::sequence::SymbolSequence;

/// Sorted 1-based positions inside a window `[1, window]`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PositionSet {
    window: usize,
    positions: Vec<usize>,
}

impl PositionSet {
    fn from_mask(mask: impl Iterator<Item = bool>, window: usize) -> Self {
        let positions = mask
            .enumerate()
            .filter(|&(_, keep)| keep)
            .map(|(i, _)| i + 1)
            .collect();
        PositionSet { window, positions }
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn contains(&self, pos: usize) -> bool {
        self.positions.binary_search(&pos).is_ok()
    }

    pub fn is_subset(&self, other: &PositionSet) -> bool {
        self.positions.iter().all(|&p| other.contains(p))
    }

    /// |set ∩ [1, len]| / len.
    pub fn density_on(&self, len: usize) -> Ratio<u64> {
        let count = self.positions.partition_point(|&p| p <= len);
        Ratio::new(count as u64, len.max(1) as u64)
    }
}

fn step_period(filling: &PartialFilling, cell: &Cell) -> Option<u64> {
    let k = cell.step()?;
    filling.step(k)?.period.within()
}

/// Cells written by steps whose period divides `p`.
pub fn declared_periodic_part(filling: &PartialFilling, p: u64) -> PositionSet {
    PositionSet::from_mask(
        filling
            .cells()
            .iter()
            .map(|c| step_period(filling, c).is_some_and(|pk| p.is_multiple_of(pk))),
        filling.window(),
    )
}

/// Positions whose residue class mod `p` is constant on the window. Larger
/// than the declared part whenever repetitions happen by accident.
pub fn empirical_periodic_part(x: &SymbolSequence, p: usize) -> Result<PositionSet> {
    if p == 0 || p >= x.len() {
        return Err(Error::InvalidArgument(format!(
            "period {p} leaves no repetition inside a window of {}",
            x.len()
        )));
    }
    let constant: Vec<bool> = (0..p)
        .map(|r| x[r..].iter().step_by(p).all(|&s| s == x[r]))
        .collect();
    Ok(PositionSet::from_mask((0..x.len()).map(|i| constant[i % p]), x.len()))
}

/// Cells left unfilled.
pub fn unfilled_part(filling: &PartialFilling) -> PositionSet {
    PositionSet::from_mask(filling.cells().iter().map(|c| !c.is_filled()), filling.window())
}

/// Cells not written by any step with an in-window period: the unfilled ones
/// and those filled by steps whose period exceeds the window.
pub fn beyond_window_part(filling: &PartialFilling) -> PositionSet {
    PositionSet::from_mask(
        filling.cells().iter().map(|c| step_period(filling, c).is_none()),
        filling.window(),
    )
}

/// x read along the positions of `aper`, in increasing order.
pub fn aperiodic_readout(x: &SymbolSequence, aper: &PositionSet) -> Result<SymbolSequence> {
    aper.positions().iter().map(|&p| x.at(p)).collect::<Result<Vec<_>>>().map(SymbolSequence::new)
}

/// As [`aperiodic_readout`], reading the symbols of a filling; unfilled cells fail.
pub fn filling_readout(filling: &PartialFilling, aper: &PositionSet) -> Result<SymbolSequence> {
    aper.positions()
        .iter()
        .map(|&p| {
            filling
                .cell(p)
                .and_then(|c| c.symbol())
                .ok_or(Error::Unfilled(p))
        })
        .collect::<Result<Vec<_>>>()
        .map(SymbolSequence::new)
}

/// Density of Per_{p_k} for one in-window step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelDensity {
    pub k: usize,
    pub p: u64,
    /// Declared Σ_{k'≤k} of the step densities.
    pub declared: Ratio<u128>,
    /// Count of cells written by steps 1..k on [1, ⌊N/p_k⌋·p_k], divided by that length.
    pub measured: Ratio<u128>,
    /// Cells past the aligned prefix.
    pub remainder: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub subject: String,
    pub window: usize,
    pub levels: Vec<LevelDensity>,
    /// 1 − Σ of the in-window step densities.
    pub defect: Ratio<u128>,
    /// Share of the window not covered by in-window periods.
    pub aperiodic_estimate: f64,
    pub banach_window: usize,
    /// Largest and smallest share of covered cells over windows of `banach_window` cells.
    pub banach_max: f64,
    pub banach_min: f64,
}

impl DensityReport {
    /// `key=value` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "subject={}", self.subject);
        let _ = writeln!(out, "window={}", self.window);
        let _ = writeln!(out, "defect={}", self.defect);
        let _ = writeln!(out, "defect_approx={:.12}", ratio_f64(self.defect));
        let _ = writeln!(out, "aperiodic_estimate={:.12}", self.aperiodic_estimate);
        let _ = writeln!(out, "banach_window={}", self.banach_window);
        let _ = writeln!(out, "banach_max={:.12}", self.banach_max);
        let _ = writeln!(out, "banach_min={:.12}", self.banach_min);
        for l in &self.levels {
            let _ = writeln!(out, "level.{}.p={}", l.k, l.p);
            let _ = writeln!(out, "level.{}.declared={}", l.k, l.declared);
            let _ = writeln!(out, "level.{}.measured={}", l.k, l.measured);
            let _ = writeln!(out, "level.{}.remainder={}", l.k, l.remainder);
        }
        out
    }

    /// Rows `k,p_k,density` with the measured density.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,p_k,density\n");
        for l in &self.levels {
            let _ = writeln!(out, "{},{},{}", l.k, l.p, ratio_f64(l.measured));
        }
        out
    }
}

pub(crate) fn ratio_f64(r: Ratio<u128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn subject(filling: &PartialFilling) -> String {
    match filling.scheme() {
        Scheme::Block { q, .. } => {
            let q: Vec<String> = q.iter().map(u64::to_string).collect();
            format!("block q={}", q.join(","))
        }
        Scheme::Readout { scale, source } => {
            let source = match source {
                ReadoutSource::Sequence => "sequence",
                ReadoutSource::Mobius => "mobius",
            };
            format!("readout scale={} y={source}", scale.spec())
        }
    }
}

/// Per-level densities and d with the Banach sub-window set to the largest
/// in-window period (or the whole window).
pub fn regularity_defect(filling: &PartialFilling) -> DensityReport {
    let h = filling
        .steps()
        .iter()
        .filter_map(|s| s.period.within())
        .max()
        .map_or(filling.window(), |p| p as usize);
    regularity_defect_at(filling, h)
}

pub fn regularity_defect_at(filling: &PartialFilling, banach_window: usize) -> DensityReport {
    let n = filling.window();
    let h = banach_window.clamp(1, n.max(1));
    let in_window: Vec<(usize, u64)> = filling
        .steps()
        .iter()
        .filter_map(|s| s.period.within().map(|p| (s.step, p)))
        .collect();

    // For each in-window level, cells of steps ≤ k on its aligned prefix.
    let level_of = |c: &Cell| -> Option<usize> { step_period(filling, c).and(c.step()) };
    let limits: Vec<usize> = in_window.iter().map(|&(_, p)| n / p as usize * p as usize).collect();
    let counts = filling
        .cells()
        .par_iter()
        .enumerate()
        .fold(
            || vec![0usize; in_window.len()],
            |mut acc, (i, c)| {
                if let Some(step) = level_of(c) {
                    for (j, &(k, _)) in in_window.iter().enumerate() {
                        if step <= k && i < limits[j] {
                            acc[j] += 1;
                        }
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![0usize; in_window.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );

    let mut declared = Ratio::from_integer(0u128);
    let mut levels = Vec::with_capacity(in_window.len());
    for (j, &(k, p)) in in_window.iter().enumerate() {
        declared += filling.step_density(k).unwrap_or(Ratio::from_integer(0));
        levels.push(LevelDensity {
            k,
            p,
            declared,
            measured: Ratio::new(counts[j] as u128, limits[j] as u128),
            remainder: n - limits[j],
        });
    }
    let defect = Ratio::from_integer(1u128) - declared;

    let covered: Vec<u32> = filling
        .cells()
        .iter()
        .map(|c| level_of(c).is_some() as u32)
        .collect();
    let total: u32 = covered.iter().sum();
    let (mut lo, mut hi) = (u32::MAX, 0u32);
    let mut run: u32 = covered[..h].iter().sum();
    for i in h..=n {
        lo = lo.min(run);
        hi = hi.max(run);
        if i < n {
            run = run + covered[i] - covered[i - h];
        }
    }

    DensityReport {
        subject: subject(filling),
        window: n,
        levels,
        defect,
        aperiodic_estimate: 1.0 - total as f64 / n as f64,
        banach_window: h,
        banach_max: hi as f64 / h as f64,
        banach_min: lo as f64 / h as f64,
    }
}

/// Symbol counts of each full p-block `[jp+1, (j+1)p]` that lie in `set`.
pub fn aligned_block_counts(set: &PositionSet, p: usize) -> Vec<usize> {
    let blocks = set.window() / p.max(1);
    let mut counts = vec![0usize; blocks];
    for &pos in set.positions() {
        let j = (pos - 1) / p;
        if j < blocks {
            counts[j] += 1;
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::{build_block_scheme, build_readout};
    use crate::odometer::Scale;

    fn seq(s: &str) -> SymbolSequence {
        SymbolSequence::from_digits(s).unwrap()
    }

    #[test]
    fn figure_one_declared_part() {
        let f = build_block_scheme(&[7], &[seq("0100")], 70).unwrap();
        let per = declared_periodic_part(&f, 7);
        assert!(per.positions().iter().all(|&n| (1..=4).contains(&((n - 1) % 7 + 1))));
        assert_eq!(per.len(), 40);
    }

    #[test]
    fn readout_period_three() {
        let scale = Scale::geometric(3, 3, 200).unwrap();
        let f = build_readout(&SymbolSequence::zeros(200), &scale, 200).unwrap();
        let per = declared_periodic_part(&f, 3);
        assert!(per.positions().iter().all(|&n| n % 3 == 1));
        assert_eq!(per.len(), 67);
        assert!(unfilled_part(&f).is_empty());
        assert!(aperiodic_readout(&f.to_sequence().unwrap(), &unfilled_part(&f)).unwrap().is_empty());
    }

    #[test]
    fn empirical_contains_declared() {
        let f = build_block_scheme(&[7, 6], &[seq("0100"), seq("000100000")], 420).unwrap();
        let x: SymbolSequence = f.cells().iter().map(|c| c.symbol().unwrap_or(9)).collect();
        for p in [7usize, 42, 84] {
            let emp = empirical_periodic_part(&x, p).unwrap();
            assert!(declared_periodic_part(&f, p as u64).is_subset(&emp));
        }
        assert!(empirical_periodic_part(&x, 420).is_err());
        let c = SymbolSequence::new(vec![2; 30]);
        assert_eq!(empirical_periodic_part(&c, 4).unwrap().len(), 30);
    }

    #[test]
    fn figure_two_defect() {
        let f = build_block_scheme(&[7, 6], &[seq("0100"), seq("000100000")], 420).unwrap();
        let r = regularity_defect(&f);
        assert_eq!(r.defect, Ratio::new(3, 14));
        for l in &r.levels {
            assert_eq!(l.declared, l.measured);
        }
        assert!((r.aperiodic_estimate - 3.0 / 14.0).abs() < 1e-12);
        assert!(r.to_csv().starts_with("k,p_k,density\n1,7,"));
    }

    #[test]
    fn unfilled_readout_fails() {
        let f = build_block_scheme(&[7], &[seq("0100")], 70).unwrap();
        assert!(matches!(filling_readout(&f, &unfilled_part(&f)), Err(Error::Unfilled(5))));
    }
}
